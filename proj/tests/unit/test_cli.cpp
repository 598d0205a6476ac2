#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "setrisk_cli/cli.hpp"
#include "setrisk_cli/scenario.hpp"

using namespace setrisk;
using namespace setrisk::cli;

namespace {

const std::string kDir = SETRISK_FIXTURE_DIR;
const std::string kBasic = kDir + "/basic.json";
const std::string kTwo = kDir + "/two_assets.json";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json record(const Run& r) {
  REQUIRE(r.code == kOk);
  return nlohmann::json::parse(r.out).at("record");
}

}  // namespace

TEST_CASE("scenario round trip is lossless") {
  const auto s = load_scenario(kBasic);
  CHECK(s.sets.at("imported").hull);
  CHECK(s.sets.at("imported").generators.size() == 2);
  const auto again = parse_scenario(to_json(s));
  CHECK(again == s);
  CHECK(to_json(again) == to_json(s));

  // Full-precision decimals survive a text round trip.
  nlohmann::json doc = {{"space", {0.1, 0.2, 0.7}}, {"sets", {{"x", {{"generators", {{1.0 / 3, -2e-17, 1e300}}}}}}}};
  const auto s2 = parse_scenario(nlohmann::json::parse(doc.dump()));
  CHECK(s2.sets.at("x").generators[0][0] == 1.0 / 3);
  CHECK(s2.space[2] == 0.7);
}

TEST_CASE("scenario errors carry their field") {
  try {
    load_scenario(kDir + "/bad_dim.json");
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
    CHECK(std::string(e.what()).find("sets.bad") != std::string::npos);
  }
  try {
    load_scenario(kDir + "/bad_kind.json");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
    CHECK(std::string(e.what()).find("measures.m.base.kind") != std::string::npos);
  }
  CHECK_THROWS_AS(load_scenario(kDir + "/broken.json"), Error);
  const auto s = load_scenario(kBasic);
  try {
    s.set("missing");
    FAIL("expected a resolution error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::resolution);
  }
}

TEST_CASE("eval") {
  const auto r = run({"eval", "--scenario", kBasic, "--set", "quartet", "--measure", "wc_es"});
  CHECK(r.code == kOk);
  CHECK(r.out.find("-1.5") != std::string::npos);
  const auto rec = record(run({"eval", "--scenario", kBasic, "--set", "quartet", "--measure", "wc_es", "--format", "json"}));
  CHECK(rec.at("value").get<double>() == -1.5);
  CHECK(rec.at("attaining_generator") == 0);
  for (const char* m : {"wc_es", "wc_el", "wc_ent", "wc_max", "most", "blend", "sf", "bochner", "induced"}) {
    CAPTURE(m);
    const auto z = record(run({"eval", "--scenario", kBasic, "--set", "zero", "--measure", m, "--format", "json"}));
    CHECK(std::abs(z.at("value").get<double>()) <= 1e-8);
  }
  // "wide" = {(1,2,3,4), 0}: the zero generator (risk 0) beats -1.5.
  CHECK(record(run({"eval", "--scenario", kBasic, "--set", "wide", "--measure", "wc_es", "--format", "json"}))
            .at("attaining_generator") == 1);
}

TEST_CASE("exit statuses") {
  CHECK(run({"eval", "--scenario", kBasic, "--set", "nope", "--measure", "wc_es"}).code == kResolution);
  CHECK(run({"eval", "--scenario", kBasic, "--set", "quartet", "--measure", "nope"}).code == kResolution);
  CHECK(run({"eval", "--scenario", kDir + "/bad_dim.json", "--set", "bad", "--measure", "m"}).code == kDimension);
  CHECK(run({"eval", "--scenario", kDir + "/broken.json", "--set", "x", "--measure", "m"}).code == kParse);
  CHECK(run({"eval", "--scenario", kDir + "/missing.json", "--set", "x", "--measure", "m"}).code == kParse);
  CHECK(run({"axioms", "--scenario", kBasic, "--measure", "wc_es", "--trials", "0"}).code == kParse);
  CHECK(run({"eval", "--scenario", kBasic, "--set", "quartet", "--measure", "wc_es", "--tol", "-1"}).code == kParse);
  CHECK(run({"bogus"}).code == kParse);
  CHECK(run({"portfolio", "--scenario", kTwo, "--set", "antithetic", "--measure", "es", "--mu", "0.5"}).code ==
        kInfeasible);
  CHECK(run({"dual", "--scenario", kTwo, "--set", "point", "--measure", "var"}).code == kRefusal);
  const auto bad = run({"eval", "--scenario", kBasic, "--set", "nope", "--measure", "wc_es"});
  CHECK(bad.err.find("nope") != std::string::npos);
}

TEST_CASE("axioms") {
  const auto rec =
      record(run({"axioms", "--scenario", kBasic, "--measure", "wc_es", "--trials", "200", "--format", "json"}));
  CHECK(rec.at("all_pass") == true);
  CHECK(rec.at("axioms").size() == 8);
  const auto var = record(run({"axioms", "--scenario", kBasic, "--measure", "wc_var", "--format", "json"}));
  bool convexity_flagged = false;
  for (const auto& row : var.at("axioms"))
    if (row.at("axiom") == "Convexity") convexity_flagged = row.at("violations").get<int>() >= 1;
  CHECK(convexity_flagged);
  const auto human = run({"axioms", "--scenario", kBasic, "--measure", "wc_es", "--trials", "50"});
  CHECK(human.out.find("Monotonicity") != std::string::npos);
}

TEST_CASE("dual") {
  const auto v = record(run({"dual", "--scenario", kBasic, "--set", "pair", "--measure", "wc_es", "--method", "vertices",
                             "--format", "json"}));
  CHECK(v.at("gap").get<double>() <= 1e-9);
  CHECK(v.at("gap").get<double>() >= -1e-9);
  const auto g = record(
      run({"dual", "--scenario", kTwo, "--set", "point", "--measure", "ent", "--method", "grid", "--format", "json"}));
  CHECK(g.at("gap").get<double>() <= 1e-4);
  CHECK(run({"dual", "--scenario", kBasic, "--set", "pair", "--measure", "wc_ent", "--method", "vertices"}).code ==
        kRefusal);
}

TEST_CASE("portfolio, contributions, convergence, roundtrip") {
  const auto p = record(run({"portfolio", "--scenario", kTwo, "--set", "antithetic", "--measure", "es", "--mu", "0",
                             "--format", "json"}));
  CHECK(std::abs(p.at("value").get<double>()) <= 1e-12);
  CHECK(p.at("weights")[0].get<double>() == doctest::Approx(0.5));

  const auto c = record(run({"contrib", "--scenario", kTwo, "--set", "contrib", "--measure", "el", "--format", "json"}));
  CHECK(c.at("contribution").get<double>() == -1.0);
  CHECK(c.at("diversification").get<double>() == 0.0);

  const auto k = record(
      run({"converge", "--scenario", kBasic, "--sequence", "constant", "--measure", "wc_es", "--format", "json"}));
  for (const auto& d : k.at("hausdorff")) CHECK(d.get<double>() == 0.0);
  for (const auto& d : k.at("value_gap")) CHECK(d.get<double>() == 0.0);
  const auto t = record(run({"converge", "--scenario", kBasic, "--set", "pair", "--measure", "wc_es", "--steps", "10",
                             "--format", "json"}));
  CHECK(t.at("value_gap").back().get<double>() == doctest::Approx(0.1));

  const auto r = record(run({"roundtrip", "--scenario", kBasic, "--measure", "wc_el", "--trials", "50", "--format",
                             "json"}));
  CHECK(r.at("pass") == true);
  CHECK(r.at("max_deviation").get<double>() >= 0.0);
  CHECK(r.at("max_deviation").get<double>() <= 1e-8);
}

TEST_CASE("structured output is stable and mirrors the human numbers") {
  const std::vector<std::string> args{"dual", "--scenario", kBasic, "--set", "pair", "--measure", "wc_ent",
                                      "--method", "ascent", "--format", "json"};
  const auto a = run(args), b = run(args);
  CHECK(a.out == b.out);
  std::vector<std::string> human_args(args.begin(), args.end() - 2);
  const auto h = run(human_args);
  const auto doc = nlohmann::json::parse(a.out);
  for (const char* key : {"value", "bound", "gap", "penalty"}) {
    const std::string shown = doc.at("display").at(key).get<std::string>();
    CHECK(h.out.find(shown) != std::string::npos);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", doc.at("record").at(key).get<double>());
    CHECK(shown == buf);
  }
}

TEST_CASE("seed comes from the environment") {
  CHECK(default_seed() == 42);
  setenv("SETRISK_SEED", "7", 1);
  CHECK(default_seed() == 7);
  const auto rec = record(run({"axioms", "--scenario", kBasic, "--measure", "wc_el", "--trials", "5", "--format", "json"}));
  CHECK(rec.at("seed") == 7);
  setenv("SETRISK_SEED", "junk", 1);
  CHECK(default_seed() == 42);
  unsetenv("SETRISK_SEED");
}
