#include "setrisk_cli/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "setrisk_cli/scenario.hpp"

namespace setrisk::cli {

using ojson = nlohmann::ordered_json;

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::parse:
    case Errc::invalid_argument:
      return kParse;
    case Errc::resolution:
      return kResolution;
    case Errc::dimension_mismatch:
      return kDimension;
    case Errc::infeasible:
      return kInfeasible;
    case Errc::refusal:
    case Errc::unsupported:
    case Errc::guard_exceeded:
      return kRefusal;
    case Errc::invariant_breach:
      return kInternal;
  }
  return kInternal;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SETRISK_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 42;
}

namespace {

struct RunConfig {
  std::string scenario;
  std::string set;
  std::string measure;
  std::string sequence;
  std::string method;
  std::string format = "human";
  double tol = 1e-8;
  double mu = 0.0;
  double grid_pitch = 1e-3;
  std::uint64_t seed = 42;
  std::size_t trials = 500;
  std::size_t steps = 20;
};

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Non-finite values have no JSON number form.
ojson num(double v) {
  if (v == 0.0) return 0.0;  // no "-0" in reports
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

ojson nums(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double e : v) a.push_back(num(e));
  return a;
}

ojson nums(std::span<const double> v) { return nums(std::vector<double>(v.begin(), v.end())); }

// The human rendering of every number, mirrored into the structured record.
ojson displayify(const ojson& v) {
  if (v.is_number_float()) return fmt6(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_array() || v.is_object()) {
    ojson out = v.is_array() ? ojson::array() : ojson::object();
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (v.is_array())
        out.push_back(displayify(*it));
      else
        out[it.key()] = displayify(*it);
    }
    return out;
  }
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  return v;
}

std::string flat(const ojson& d) {
  if (d.is_string()) return d.get<std::string>();
  std::string s = "[";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? ", " : "") + flat(d[i]);
  return s + "]";
}

void render_human(const ojson& display, std::ostream& out) {
  std::size_t width = 0;
  for (auto it = display.begin(); it != display.end(); ++it)
    if (!(it->is_array() && !it->empty() && it->front().is_object())) width = std::max(width, it.key().size());
  for (auto it = display.begin(); it != display.end(); ++it) {
    const ojson& v = *it;
    if (v.is_array() && !v.empty() && v.front().is_object()) {
      // Table: one row per object, columns padded to the widest cell.
      std::vector<std::string> cols;
      for (auto c = v.front().begin(); c != v.front().end(); ++c) cols.push_back(c.key());
      std::vector<std::size_t> w(cols.size());
      for (std::size_t c = 0; c < cols.size(); ++c) {
        w[c] = cols[c].size();
        for (const auto& row : v) w[c] = std::max(w[c], flat(row.at(cols[c])).size());
      }
      out << it.key() << ":\n";
      auto line = [&](const std::function<std::string(std::size_t)>& cell) {
        std::string s = " ";
        for (std::size_t c = 0; c < cols.size(); ++c) {
          std::string x = cell(c);
          x.resize(w[c], ' ');
          s += " " + x;
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        out << s << "\n";
      };
      line([&](std::size_t c) { return cols[c]; });
      for (const auto& row : v) line([&](std::size_t c) { return flat(row.at(cols[c])); });
      continue;
    }
    std::string key = it.key();
    key.resize(width, ' ');
    out << key << "  " << flat(v) << "\n";
  }
}

void emit(const RunConfig& cfg, const ojson& record, std::ostream& out) {
  const ojson display = displayify(record);
  if (cfg.format == "json") {
    ojson doc;
    doc["record"] = record;
    doc["display"] = display;
    out << doc.dump(2) << "\n";
  } else {
    render_human(display, out);
  }
}

void require(bool cond, const std::string& what) {
  if (!cond) fail(Errc::invalid_argument, what);
}

void need(const std::string& value, const char* flag) {
  if (value.empty()) fail(Errc::invalid_argument, std::string("missing required option ") + flag);
}

ojson certificate_json(const Certificate& c) {
  ojson atoms = ojson::array();
  for (const auto& a : c.measure.atoms()) atoms.push_back({{"weight", num(a.weight)}, {"q", nums(a.q.masses())}});
  return atoms;
}

// ---------------------------------------------------------------------------

ojson cmd_eval(const Scenario& s, const RunConfig& cfg) {
  need(cfg.set, "--set");
  need(cfg.measure, "--measure");
  const auto r = s.measure(cfg.measure);
  const auto x = s.set(cfg.set);
  ojson rec;
  rec["command"] = "eval";
  rec["set"] = cfg.set;
  rec["measure"] = cfg.measure;
  rec["construction"] = r.name();
  rec["value"] = num(r(x));
  if (const auto idx = attaining_generator(r, x)) rec["attaining_generator"] = *idx;
  return rec;
}

ojson cmd_axioms(const Scenario& s, const RunConfig& cfg) {
  need(cfg.measure, "--measure");
  const auto r = s.measure(cfg.measure);
  InstanceSpec spec;
  spec.roundtrip_tol = cfg.tol;
  const auto reps = check_axioms(r, spec, cfg.trials, cfg.seed);
  ojson rows = ojson::array();
  bool all = true;
  for (const auto& rep : reps) {
    all = all && rep.passed();
    ojson row;
    row["axiom"] = axiom_name(rep.axiom);
    row["trials"] = rep.trials;
    row["violations"] = rep.violations.size();
    row["worst_slack"] = num(rep.worst_slack);
    row["first_witness"] =
        rep.passed() ? std::string("-")
                     : std::to_string(rep.violations.front().seed) + "/" + std::to_string(rep.violations.front().trial);
    rows.push_back(std::move(row));
  }
  ojson rec;
  rec["command"] = "axioms";
  rec["measure"] = cfg.measure;
  rec["seed"] = cfg.seed;
  rec["all_pass"] = all;
  rec["axioms"] = std::move(rows);
  return rec;
}

DualMethod parse_method(const std::string& m, const Srm& r) {
  if (m.empty()) {
    const auto* wc = r.as<WorstCase>();
    return wc && wc->base.is_coherent() ? DualMethod::Vertices : DualMethod::ProjectedAscent;
  }
  if (m == "vertices") return DualMethod::Vertices;
  if (m == "grid") return DualMethod::Grid;
  if (m == "ascent") return DualMethod::ProjectedAscent;
  fail(Errc::invalid_argument, "--method: expected vertices, grid or ascent");
}

ojson cmd_dual(const Scenario& s, const RunConfig& cfg) {
  need(cfg.set, "--set");
  need(cfg.measure, "--measure");
  const auto r = s.measure(cfg.measure);
  if (!r.traits().convex) fail(Errc::refusal, "measure \"" + cfg.measure + "\" is not flagged convex");
  const auto x = s.set(cfg.set);
  const auto method = parse_method(cfg.method, r);
  DualOptions opt;
  opt.grid_pitch = cfg.grid_pitch;
  opt.seed = cfg.seed;
  const auto c = maximize_dual(r, x, method, opt);
  ojson rec;
  rec["command"] = "dual";
  rec["set"] = cfg.set;
  rec["measure"] = cfg.measure;
  rec["method"] = dual_method_name(method);
  rec["value"] = num(c.value_bound + c.gap);
  rec["bound"] = num(c.value_bound);
  rec["penalty"] = num(c.penalty_value);
  rec["gap"] = num(c.gap);
  rec["exact_penalty"] = c.exact_penalty;
  rec["dual"] = certificate_json(c);
  return rec;
}

ojson cmd_portfolio(const Scenario& s, const RunConfig& cfg) {
  need(cfg.set, "--set");
  need(cfg.measure, "--measure");
  const auto res = portfolio_risk(s.set(cfg.set), s.scalar(cfg.measure), cfg.mu);
  ojson rec;
  rec["command"] = "portfolio";
  rec["assets"] = cfg.set;
  rec["measure"] = cfg.measure;
  rec["mu"] = num(cfg.mu);
  rec["value"] = num(res.value);
  rec["weights"] = nums(res.weights);
  rec["expected_return"] = num(res.expected_return);
  return rec;
}

ojson cmd_converge(const Scenario& s, const RunConfig& cfg) {
  need(cfg.measure, "--measure");
  const auto r = s.measure(cfg.measure);
  std::vector<RvSet> seq;
  std::optional<RvSet> limit;
  std::string id;
  if (!cfg.sequence.empty()) {
    const auto& def = s.sequence(cfg.sequence);
    for (const auto& m : def.sets) seq.push_back(s.set(m));
    limit = s.set(def.limit);
    id = cfg.sequence;
  } else {
    need(cfg.set, "--set or --sequence");
    require(cfg.steps >= 1, "--steps must be at least 1");
    const auto fam = MonotoneFamily::shrinking_translate(s.set(cfg.set), cfg.steps);
    seq = fam.sequence;
    limit = fam.limit;
    id = fam.name;
  }
  PkOptions opt;
  opt.sequence_id = id;
  const auto rep = convergence_report(r, seq, *limit, limit->generators(), opt);
  ojson wit = ojson::array();
  for (std::size_t k = 0; k < rep.pk_witnesses.size(); ++k)
    wit.push_back({{"witness", k}, {"class", pk_class_name(rep.pk_witnesses[k].classification)},
                   {"last_difference", num(rep.pk_witnesses[k].difference.back())}});
  ojson rec;
  rec["command"] = "converge";
  rec["sequence"] = id;
  rec["measure"] = cfg.measure;
  rec["hausdorff"] = nums(rep.hausdorff_tail);
  rec["value_gap"] = nums(rep.value_tail);
  rec["witnesses"] = std::move(wit);
  return rec;
}

ojson cmd_contrib(const Scenario& s, const RunConfig& cfg) {
  need(cfg.set, "--set");
  need(cfg.measure, "--measure");
  const auto x = s.set(cfg.set);
  const auto rho = s.scalar(cfg.measure);
  ojson rec;
  rec["command"] = "contrib";
  rec["set"] = cfg.set;
  rec["measure"] = cfg.measure;
  rec["contribution"] = num(risk_contribution(x, rho));
  rec["diversification"] = num(diversification_benefit(x, rho));
  return rec;
}

ojson cmd_roundtrip(const Scenario& s, const RunConfig& cfg) {
  need(cfg.measure, "--measure");
  InstanceSpec spec;
  spec.roundtrip_tol = std::min(cfg.tol, Srm::kDefaultTol);
  const auto rep = roundtrip_check(s.measure(cfg.measure), cfg.trials, cfg.tol, cfg.seed, spec);
  ojson rec;
  rec["command"] = "roundtrip";
  rec["measure"] = cfg.measure;
  rec["trials"] = rep.trials;
  rec["tol"] = num(cfg.tol);
  rec["max_deviation"] = num(cfg.tol - rep.worst_slack);
  rec["violations"] = rep.violations.size();
  rec["pass"] = rep.passed();
  return rec;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.seed = default_seed();
  CLI::App app{"setrisk: set-valued risk measures on finite probability spaces", "setrisk"};
  app.require_subcommand(1);

  using Command = std::function<ojson(const Scenario&, const RunConfig&)>;
  std::vector<std::pair<CLI::App*, Command>> commands;
  auto add = [&](const char* name, const char* help, Command fn) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", cfg.scenario, "scenario JSON file")->required();
    sub->add_option("--set", cfg.set, "set name");
    sub->add_option("--measure", cfg.measure, "measure name");
    sub->add_option("--tol", cfg.tol, "tolerance");
    sub->add_option("--seed", cfg.seed, "random seed (default: SETRISK_SEED or 42)");
    sub->add_option("--trials", cfg.trials, "random trials");
    sub->add_option("--format", cfg.format, "human or json")->check(CLI::IsMember({"human", "json"}));
    commands.emplace_back(sub, std::move(fn));
    return sub;
  };
  add("eval", "evaluate a measure on a set", cmd_eval);
  add("axioms", "randomized axiom checks", cmd_axioms);
  auto* dual = add("dual", "best dual certificate", cmd_dual);
  dual->add_option("--method", cfg.method, "vertices, grid or ascent");
  dual->add_option("--grid-pitch", cfg.grid_pitch, "simplex grid pitch");
  add("portfolio", "minimum-risk portfolio over the assets in --set", cmd_portfolio)
      ->add_option("--mu", cfg.mu, "expected return target");
  auto* conv = add("converge", "convergence diagnostics", cmd_converge);
  conv->add_option("--sequence", cfg.sequence, "sequence name from the scenario");
  conv->add_option("--steps", cfg.steps, "shrinking-translate steps when no sequence is given");
  add("contrib", "risk contribution and diversification benefit", cmd_contrib);
  add("roundtrip", "acceptance-set roundtrip check", cmd_roundtrip);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  try {
    require(cfg.tol > 0.0 && std::isfinite(cfg.tol), "--tol must be positive");
    require(cfg.grid_pitch > 0.0 && cfg.grid_pitch < 1.0, "--grid-pitch must lie in (0, 1)");
    require(cfg.trials >= 1, "--trials must be at least 1");
    const Scenario s = load_scenario(cfg.scenario);
    for (const auto& [sub, fn] : commands) {
      if (sub->parsed()) {
        ojson rec = fn(s, cfg);
        emit(cfg, rec, out);
        return kOk;
      }
    }
    return kInternal;
  } catch (const Error& e) {
    err << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace setrisk::cli
