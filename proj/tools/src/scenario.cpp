#include "setrisk_cli/scenario.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace setrisk::cli {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& field, const std::string& what) {
  fail(Errc::parse, field + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key)) parse_error(field, std::string("missing \"") + key + "\"");
  return obj.at(key);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) parse_error(field, "expected a number");
  return v.get<double>();
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) parse_error(field, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) parse_error(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> matrix(const json& v, const std::string& field) {
  if (!v.is_array()) parse_error(field, "expected an array of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(numbers(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& field) {
  return obj.contains(key) ? number(obj.at(key), field + "." + key) : fallback;
}

// Wraps library errors raised while building a named object so the message
// carries the scenario field.
template <class F>
auto in_field(const std::string& field, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (std::string(e.what()).rfind(field, 0) == 0) throw;
    throw Error(e.code(), field + ": " + e.what());
  }
}

ScalarRisk build_scalar(const json& spec, const ProbSpace& p, const std::string& field) {
  const std::string kind = text(member(spec, "kind", field), field + ".kind");
  if (kind == "el") {
    if (spec.contains("q")) return ScalarRisk::expected_loss(p, DualVec(numbers(spec.at("q"), field + ".q")));
    return ScalarRisk::expected_loss(p);
  }
  if (kind == "es") return ScalarRisk::expected_shortfall(p, number(member(spec, "alpha", field), field + ".alpha"));
  if (kind == "var") return ScalarRisk::value_at_risk(p, number(member(spec, "alpha", field), field + ".alpha"));
  if (kind == "entropic") return ScalarRisk::entropic(p, number(member(spec, "gamma", field), field + ".gamma"));
  if (kind == "max_loss") return ScalarRisk::max_loss(p);
  parse_error(field + ".kind", "unknown scalar measure \"" + kind + "\" (el, es, var, entropic, max_loss)");
}

std::vector<Rv> rows_to_rvs(const std::vector<std::vector<double>>& rows) {
  std::vector<Rv> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.emplace_back(r);
  return out;
}

}  // namespace

ProbSpace Scenario::prob_space() const {
  return in_field("space", [&] { return ProbSpace(space); });
}

RvSet Scenario::set(const std::string& name) const {
  const auto it = sets.find(name);
  if (it == sets.end()) fail(Errc::resolution, "unknown set \"" + name + "\"");
  const std::string field = "sets." + name;
  return in_field(field, [&] {
    if (it->second.generators.empty()) fail(Errc::invalid_argument, "no generators");
    auto gens = rows_to_rvs(it->second.generators);
    for (const auto& g : gens)
      if (g.size() != space.size())
        fail(Errc::dimension_mismatch, "generator has " + std::to_string(g.size()) + " values but the space has " +
                                           std::to_string(space.size()) + " atoms");
    return it->second.hull ? RvSet::hull(std::move(gens)) : RvSet(std::move(gens));
  });
}

namespace {

Srm build_measure(const Scenario& s, const std::string& name, int depth);

Srm build_measure_spec(const Scenario& s, const json& spec, const std::string& field, int depth) {
  const ProbSpace p = s.prob_space();
  if (!spec.is_object()) parse_error(field, "expected an object");
  if (!spec.contains("type")) return Srm::worst_case(build_scalar(spec, p, field));
  const std::string type = text(spec.at("type"), field + ".type");
  auto base = [&] { return build_scalar(member(spec, "base", field), p, field + ".base"); };
  if (type == "worst_case") return Srm::worst_case(base());
  if (type == "convex_combination")
    return Srm::convex_combination(base(), static_cast<std::size_t>(number(member(spec, "max_n", field), field + ".max_n")));
  if (type == "aggregation") {
    const std::string agg = text(member(spec, "agg", field), field + ".agg");
    if (agg != "ess_inf" && agg != "ess_sup") parse_error(field + ".agg", "expected ess_inf or ess_sup");
    return Srm::aggregation(agg == "ess_inf" ? Aggregator::EssInf : Aggregator::EssSup, base());
  }
  if (type == "robust") {
    const json& u = member(spec, "uncertainty", field);
    const std::string uf = field + ".uncertainty";
    const std::string kind = text(member(u, "kind", uf), uf + ".kind");
    if (kind == "sup_norm_ball")
      return Srm::robust(base(), UncertaintyMap::sup_norm_ball(number(member(u, "radius", uf), uf + ".radius")));
    if (kind == "perturbations")
      return Srm::robust(base(), UncertaintyMap::explicit_perturbations(
                                     rows_to_rvs(matrix(member(u, "offsets", uf), uf + ".offsets"))));
    parse_error(uf + ".kind", "expected sup_norm_ball or perturbations");
  }
  if (type == "shortfall") {
    const json& loss = member(spec, "loss", field);
    const std::string lf = field + ".loss";
    const std::string lk = text(member(loss, "kind", lf), lf + ".kind");
    if (lk != "exponential") parse_error(lf + ".kind", "only exponential losses can be written in a scenario");
    const auto l = ShortfallLoss::exponential(number(member(loss, "gamma", lf), lf + ".gamma"));
    const json& dual = member(spec, "dual", field);
    const std::string df = field + ".dual";
    const DualSet d = text(member(dual, "kind", df), df + ".kind") == "singleton"
                          ? DualSet::singleton(dual.contains("q") ? DualVec(numbers(dual.at("q"), df + ".q"))
                                                                  : DualVec::from_space(p))
                          : dual_set(build_scalar(dual, p, df));
    return Srm::shortfall(l, d, number(member(spec, "level", field), field + ".level"));
  }
  if (type == "composite") {
    const std::string op = text(member(spec, "op", field), field + ".op");
    const json& names = member(spec, "members", field);
    if (!names.is_array()) parse_error(field + ".members", "expected an array of measure names");
    std::vector<Srm> members;
    for (std::size_t i = 0; i < names.size(); ++i)
      members.push_back(build_measure(s, text(names[i], field + ".members[" + std::to_string(i) + "]"), depth + 1));
    if (op == "max") return Srm::composite_max(std::move(members));
    if (op == "min") return Srm::composite_min(std::move(members));
    if (op == "average")
      return Srm::composite_average(std::move(members), numbers(member(spec, "weights", field), field + ".weights"));
    parse_error(field + ".op", "expected max, min or average");
  }
  if (type == "accept_induced") {
    const auto inner = build_measure(s, text(member(spec, "of", field), field + ".of"), depth + 1);
    return Srm::accept_induced(acceptance(inner), number_or(spec, "tol", Srm::kDefaultTol, field));
  }
  if (type == "bochner") {
    if (!spec.contains("measures")) return Srm::bochner_min(p);
    std::vector<DualVec> qs;
    for (const auto& row : matrix(spec.at("measures"), field + ".measures")) qs.emplace_back(row);
    return Srm::bochner_min(p, std::move(qs));
  }
  parse_error(field + ".type", "unknown measure type \"" + type + "\"");
}

Srm build_measure(const Scenario& s, const std::string& name, int depth) {
  if (depth > 16) fail(Errc::parse, "measures." + name + ": references nest too deeply (cycle?)");
  const auto it = s.measures.find(name);
  if (it == s.measures.end()) fail(Errc::resolution, "unknown measure \"" + name + "\"");
  const std::string field = "measures." + name;
  return in_field(field, [&] { return build_measure_spec(s, it->second, field, depth); });
}

}  // namespace

Srm Scenario::measure(const std::string& name) const { return build_measure(*this, name, 0); }

ScalarRisk Scenario::scalar(const std::string& name) const {
  const auto it = measures.find(name);
  if (it == measures.end()) fail(Errc::resolution, "unknown measure \"" + name + "\"");
  const std::string field = "measures." + name;
  const json& spec = it->second;
  return in_field(field, [&] {
    if (spec.is_object() && spec.contains("base")) return build_scalar(spec.at("base"), prob_space(), field + ".base");
    if (spec.is_object() && !spec.contains("type")) return build_scalar(spec, prob_space(), field);
    fail(Errc::invalid_argument, "measure has no scalar base");
  });
}

const SequenceDef& Scenario::sequence(const std::string& name) const {
  const auto it = sequences.find(name);
  if (it == sequences.end()) fail(Errc::resolution, "unknown sequence \"" + name + "\"");
  return it->second;
}

void Scenario::validate() const {
  prob_space();
  for (const auto& [name, def] : sets) set(name);
  for (const auto& [name, spec] : measures) measure(name);
  for (const auto& [name, seq] : sequences) {
    in_field("sequences." + name, [&] {
      if (seq.sets.empty()) fail(Errc::invalid_argument, "empty sequence");
      for (const auto& m : seq.sets) set(m);
      set(seq.limit);
      return 0;
    });
  }
}

std::vector<std::vector<double>> read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse, "cannot open CSV file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (auto& c : line)
      if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '#') break;
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0' || errno == ERANGE)
        fail(Errc::parse, path.string() + ":" + std::to_string(lineno) + ": bad number \"" + tok + "\"");
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) parse_error("scenario", "expected a JSON object");
  Scenario s;
  s.space = numbers(member(doc, "space", "scenario"), "space");
  if (doc.contains("sets")) {
    const json& sets = doc.at("sets");
    if (!sets.is_object()) parse_error("sets", "expected an object");
    for (const auto& [name, def] : sets.items()) {
      const std::string field = "sets." + name;
      SetDef d;
      if (def.is_array()) {
        d.generators = matrix(def, field);
      } else {
        if (!def.is_object()) parse_error(field, "expected an object or a generator matrix");
        if (def.contains("generators") == def.contains("csv"))
          parse_error(field, "give exactly one of \"generators\" and \"csv\"");
        d.generators = def.contains("csv") ? read_csv_matrix(base_dir / text(def.at("csv"), field + ".csv"))
                                           : matrix(def.at("generators"), field + ".generators");
        if (def.contains("mode")) {
          const std::string mode = text(def.at("mode"), field + ".mode");
          if (mode != "finite" && mode != "hull") parse_error(field + ".mode", "expected finite or hull");
          d.hull = mode == "hull";
        }
      }
      s.sets.emplace(name, std::move(d));
    }
  }
  if (doc.contains("measures")) {
    const json& ms = doc.at("measures");
    if (!ms.is_object()) parse_error("measures", "expected an object");
    for (const auto& [name, spec] : ms.items()) s.measures.emplace(name, spec);
  }
  if (doc.contains("sequences")) {
    const json& seqs = doc.at("sequences");
    if (!seqs.is_object()) parse_error("sequences", "expected an object");
    for (const auto& [name, def] : seqs.items()) {
      const std::string field = "sequences." + name;
      SequenceDef q;
      const json& names = member(def, "sets", field);
      if (!names.is_array()) parse_error(field + ".sets", "expected an array of set names");
      for (std::size_t i = 0; i < names.size(); ++i)
        q.sets.push_back(text(names[i], field + ".sets[" + std::to_string(i) + "]"));
      q.limit = text(member(def, "limit", field), field + ".limit");
      s.sequences.emplace(name, std::move(q));
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse, "cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(Errc::parse, path.string() + ": " + e.what());
  }
  auto s = parse_scenario(doc, path.parent_path());
  s.validate();
  return s;
}

json to_json(const Scenario& s) {
  json doc;
  doc["space"] = s.space;
  json sets = json::object();
  for (const auto& [name, d] : s.sets) {
    json def;
    def["generators"] = d.generators;
    def["mode"] = d.hull ? "hull" : "finite";
    sets[name] = std::move(def);
  }
  doc["sets"] = std::move(sets);
  json ms = json::object();
  for (const auto& [name, spec] : s.measures) ms[name] = spec;
  doc["measures"] = std::move(ms);
  if (!s.sequences.empty()) {
    json seqs = json::object();
    for (const auto& [name, q] : s.sequences) seqs[name] = {{"sets", q.sets}, {"limit", q.limit}};
    doc["sequences"] = std::move(seqs);
  }
  return doc;
}

}  // namespace setrisk::cli
