#include <algorithm>
#include <cmath>
#include <limits>

#include "setrisk/lab.hpp"
#include "setrisk/rng.hpp"

namespace setrisk {

namespace {

using SrmProvider = std::function<Srm(CounterRng&, std::string&)>;

struct Sampler {
  CounterRng& rng;
  const InstanceSpec& spec;
  std::size_t n;

  double value() {
    double v = rng.uniform(-spec.value_range, spec.value_range);
    if (spec.grid > 0.0) v = std::round(v / spec.grid) * spec.grid;
    return v;
  }
  Rv rv() {
    std::vector<double> v(n);
    for (auto& e : v) e = value();
    return Rv(std::move(v));
  }
  std::size_t size() { return rng.between(spec.min_size, spec.max_size); }
  RvSet set(std::size_t k) {
    std::vector<Rv> g;
    for (std::size_t j = 0; j < k; ++j) g.push_back(rv());
    return RvSet(std::move(g));
  }
  RvSet set() { return set(size()); }
  std::vector<double> simplex_weights(std::size_t k) {
    std::vector<double> w(k);
    double s = 0.0;
    for (auto& e : w) s += (e = -std::log(1.0 - rng.uniform()));
    for (auto& e : w) e /= s;
    return w;
  }
};

ProbSpace draw_space(CounterRng& rng, const InstanceSpec& spec) {
  const std::size_t n = rng.between(spec.min_atoms, spec.max_atoms);
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& e : w) s += (e = rng.uniform(0.05, 1.0));
  for (auto& e : w) e /= s;
  return ProbSpace(std::move(w));
}

TrialOutcome inequality(double lhs, double rhs, std::string witness) {
  return {lhs, rhs, rhs - lhs, std::move(witness)};
}
TrialOutcome equality(double lhs, double rhs, std::string witness) {
  return {lhs, rhs, -std::abs(lhs - rhs), std::move(witness)};
}

double singleton_max(const Srm& r, const RvSet& x) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& g : x.generators()) m = std::max(m, r.eval(RvSet::singleton(g)));
  return m;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TrialOutcome run_trial(const SrmProvider& provider, const InstanceSpec& spec, Axiom axiom, std::uint64_t seed,
                       std::size_t trial) {
  CounterRng rng(seed, stream_id(static_cast<std::uint64_t>(axiom), trial));
  std::string prefix;
  const Srm r = provider(rng, prefix);
  Sampler s{rng, spec, r.atoms()};
  auto w = [&](const std::string& body) { return prefix + body; };

  switch (axiom) {
    case Axiom::Monotonicity: {
      const RvSet x = s.set();
      std::vector<Rv> ys;
      for (const auto& g : x.generators()) {
        std::vector<double> v(g.values().begin(), g.values().end());
        for (auto& e : v)
          if (rng.uniform() < 0.5) e += rng.uniform(0.0, spec.value_range);
        ys.emplace_back(std::move(v));
      }
      const RvSet y(std::move(ys));
      return inequality(r(y), r(x), w("X=" + to_string(x) + " Y=" + to_string(y)));
    }
    case Axiom::TranslationInvariance: {
      const RvSet x = s.set();
      const double a = s.value();
      return equality(r(x + a), r(x) - a, w("X=" + to_string(x) + " a=" + fmt(a)));
    }
    case Axiom::SetMonotonicity: {
      const RvSet x = s.set();
      const RvSet y = set_union(x, s.set(std::max<std::size_t>(1, s.size() / 2)));
      return inequality(r(x), r(y), w("X=" + to_string(x) + " Y=" + to_string(y)));
    }
    case Axiom::UnionBoundedness: {
      const RvSet x = s.set();
      const RvSet y = s.set();
      return inequality(r(set_union(x, y)), std::max(r(x), r(y)), w("X=" + to_string(x) + " Y=" + to_string(y)));
    }
    case Axiom::WcBoundedness: {
      // Two-member sets are where min/average composites break the bound.
      const std::size_t k =
          rng.uniform() < 0.5 ? std::clamp<std::size_t>(2, spec.min_size, spec.max_size) : s.size();
      const RvSet x = s.set(k);
      return inequality(r(x), singleton_max(r, x), w("X=" + to_string(x)));
    }
    case Axiom::Convexity: {
      const RvSet x = s.set();
      const RvSet y = s.set();
      const double lambda = rng.uniform();
      const RvSet z = minkowski_sum(scale(x, lambda), scale(y, 1.0 - lambda));
      return inequality(r(z), lambda * r(x) + (1.0 - lambda) * r(y),
                        w("X=" + to_string(x) + " Y=" + to_string(y) + " lambda=" + fmt(lambda)));
    }
    case Axiom::PositiveHomogeneity: {
      const RvSet x = s.set();
      const double gamma = rng.uniform(0.0, 3.0);
      return equality(r(scale(x, gamma)), gamma * r(x), w("X=" + to_string(x) + " gamma=" + fmt(gamma)));
    }
    case Axiom::SetConvexity: {
      const RvSet x = s.set();
      std::vector<Rv> z(x.generators().begin(), x.generators().end());
      for (std::size_t m = 0; m < x.size(); ++m) {
        const auto lam = s.simplex_weights(x.size());
        Rv c = Rv::zero(x.dim());
        for (std::size_t j = 0; j < x.size(); ++j) c += lam[j] * x[j];
        z.push_back(std::move(c));
      }
      const RvSet zs(std::move(z));
      return inequality(r(zs), r(x), w("X=" + to_string(x) + " convX~" + to_string(zs)));
    }
    case Axiom::Normalization:
      return equality(r(RvSet::zero(r.atoms())), 0.0, w("X={0}"));
    case Axiom::Lipschitz: {
      const RvSet x = s.set();
      RvSet y = x;
      if (rng.uniform() < 0.5) {
        std::vector<Rv> ys;
        for (const auto& g : x.generators()) {
          std::vector<double> v(g.values().begin(), g.values().end());
          for (auto& e : v) e += rng.uniform(-0.5, 0.5);
          ys.emplace_back(std::move(v));
        }
        y = RvSet(std::move(ys));
      } else {
        y = s.set();
      }
      return inequality(std::abs(r(x) - r(y)), hausdorff_generators(x, y),
                        w("X=" + to_string(x) + " Y=" + to_string(y)));
    }
    case Axiom::WorstCaseEquality: {
      const RvSet x = s.set();
      return equality(r(x), singleton_max(r, x), w("X=" + to_string(x)));
    }
    case Axiom::AcceptanceRoundtrip: {
      const RvSet x = s.set();
      const double diff = std::abs(induced_roundtrip(r, x, spec.roundtrip_tol) - r(x));
      return inequality(diff, spec.roundtrip_tol, w("X=" + to_string(x)));
    }
  }
  fail(Errc::invalid_argument, "unknown axiom");
}

std::vector<AxiomReport> run_all(const SrmProvider& provider, const InstanceSpec& spec, std::size_t trials,
                                 std::uint64_t seed, const std::vector<Axiom>& axioms) {
  spec.validate();
  std::vector<AxiomReport> reports;
  for (Axiom a : axioms) {
    AxiomReport rep;
    rep.axiom = a;
    rep.trials = trials;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
      try {
        auto out = run_trial(provider, spec, a, seed, t);
        rep.worst_slack = std::min(rep.worst_slack, out.slack);
        if (out.slack < kViolationSlack)
          rep.violations.push_back({seed, t, std::move(out.witness), out.lhs, out.rhs, out.slack});
      } catch (const Error& e) {
        if (rep.skipped++ == 0) rep.first_error = e.what();
      }
    }
    if (rep.worst_slack == std::numeric_limits<double>::infinity()) rep.worst_slack = 0.0;
    reports.push_back(std::move(rep));
  }
  return reports;
}

SrmProvider from_factory(const SrmFactory& factory, const InstanceSpec& spec) {
  return [&factory, &spec](CounterRng& rng, std::string& prefix) {
    const ProbSpace space = draw_space(rng, spec);
    std::string p = "P=(";
    for (std::size_t i = 0; i < space.size(); ++i) p += (i ? "," : "") + fmt(space.weight(i));
    prefix = p + ") ";
    return factory(space);
  };
}

SrmProvider from_srm(const Srm& r) {
  return [r](CounterRng&, std::string&) { return r; };
}

}  // namespace

const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::Monotonicity: return "Monotonicity";
    case Axiom::TranslationInvariance: return "TranslationInvariance";
    case Axiom::SetMonotonicity: return "SetMonotonicity";
    case Axiom::UnionBoundedness: return "UnionBoundedness";
    case Axiom::WcBoundedness: return "WcBoundedness";
    case Axiom::Convexity: return "Convexity";
    case Axiom::PositiveHomogeneity: return "PositiveHomogeneity";
    case Axiom::SetConvexity: return "SetConvexity";
    case Axiom::Normalization: return "Normalization";
    case Axiom::Lipschitz: return "Lipschitz";
    case Axiom::WorstCaseEquality: return "WorstCaseEquality";
    case Axiom::AcceptanceRoundtrip: return "AcceptanceRoundtrip";
  }
  return "?";
}

std::optional<Axiom> axiom_from_name(const std::string& name) {
  for (Axiom a : all_axioms())
    if (name == axiom_name(a)) return a;
  return std::nullopt;
}

std::vector<Axiom> definition_axioms() {
  return {Axiom::Monotonicity, Axiom::TranslationInvariance, Axiom::SetMonotonicity, Axiom::UnionBoundedness,
          Axiom::WcBoundedness, Axiom::Convexity,           Axiom::PositiveHomogeneity, Axiom::SetConvexity};
}

std::vector<Axiom> all_axioms() {
  auto v = definition_axioms();
  v.insert(v.end(), {Axiom::Normalization, Axiom::Lipschitz, Axiom::WorstCaseEquality, Axiom::AcceptanceRoundtrip});
  return v;
}

void InstanceSpec::validate() const {
  if (min_atoms == 0 || min_atoms > max_atoms || max_atoms > 8)
    fail(Errc::invalid_argument, "instance atoms must satisfy 1 <= min_atoms <= max_atoms <= 8");
  if (min_size == 0 || min_size > max_size || max_size > 10)
    fail(Errc::invalid_argument, "instance set sizes must satisfy 1 <= min_size <= max_size <= 10");
  if (!(value_range > 0.0) || !std::isfinite(value_range))
    fail(Errc::invalid_argument, "instance value range must be positive");
  if (!(grid >= 0.0)) fail(Errc::invalid_argument, "instance grid must be nonnegative");
  if (!(roundtrip_tol > 0.0)) fail(Errc::invalid_argument, "roundtrip tolerance must be positive");
}

std::vector<AxiomReport> check_axioms(const SrmFactory& factory, const InstanceSpec& spec, std::size_t trials,
                                      std::uint64_t seed, const std::vector<Axiom>& axioms) {
  return run_all(from_factory(factory, spec), spec, trials, seed, axioms);
}

std::vector<AxiomReport> check_axioms(const Srm& r, const InstanceSpec& spec, std::size_t trials, std::uint64_t seed,
                                      const std::vector<Axiom>& axioms) {
  return run_all(from_srm(r), spec, trials, seed, axioms);
}

TrialOutcome replay_trial(const SrmFactory& factory, const InstanceSpec& spec, Axiom axiom, std::uint64_t seed,
                          std::size_t trial) {
  return run_trial(from_factory(factory, spec), spec, axiom, seed, trial);
}

TrialOutcome replay_trial(const Srm& r, const InstanceSpec& spec, Axiom axiom, std::uint64_t seed, std::size_t trial) {
  return run_trial(from_srm(r), spec, axiom, seed, trial);
}

AxiomReport roundtrip_check(const Srm& r, std::size_t trials, double tol, std::uint64_t seed,
                            const InstanceSpec& spec) {
  InstanceSpec s = spec;
  s.roundtrip_tol = tol;
  return run_all(from_srm(r), s, trials, seed, {Axiom::AcceptanceRoundtrip}).front();
}

}  // namespace setrisk
