#include "setrisk/srm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "simplex_grid.hpp"

namespace setrisk {

namespace detail {
struct SrmNode {
  SrmConstruction construction;
  SrmTraits traits;
  std::size_t atoms;
  std::string name;
};
}  // namespace detail

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kBochnerPointGuard = std::size_t{1} << 20;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double max_over_generators(const RvSet& x, const std::function<double(const Rv&)>& f) {
  double best = kNegInf;
  for (const auto& g : x.generators()) best = std::max(best, f(g));
  return best;
}

void require_convex_for_hull(const ScalarRisk& base, const RvSet& x, const char* what) {
  if (x.is_hull() && !base.is_convex())
    fail(Errc::refusal, std::string(what) + " over a convex hull needs a convex base measure; " +
                            base.name() + " is not convex");
}

// Per-atom distinct values of the generators, ascending.
std::vector<std::vector<double>> atom_value_sets(const RvSet& x) {
  std::vector<std::vector<double>> sets(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    for (const auto& g : x.generators()) sets[i].push_back(g[i]);
    std::sort(sets[i].begin(), sets[i].end());
    sets[i].erase(std::unique(sets[i].begin(), sets[i].end()), sets[i].end());
    if (x.is_hull() && sets[i].size() > 2) sets[i] = {sets[i].front(), sets[i].back()};
  }
  return sets;
}

double bochner_min_value(const RvSet& x, const DualVec& q) {
  const auto sets = atom_value_sets(x);
  double product = 1.0;
  for (const auto& s : sets) product *= static_cast<double>(s.size());
  if (product <= static_cast<double>(kBochnerPointGuard)) {
    const auto integral = bochner_integral(x, q);
    return integral.front();
  }
  // Too many points to materialize; the minimum of a Minkowski sum of real
  // sets is the sum of the minima.
  double m = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i)
    m += q[i] >= 0.0 ? q[i] * sets[i].front() : q[i] * sets[i].back();
  return m;
}

double exponential_shortfall(const Shortfall& s, const RvSet& x) {
  const double lambda = s.loss.lambda();
  double best = kNegInf;
  for (const auto& g : x.generators()) {
    for (const auto& q : s.dual_vertices) {
      double shift = kNegInf;
      for (std::size_t i = 0; i < g.size(); ++i)
        if (q[i] > 0.0) shift = std::max(shift, -lambda * g[i]);
      double sum = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        if (q[i] > 0.0) sum += q[i] * std::exp(-lambda * g[i] - shift);
      best = std::max(best, (shift + std::log(sum)) / lambda);
    }
  }
  return best;
}

double worst_expected_loss(const Shortfall& s, const RvSet& x, double a) {
  double best = kNegInf;
  for (const auto& g : x.generators())
    for (const auto& q : s.dual_vertices) {
      double e = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        if (q[i] != 0.0) e += q[i] * s.loss(-(g[i] + a));
      best = std::max(best, e);
    }
  return best;
}

// inf{a : loss(-a) <= level} for an increasing loss, by bracket expansion and bisection.
double loss_root(const ShortfallLoss& loss, double level) {
  double hi = 1.0, lo = -1.0;
  int guard = 0;
  while (!(loss(-hi) <= level)) {
    hi *= 2.0;
    if (++guard > 60) fail(Errc::invalid_argument, "shortfall level is not inside the loss range");
  }
  guard = 0;
  while (loss(-lo) <= level) {
    lo *= 2.0;
    if (++guard > 60) fail(Errc::invalid_argument, "shortfall level is not inside the loss range");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (loss(-mid) <= level ? hi : lo) = mid;
  }
  return hi;
}

double custom_shortfall(const Shortfall& s, const RvSet& x) {
  const double norm = set_norm(x);
  double lo = s.zero_value - norm, hi = s.zero_value + norm;
  if (norm == 0.0) return 0.0;
  if (worst_expected_loss(s, x, lo) <= s.level) return lo - s.zero_value;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, norm); ++it) {
    const double mid = 0.5 * (lo + hi);
    (worst_expected_loss(s, x, mid) <= s.level ? hi : lo) = mid;
  }
  return hi - s.zero_value;
}

double eval_convex_comb(const ConvexComb& c, const RvSet& x) {
  if (!x.is_hull() && x.size() > c.max_n)
    fail(Errc::refusal, "convex-combination SRM limited to " + std::to_string(c.max_n) +
                            " generators, set has " + std::to_string(x.size()));
  const auto& rho = c.base;
  if (rho.is_convex() || x.is_singleton())
    return max_over_generators(x, [&](const Rv& g) { return rho(g); });
  const std::size_t k = x.size();
  const std::size_t steps = detail::steps_within_budget(k, 64, 2e5);
  std::vector<double> mix(x.dim());
  auto objective = [&](const std::vector<double>& w) {
    std::fill(mix.begin(), mix.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < mix.size(); ++i) mix[i] += w[j] * x[j][i];
    return rho(Rv(mix));
  };
  return detail::simplex_search(k, steps, 3, 4.0, objective).value;
}

double eval_robust(const Robust& r, const RvSet& x) {
  require_convex_for_hull(r.base, x, "robust SRM");
  return max_over_generators(x, [&](const Rv& g) {
    const auto alternatives = apply_uncertainty(r.u, g);
    return max_over_generators(alternatives, [&](const Rv& y) { return r.base(y); });
  });
}

double eval_construction(const detail::SrmNode& node, const RvSet& x) {
  return std::visit(
      overloaded{
          [&](const WorstCase& w) {
            require_convex_for_hull(w.base, x, "worst-case SRM");
            return max_over_generators(x, [&](const Rv& g) { return w.base(g); });
          },
          [&](const AcceptInduced& a) { return induced_bisection(a.family, x, a.tol).value; },
          [&](const Shortfall& s) {
            return s.loss.is_exponential() ? exponential_shortfall(s, x) : custom_shortfall(s, x);
          },
          [&](const Composite& c) {
            std::vector<double> vals;
            vals.reserve(c.members.size());
            for (const auto& m : c.members) vals.push_back(m.eval(x));
            switch (c.op) {
              case CompositeOp::Max: return *std::max_element(vals.begin(), vals.end());
              case CompositeOp::Min: return *std::min_element(vals.begin(), vals.end());
              case CompositeOp::Average: break;
            }
            double s = 0.0;
            for (std::size_t i = 0; i < vals.size(); ++i) s += c.weights[i] * vals[i];
            return s;
          },
          [&](const ConvexComb& c) { return eval_convex_comb(c, x); },
          [&](const Aggregation& a) {
            return a.base(a.agg == Aggregator::EssInf ? ess_inf(x) : ess_sup(x));
          },
          [&](const Robust& r) { return eval_robust(r, x); },
          [&](const BochnerMin& b) {
            if (b.measures.empty()) return -bochner_min_value(x, DualVec::from_space(b.space));
            double best = kNegInf;
            for (const auto& q : b.measures) best = std::max(best, -bochner_min_value(x, q));
            return best;
          },
      },
      node.construction);
}

void require_members(const std::vector<Srm>& members) {
  if (members.empty()) fail(Errc::invalid_argument, "composite SRM needs at least one member");
  for (const auto& m : members)
    if (m.atoms() != members.front().atoms())
      fail(Errc::dimension_mismatch, "composite members live on spaces of different size");
}

std::string join_names(const std::vector<Srm>& members) {
  std::string out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out += ", ";
    out += members[i].name();
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Loss functions and uncertainty maps

ShortfallLoss ShortfallLoss::exponential(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    fail(Errc::invalid_argument, "exponential loss rate must be strictly positive");
  return ShortfallLoss([lambda](double t) { return std::exp(lambda * t); }, "exp(" + fmt(lambda) + " t)",
                       lambda);
}

ShortfallLoss ShortfallLoss::custom(std::function<double(double)> fn, std::string name) {
  if (!fn) fail(Errc::invalid_argument, "custom loss needs a callable");
  return ShortfallLoss(std::move(fn), std::move(name), std::nullopt);
}

UncertaintyMap UncertaintyMap::sup_norm_ball(double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius))
    fail(Errc::invalid_argument, "uncertainty radius must be finite and nonnegative");
  return UncertaintyMap(SupNormBall{radius});
}

UncertaintyMap UncertaintyMap::divergence_ball(std::function<double(const Rv&, const Rv&)> divergence,
                                               double radius, std::vector<Rv> candidate_offsets) {
  if (!divergence) fail(Errc::invalid_argument, "divergence ball needs a divergence callable");
  if (!(radius >= 0.0) || !std::isfinite(radius))
    fail(Errc::invalid_argument, "uncertainty radius must be finite and nonnegative");
  return UncertaintyMap(DivergenceBall{std::move(divergence), radius, std::move(candidate_offsets)});
}

UncertaintyMap UncertaintyMap::explicit_perturbations(std::vector<Rv> offsets) {
  return UncertaintyMap(ExplicitPerturbations{std::move(offsets)});
}

std::string UncertaintyMap::name() const {
  return std::visit(overloaded{
                        [](const SupNormBall& b) { return "Ball(" + fmt(b.radius) + ")"; },
                        [](const DivergenceBall& b) { return "DivBall(" + fmt(b.radius) + ")"; },
                        [](const ExplicitPerturbations& e) {
                          return "Perturb(" + std::to_string(e.offsets.size()) + ")";
                        },
                    },
                    kind_);
}

RvSet apply_uncertainty(const UncertaintyMap& u, const Rv& x) {
  std::vector<Rv> out{x};
  std::visit(overloaded{
                 [&](const SupNormBall& b) {
                   const std::size_t n = x.size();
                   for (std::size_t i = 0; i < n; ++i) {
                     for (double sign : {1.0, -1.0}) {
                       std::vector<double> v(x.values().begin(), x.values().end());
                       v[i] += sign * b.radius;
                       out.emplace_back(std::move(v));
                     }
                   }
                   out.push_back(x + b.radius);
                   out.push_back(x + (-b.radius));
                 },
                 [&](const DivergenceBall& b) {
                   for (const auto& d : b.candidate_offsets) {
                     Rv y = x + d;
                     if (b.divergence(x, y) <= b.radius) out.push_back(std::move(y));
                   }
                 },
                 [&](const ExplicitPerturbations& e) {
                   for (const auto& d : e.offsets) out.push_back(x + d);
                 },
             },
             u.kind());
  return RvSet(std::move(out));
}

// ---------------------------------------------------------------------------
// Srm

Srm Srm::make(SrmConstruction c, SrmTraits traits, std::size_t atoms, std::string name) {
  return Srm(std::make_shared<const detail::SrmNode>(
      detail::SrmNode{std::move(c), traits, atoms, std::move(name)}));
}

const SrmConstruction& Srm::construction() const noexcept { return node_->construction; }
const SrmTraits& Srm::traits() const noexcept { return node_->traits; }
std::size_t Srm::atoms() const noexcept { return node_->atoms; }
std::string Srm::name() const { return node_->name; }

double Srm::eval(const RvSet& x) const {
  if (x.dim() != node_->atoms)
    fail(Errc::dimension_mismatch, name() + ": set has " + std::to_string(x.dim()) +
                                       " atoms, measure expects " + std::to_string(node_->atoms));
  return eval_construction(*node_, x);
}

double eval(const Srm& r, const RvSet& x) { return r.eval(x); }

Srm Srm::worst_case(ScalarRisk base) {
  SrmTraits t{.monetary = true,
              .convex = base.is_convex(),
              .coherent = base.is_coherent(),
              .worst_case = true,
              .normalized = true};
  const std::size_t n = base.space().size();
  auto name = "WorstCase[" + base.name() + "]";
  return make(WorstCase{std::move(base)}, t, n, std::move(name));
}

Srm Srm::accept_induced(AcceptFamily family, double tol) {
  if (!(tol > 0.0)) fail(Errc::invalid_argument, "induced SRM tolerance must be positive");
  if (!family.predicate) fail(Errc::invalid_argument, "acceptance family needs a predicate");
  if (family.atoms == 0) fail(Errc::invalid_argument, "acceptance family needs its atom count");
  SrmTraits t{.monetary = true, .convex = false, .coherent = false, .worst_case = false,
              .normalized = family.threshold == 0.0};
  const std::size_t n = family.atoms;
  auto name = "Induced[" + family.name + "]";
  return make(AcceptInduced{std::move(family), tol}, t, n, std::move(name));
}

Srm Srm::shortfall(ShortfallLoss loss, DualSet dual, double level) {
  if (!std::isfinite(level)) fail(Errc::invalid_argument, "shortfall level must be finite");
  if (loss.is_exponential() && !(level > 0.0))
    fail(Errc::invalid_argument, "shortfall level must lie inside the range (0, inf) of the exponential loss");
  auto verts = vertices(dual);
  const double zero = loss.is_exponential() ? -std::log(level) / loss.lambda() : loss_root(loss, level);
  SrmTraits t{.monetary = true, .convex = true, .coherent = false, .worst_case = true, .normalized = true};
  const std::size_t n = dual.dim();
  auto name = "Shortfall[" + loss.name() + " <= " + fmt(level) + "]";
  return make(Shortfall{std::move(loss), std::move(dual), level, std::move(verts), zero}, t, n,
              std::move(name));
}

Srm Srm::composite_max(std::vector<Srm> members) {
  require_members(members);
  SrmTraits t;
  t.monetary = std::all_of(members.begin(), members.end(), [](const Srm& m) { return m.traits().monetary; });
  t.convex = std::all_of(members.begin(), members.end(), [](const Srm& m) { return m.traits().convex; });
  t.coherent = std::all_of(members.begin(), members.end(), [](const Srm& m) { return m.traits().coherent; });
  t.worst_case = std::all_of(members.begin(), members.end(), [](const Srm& m) { return m.traits().worst_case; });
  t.normalized = std::all_of(members.begin(), members.end(), [](const Srm& m) { return m.traits().normalized; });
  const std::size_t n = members.front().atoms();
  auto name = "Max{" + join_names(members) + "}";
  return make(Composite{CompositeOp::Max, std::move(members), {}}, t, n, std::move(name));
}

Srm Srm::composite_min(std::vector<Srm> members) {
  require_members(members);
  SrmTraits t;
  t.monetary = std::all_of(members.begin(), members.end(), [](const Srm& m) { return m.traits().monetary; });
  t.normalized = std::all_of(members.begin(), members.end(), [](const Srm& m) { return m.traits().normalized; });
  const std::size_t n = members.front().atoms();
  auto name = "Min{" + join_names(members) + "}";
  return make(Composite{CompositeOp::Min, std::move(members), {}}, t, n, std::move(name));
}

Srm Srm::composite_average(std::vector<Srm> members, std::vector<double> weights) {
  require_members(members);
  if (weights.size() != members.size())
    fail(Errc::invalid_argument, "average SRM needs one weight per member");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) fail(Errc::invalid_argument, "average SRM weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) fail(Errc::invalid_argument, "average SRM weights must sum to 1");
  SrmTraits t;
  t.monetary = std::all_of(members.begin(), members.end(), [](const Srm& m) { return m.traits().monetary; });
  t.convex = std::all_of(members.begin(), members.end(), [](const Srm& m) { return m.traits().convex; });
  t.coherent = std::all_of(members.begin(), members.end(), [](const Srm& m) { return m.traits().coherent; });
  t.normalized = std::all_of(members.begin(), members.end(), [](const Srm& m) { return m.traits().normalized; });
  const std::size_t n = members.front().atoms();
  auto name = "Average{" + join_names(members) + "}";
  return make(Composite{CompositeOp::Average, std::move(members), std::move(weights)}, t, n, std::move(name));
}

Srm Srm::convex_combination(ScalarRisk base, std::size_t max_n) {
  if (max_n == 0) fail(Errc::invalid_argument, "convex-combination SRM needs max_n >= 1");
  SrmTraits t{.monetary = true,
              .convex = base.is_convex(),
              .coherent = base.is_coherent(),
              .worst_case = base.is_convex(),
              .normalized = true};
  const std::size_t n = base.space().size();
  auto name = "ConvexComb[" + base.name() + ", " + std::to_string(max_n) + "]";
  return make(ConvexComb{std::move(base), max_n}, t, n, std::move(name));
}

Srm Srm::aggregation(Aggregator agg, ScalarRisk base) {
  SrmTraits t;
  t.monetary = true;
  if (agg == Aggregator::EssInf) {
    t.convex = base.is_convex();
    t.coherent = base.is_coherent();
    t.worst_case = base.kind() == ScalarKind::MaxLoss;
  }
  const std::size_t n = base.space().size();
  auto name = std::string(agg == Aggregator::EssInf ? "EssInf" : "EssSup") + "[" + base.name() + "]";
  return make(Aggregation{agg, std::move(base)}, t, n, std::move(name));
}

Srm Srm::robust(ScalarRisk base, UncertaintyMap u) {
  const std::size_t n = base.space().size();
  const auto zero_alternatives = apply_uncertainty(u, Rv::zero(n));
  const double at_zero = max_over_generators(zero_alternatives, [&](const Rv& y) { return base(y); });
  SrmTraits t{.monetary = true,
              .convex = base.is_convex(),
              .coherent = base.is_coherent() && zero_alternatives.is_singleton(),
              .worst_case = true,
              .normalized = at_zero == 0.0};
  auto name = "Robust[" + base.name() + ", " + u.name() + "]";
  return make(Robust{std::move(base), std::move(u)}, t, n, std::move(name));
}

Srm Srm::bochner_min(const ProbSpace& space) { return bochner_min(space, {}); }

Srm Srm::bochner_min(const ProbSpace& space, std::vector<DualVec> measures) {
  for (const auto& q : measures) {
    if (q.size() != space.size())
      fail(Errc::dimension_mismatch, "Bochner SRM measures must match the space dimension");
    if (!q.is_probability()) fail(Errc::invalid_argument, "Bochner SRM measures must be probability vectors");
  }
  SrmTraits t{.monetary = true, .convex = true, .coherent = true, .worst_case = false, .normalized = true};
  const std::size_t n = space.size();
  auto name = measures.empty() ? std::string("BochnerMin[P]")
                               : "BochnerMin[" + std::to_string(measures.size()) + " measures]";
  return make(BochnerMin{space, std::move(measures)}, t, n, std::move(name));
}

// ---------------------------------------------------------------------------
// Acceptance and induced measures

AcceptFamily acceptance(const Srm& r) {
  AcceptFamily fam;
  fam.atoms = r.atoms();
  fam.name = "A[" + r.name() + "]";
  if (const auto* wc = r.as<WorstCase>()) {
    const ScalarRisk base = wc->base;
    fam.predicate = [base, r](const RvSet& x) {
      if (x.is_hull() && !base.is_convex()) return r.eval(x) <= 0.0;
      for (const auto& g : x.generators())
        if (!accepts(base, g)) return false;
      return true;
    };
  } else {
    fam.predicate = [r](const RvSet& x) { return r.eval(x) <= 0.0; };
  }
  fam.threshold = r.eval(RvSet::zero(r.atoms()));
  return fam;
}

InducedBisection induced_bisection(const AcceptFamily& family, const RvSet& x, double tol) {
  if (!(tol > 0.0)) fail(Errc::invalid_argument, "bisection tolerance must be positive");
  InducedBisection out;
  const double norm = set_norm(x);
  out.lower = family.threshold - norm;
  out.upper = family.threshold + norm;
  if (norm == 0.0) {
    out.value = family.threshold;
    return out;
  }
  if (!family(translate(x, out.upper)))
    fail(Errc::invariant_breach, family.name + ": bisection bracket upper end is not accepted");
  if (family(translate(x, out.lower))) {
    out.value = out.lower;
    out.upper = out.lower;
    return out;
  }
  const int iterations = 2 + static_cast<int>(std::ceil(std::log2(2.0 * norm / tol)));
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (out.lower + out.upper);
    (family(translate(x, mid)) ? out.upper : out.lower) = mid;
    out.widths.push_back(out.upper - out.lower);
  }
  out.value = out.upper;
  return out;
}

double induced_roundtrip(const Srm& r, const RvSet& x, double tol) {
  return Srm::accept_induced(acceptance(r), tol).eval(x);
}

std::optional<std::size_t> attaining_generator(const Srm& r, const RvSet& x) {
  if (!r.traits().worst_case) return std::nullopt;
  std::size_t best = 0;
  double best_value = kNegInf;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = r.eval(RvSet::singleton(x[i]));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

std::vector<double> bochner_integral(const RvSet& x, const DualVec& q) {
  if (q.size() != x.dim())
    fail(Errc::dimension_mismatch, "Bochner integral: measure and set dimensions differ");
  const auto sets = atom_value_sets(x);
  std::vector<double> acc{0.0};
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (q[i] == 0.0) continue;
    if (acc.size() * sets[i].size() > kBochnerPointGuard)
      fail(Errc::guard_exceeded, "Bochner integral would exceed " + std::to_string(kBochnerPointGuard) +
                                     " points");
    std::vector<double> next;
    next.reserve(acc.size() * sets[i].size());
    for (double a : acc)
      for (double v : sets[i]) next.push_back(a + q[i] * v);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    acc = std::move(next);
  }
  return acc;
}

}  // namespace setrisk
