#include "setrisk/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "setrisk/rng.hpp"
#include "simplex_grid.hpp"

namespace setrisk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

const WorstCase& require_worst_case(const Srm& r) {
  const auto* wc = r.as<WorstCase>();
  if (!wc) fail(Errc::unsupported, "dual maximization needs a worst-case SRM over a scalar base, got " + r.name());
  return *wc;
}

/// Euclidean projection onto {q : sum q = 1, 0 <= q_i <= caps_i}.
std::vector<double> project_capped_simplex(const std::vector<double>& y, const std::vector<double>& caps) {
  auto mass = [&](double tau) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += std::clamp(y[i] - tau, 0.0, caps[i]);
    return s;
  };
  double lo = *std::min_element(y.begin(), y.end()) - *std::max_element(caps.begin(), caps.end()) - 1.0;
  double hi = *std::max_element(y.begin(), y.end());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) > 1.0 ? lo : hi) = mid;
  }
  std::vector<double> q(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) q[i] = std::clamp(y[i] - hi, 0.0, caps[i]);
  // Push the bisection residual onto the coordinate with the most room.
  double s = 0.0;
  for (double v : q) s += v;
  std::size_t j = 0;
  double room = -1.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double r = (1.0 - s > 0.0) ? caps[i] - q[i] : q[i];
    if (r > room) room = r, j = i;
  }
  q[j] = std::clamp(q[j] + (1.0 - s), 0.0, caps[j]);
  return q;
}

double dual_objective(const ScalarRisk& base, const RvSet& neg_x, const DualVec& q) {
  const double tau = penalty(base, q);
  if (tau == kInfinity) return kNegInf;
  return support(neg_x, q) - tau;
}

Certificate vertex_certificate(const Srm& r, const ScalarRisk& base, const RvSet& x) {
  if (!base.is_coherent())
    fail(Errc::refusal, "vertex enumeration needs a coherent base; " + base.name() + " is not coherent");
  const RvSet neg = -x;
  const auto verts = vertices(dual_set(base));
  std::size_t best = 0;
  double best_value = kNegInf;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const double v = support(neg, verts[k]);
    if (v > best_value) best_value = v, best = k;
  }
  return dual_value(r, x, FiniteSupportMeasure::dirac(verts[best]));
}

Certificate grid_certificate(const Srm& r, const ScalarRisk& base, const RvSet& x, const DualOptions& options) {
  const std::size_t n = x.dim();
  if (n > kMaxGridAtoms)
    fail(Errc::guard_exceeded, "grid dual search is limited to " + std::to_string(kMaxGridAtoms) + " atoms, got " +
                                   std::to_string(n));
  if (!(options.grid_pitch > 0.0 && options.grid_pitch <= 1.0))
    fail(Errc::invalid_argument, "grid pitch must lie in (0, 1]");
  const RvSet neg = -x;
  const auto target_steps = static_cast<std::size_t>(std::llround(1.0 / options.grid_pitch));
  const std::size_t steps = detail::steps_within_budget(n, std::max<std::size_t>(target_steps, 1), 6e5);
  const auto found = detail::simplex_search(n, steps, 3, 4.0, [&](const std::vector<double>& w) {
    return dual_objective(base, neg, DualVec(w));
  });
  DualVec best = DualVec::from_space(base.space());
  if (!found.weights.empty() && found.value > dual_objective(base, neg, best)) best = DualVec(found.weights);
  return dual_value(r, x, FiniteSupportMeasure::dirac(best));
}

Certificate ascent_certificate(const Srm& r, const ScalarRisk& base, const RvSet& x, const DualOptions& options) {
  const std::size_t n = x.dim();
  const RvSet neg = -x;
  const DualVec p = DualVec::from_space(base.space());

  std::vector<double> caps(n, 1.0);
  if (const auto* es = std::get_if<ExpectedShortfall>(&base.params()))
    for (std::size_t i = 0; i < n; ++i) caps[i] = std::min(1.0, base.space().weight(i) / es->alpha);
  const auto* ent = std::get_if<Entropic>(&base.params());

  if (const auto* el = std::get_if<ExpectedLoss>(&base.params()))
    return dual_value(r, x, FiniteSupportMeasure::dirac(el->q));

  DualVec best = p;
  double best_value = dual_objective(base, neg, p);
  auto consider = [&](const std::vector<double>& q) {
    DualVec d(q);
    const double v = dual_objective(base, neg, d);
    if (v > best_value) best_value = v, best = std::move(d);
  };

  // The objective is concave in q only for a fixed generator, so each
  // generator gets its own ascent and the best certified point wins.
  for (std::size_t g = 0; g < x.size(); ++g) {
    const Rv& gen = x[g];
    for (std::size_t s = 0; s < options.ascent_starts; ++s) {
      std::vector<double> q(p.masses().begin(), p.masses().end());
      if (s > 0) {
        CounterRng rng(options.seed, stream_id(g, s));
        for (auto& v : q) v = rng.uniform();
        q = project_capped_simplex(q, caps);
      }
      std::vector<double> grad(n), y(n);
      for (std::size_t k = 1; k <= options.ascent_iterations; ++k) {
        double gnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          grad[i] = -gen[i];
          if (ent) grad[i] -= (std::log(std::max(q[i], 1e-300) / p[i]) + 1.0) / ent->gamma;
          gnorm += grad[i] * grad[i];
        }
        const double scale = 1.0 / (static_cast<double>(k) * std::max(1.0, std::sqrt(gnorm)));
        for (std::size_t i = 0; i < n; ++i) y[i] = q[i] + scale * grad[i];
        q = project_capped_simplex(y, caps);
        consider(q);
      }
    }
  }
  return dual_value(r, x, FiniteSupportMeasure::dirac(best));
}

bool supports_ordered(const RvSet& lower, const RvSet& upper, const std::vector<DualVec>& probes) {
  for (const auto& q : probes)
    if (support(lower, q) > support(upper, q) + 1e-12) return false;
  return true;
}

}  // namespace

double support(const RvSet& x, const DualVec& q) {
  if (q.size() != x.dim()) fail(Errc::dimension_mismatch, "support: dual vector and set dimensions differ");
  return support_value(x, q.masses());
}

FiniteSupportMeasure::FiniteSupportMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) fail(Errc::invalid_argument, "finite-support measure needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (a.q.size() != atoms_.front().q.size() || a.q.size() == 0)
      fail(Errc::dimension_mismatch, "finite-support measure atoms have different dimensions");
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
      fail(Errc::invalid_argument, "finite-support measure weights must be nonnegative");
    if (!a.q.is_nonnegative() || a.q.tv_norm() > 1.0 + DualVec::kProbTolerance)
      fail(Errc::invalid_argument, "dual atom " + to_string(a.q) + " is not nonnegative with TV norm <= 1");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) fail(Errc::invalid_argument, "finite-support measure weights must sum to 1");
}

FiniteSupportMeasure FiniteSupportMeasure::dirac(DualVec q) { return FiniteSupportMeasure({{std::move(q), 1.0}}); }

double FiniteSupportMeasure::integrate_support(const RvSet& x) const {
  double s = 0.0;
  for (const auto& a : atoms_)
    if (a.weight > 0.0) s += a.weight * support(x, a.q);
  return s;
}

PenaltyEstimate penalty_srm(const Srm& r, const FiniteSupportMeasure& mu, const std::vector<RvSet>& probe) {
  if (mu.dim() != r.atoms()) fail(Errc::dimension_mismatch, "penalty: measure and SRM dimensions differ");
  if (const auto* wc = r.as<WorstCase>(); wc && wc->base.kind() != ScalarKind::ValueAtRisk) {
    double total = 0.0;
    for (const auto& a : mu.atoms()) {
      if (a.weight == 0.0) continue;
      if (!a.q.is_probability()) return {kInfinity, false};
      const double t = penalty(wc->base, a.q);
      if (t == kInfinity) return {kInfinity, true};
      total += a.weight * t;
    }
    return {total, true};
  }
  double best = kNegInf;
  const RvSet zero = RvSet::zero(r.atoms());
  if (r.eval(zero) <= 0.0) best = mu.integrate_support(-zero);
  for (std::size_t k = 0; k < probe.size(); ++k) {
    if (!(r.eval(probe[k]) <= 0.0))
      fail(Errc::invalid_argument, "penalty probe set #" + std::to_string(k) + " is not accepted by " + r.name());
    best = std::max(best, mu.integrate_support(-probe[k]));
  }
  return {best, false};
}

Certificate dual_value(const Srm& r, const RvSet& x, const FiniteSupportMeasure& mu, const std::vector<RvSet>& probe) {
  if (x.dim() != r.atoms()) fail(Errc::dimension_mismatch, "dual value: set and SRM dimensions differ");
  const auto tau = penalty_srm(r, mu, probe);
  const double bound = tau.value == kInfinity ? kNegInf : mu.integrate_support(-x) - tau.value;
  const double value = r.eval(x);
  const double gap = bound == kNegInf ? kInfinity : value - bound;
  return Certificate{bound, mu, tau.value, gap, tau.exact};
}

const char* dual_method_name(DualMethod m) {
  switch (m) {
    case DualMethod::Vertices: return "vertices";
    case DualMethod::Grid: return "grid";
    case DualMethod::ProjectedAscent: return "ascent";
  }
  return "?";
}

Certificate maximize_dual(const Srm& r, const RvSet& x, DualMethod method, const DualOptions& options) {
  const auto& base = require_worst_case(r).base;
  if (!base.is_convex()) fail(Errc::refusal, r.name() + " is not convex (flag 'convex' is false)");
  if (x.dim() != r.atoms()) fail(Errc::dimension_mismatch, "dual maximization: set and SRM dimensions differ");
  switch (method) {
    case DualMethod::Vertices: return vertex_certificate(r, base, x);
    case DualMethod::Grid: return grid_certificate(r, base, x, options);
    case DualMethod::ProjectedAscent: break;
  }
  return ascent_certificate(r, base, x, options);
}

MonotoneFamily MonotoneFamily::shrinking_translate(const RvSet& x, std::size_t steps) {
  if (steps == 0) fail(Errc::invalid_argument, "family needs at least one step");
  MonotoneFamily f{"translate(1/n)", {}, x, Monotonicity::Decreasing};
  for (std::size_t n = 1; n <= steps; ++n) f.sequence.push_back(x + 1.0 / static_cast<double>(n));
  return f;
}

MonotoneFamily MonotoneFamily::growing_subsets(const std::vector<Rv>& generators) {
  if (generators.empty()) fail(Errc::invalid_argument, "family needs at least one generator");
  MonotoneFamily f{"prefixes", {}, RvSet::hull(generators), Monotonicity::Increasing};
  for (std::size_t k = 1; k <= generators.size(); ++k)
    f.sequence.emplace_back(std::vector<Rv>(generators.begin(), generators.begin() + static_cast<std::ptrdiff_t>(k)));
  return f;
}

MonotoneFamily MonotoneFamily::shrinking_hull(const Rv& center, const std::vector<Rv>& directions, std::size_t steps) {
  if (steps == 0) fail(Errc::invalid_argument, "family needs at least one step");
  MonotoneFamily f{"hull(1/n)", {}, RvSet::singleton(center), Monotonicity::Decreasing};
  for (std::size_t n = 1; n <= steps; ++n) {
    std::vector<Rv> gens{center};
    for (const auto& d : directions) {
      if (d.size() != center.size()) fail(Errc::dimension_mismatch, "hull family direction has the wrong dimension");
      Rv step = d;
      step *= 1.0 / static_cast<double>(n);
      gens.push_back(center + step);
    }
    f.sequence.push_back(RvSet::hull(std::move(gens)));
  }
  return f;
}

MonotoneFamily MonotoneFamily::custom(std::string name, std::vector<RvSet> sequence, RvSet limit,
                                      Monotonicity direction, std::uint64_t seed) {
  if (sequence.empty()) fail(Errc::invalid_argument, "family '" + name + "' is empty");
  const std::size_t n = limit.dim();
  for (const auto& s : sequence) require_same_dim(s, limit, "monotone family");

  std::vector<DualVec> probes;
  for (std::size_t i = 0; i < n; ++i) probes.push_back(DualVec::dirac(n, i));
  CounterRng rng(seed, 0xfa3117);
  for (int k = 0; k < 64; ++k) {
    std::vector<double> q(n);
    double s = 0.0;
    for (auto& v : q) s += (v = rng.uniform());
    const double mass = rng.uniform();
    for (auto& v : q) v *= mass / s;
    probes.emplace_back(std::move(q));
  }
  const bool dec = direction == Monotonicity::Decreasing;
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    const bool ok = dec ? supports_ordered(limit, sequence[k], probes) &&
                              (k + 1 == sequence.size() || supports_ordered(sequence[k + 1], sequence[k], probes))
                        : supports_ordered(sequence[k], limit, probes) &&
                              (k + 1 == sequence.size() || supports_ordered(sequence[k], sequence[k + 1], probes));
    if (!ok)
      fail(Errc::invalid_argument,
           "family '" + name + "' is not monotone at step " + std::to_string(k + 1) + " (support function check)");
  }
  return MonotoneFamily{std::move(name), std::move(sequence), std::move(limit), direction};
}

ContinuityReport continuity_probe(const Srm& r, const MonotoneFamily& family, double tol) {
  ContinuityReport rep;
  rep.limit_value = r.eval(family.limit);
  // Monotone support functions do not fix the direction of the values:
  // translates move R against the supports, inclusions move it with them.
  bool up = true, down = true;
  for (const auto& s : family.sequence) {
    const double v = r.eval(s);
    if (!rep.values.empty()) {
      up = up && v >= rep.values.back() - 1e-12;
      down = down && v <= rep.values.back() + 1e-12;
    }
    rep.values.push_back(v);
    rep.errors.push_back(std::abs(v - rep.limit_value));
  }
  rep.monotone_values = up || down;
  rep.converged = rep.monotone_values && !rep.errors.empty() && rep.errors.back() <= tol;
  return rep;
}

}  // namespace setrisk
