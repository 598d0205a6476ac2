#include <algorithm>
#include <cmath>
#include <limits>

#include "setrisk/core.hpp"
#include "setrisk/linprog.hpp"
#include "setrisk/rng.hpp"

namespace setrisk {

namespace {

SetMode combined_mode(const RvSet& a, const RvSet& b) {
  return (a.is_hull() || b.is_hull()) ? SetMode::ConvexHull : SetMode::Finite;
}

void require_finite_scalar(double v, const char* what) {
  if (!std::isfinite(v)) fail(Errc::invalid_argument, std::string(what) + " must be finite");
}

double dot(std::span<const double> q, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * x[i];
  return s;
}

// min t s.t. |x - sum_j l_j g_j|_inf <= t, l in the simplex.
double distance_to_hull(const Rv& x, const std::vector<Rv>& gens) {
  const std::size_t m = gens.size();
  const std::size_t n = x.size();
  const std::size_t vars = m + 1;  // lambdas, then t
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  A.reserve(2 * n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> lo(vars, 0.0), hi(vars, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      lo[j] = -gens[j][i];
      hi[j] = gens[j][i];
    }
    lo[m] = -1.0;
    hi[m] = -1.0;
    A.push_back(std::move(lo));
    b.push_back(-x[i]);
    A.push_back(std::move(hi));
    b.push_back(x[i]);
  }
  std::vector<double> sum_row(vars, 1.0);
  sum_row[m] = 0.0;
  A.push_back(sum_row);
  b.push_back(1.0);
  for (double& v : sum_row) v = -v;
  A.push_back(sum_row);
  b.push_back(-1.0);
  std::vector<double> c(vars, 0.0);
  c[m] = -1.0;
  const auto res = lp::maximize(A, b, c);
  if (res.status != lp::Status::Optimal)
    fail(Errc::invariant_breach, "distance-to-hull program did not reach an optimum");
  return std::max(0.0, -res.objective);
}

bool hull_dominates(const Rv& x, const std::vector<Rv>& gens) {
  for (const auto& y : gens)
    if (x.dominated_by(y)) return true;
  const std::size_t m = gens.size();
  const std::size_t n = x.size();
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = -gens[j][i];
    A.push_back(std::move(row));
    b.push_back(-x[i] + 1e-12 * (1.0 + std::abs(x[i])));
  }
  A.emplace_back(m, 1.0);
  b.push_back(1.0);
  A.emplace_back(m, -1.0);
  b.push_back(-1.0);
  return lp::maximize(A, b, std::vector<double>(m, 0.0)).status == lp::Status::Optimal;
}

}  // namespace

void require_same_dim(const RvSet& a, const RvSet& b, const char* what) {
  if (a.dim() != b.dim())
    fail(Errc::dimension_mismatch, std::string(what) + ": operands have " + std::to_string(a.dim()) +
                                       " and " + std::to_string(b.dim()) + " atoms");
}

RvSet minkowski_sum(const RvSet& a, const RvSet& b) {
  require_same_dim(a, b, "minkowski_sum");
  std::vector<Rv> sums;
  sums.reserve(a.size() * b.size());
  for (const auto& x : a.generators())
    for (const auto& y : b.generators()) sums.push_back(x + y);
  return RvSet(std::move(sums), combined_mode(a, b));
}

RvSet scale(const RvSet& a, double lambda) {
  require_finite_scalar(lambda, "scale factor");
  std::vector<Rv> out;
  out.reserve(a.size());
  for (const auto& x : a.generators()) out.push_back(lambda * x);
  return RvSet(std::move(out), a.mode());
}

RvSet translate(const RvSet& a, double alpha) {
  require_finite_scalar(alpha, "translation");
  std::vector<Rv> out;
  out.reserve(a.size());
  for (const auto& x : a.generators()) out.push_back(x + alpha);
  return RvSet(std::move(out), a.mode());
}

RvSet translate(const RvSet& a, const Rv& shift) {
  std::vector<Rv> out;
  out.reserve(a.size());
  for (const auto& x : a.generators()) out.push_back(x + shift);
  return RvSet(std::move(out), a.mode());
}

RvSet set_union(const RvSet& a, const RvSet& b) {
  require_same_dim(a, b, "union");
  std::vector<Rv> out = a.generators();
  out.insert(out.end(), b.generators().begin(), b.generators().end());
  return RvSet(std::move(out), combined_mode(a, b));
}

RvSet set_abs(const RvSet& a) {
  std::vector<Rv> out;
  out.reserve(a.size());
  for (const auto& x : a.generators()) out.push_back(x.abs());
  return RvSet(std::move(out), a.mode());
}

double set_norm(const RvSet& a) {
  double m = 0.0;
  for (const auto& x : a.generators()) m = std::max(m, x.sup_norm());
  return m;
}

double distance_to(const Rv& x, const RvSet& set) {
  if (x.size() != set.dim())
    fail(Errc::dimension_mismatch, "distance_to: point and set dimensions differ");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : set.generators()) best = std::min(best, sup_distance(x, g));
  if (!set.is_hull() || set.is_singleton() || best == 0.0) return best;
  return std::min(best, distance_to_hull(x, set.generators()));
}

double hausdorff_generators(const RvSet& a, const RvSet& b) {
  require_same_dim(a, b, "hausdorff");
  auto one_sided = [](const RvSet& from, const RvSet& to) {
    double worst = 0.0;
    for (const auto& x : from.generators()) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& y : to.generators()) nearest = std::min(nearest, sup_distance(x, y));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

SetDistance hausdorff(const RvSet& a, const RvSet& b, const HausdorffOptions& options) {
  const double upper = hausdorff_generators(a, b);
  if (!a.is_hull() && !b.is_hull()) return {upper, upper};

  const std::size_t n = a.dim();
  double lower = 0.0;
  std::vector<double> q(n, 0.0);
  auto probe = [&] {
    lower = std::max(lower, std::abs(support_value(a, q) - support_value(b, q)));
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      std::fill(q.begin(), q.end(), 0.0);
      q[i] = sign;
      probe();
    }
  }
  CounterRng rng(options.seed, n);
  for (std::size_t k = 0; k < options.sample_count; ++k) {
    double l1 = 0.0;
    for (auto& v : q) {
      v = rng.uniform(-1.0, 1.0);
      l1 += std::abs(v);
    }
    if (l1 == 0.0) continue;
    for (auto& v : q) v /= l1;
    probe();
  }
  return {std::min(lower, upper), upper};
}

bool set_equal(const RvSet& a, const RvSet& b, double tol) {
  return hausdorff_generators(a, b) <= tol;
}

bool preorder_leq(const RvSet& a, const RvSet& b) {
  require_same_dim(a, b, "preorder");
  if (a.is_hull() && !b.is_hull())
    fail(Errc::unsupported, "preorder: a convex hull cannot be compared against a finite set");
  for (const auto& x : a.generators()) {
    if (b.is_hull()) {
      if (!hull_dominates(x, b.generators())) return false;
      continue;
    }
    bool dominated = false;
    for (const auto& y : b.generators())
      if (x.dominated_by(y)) {
        dominated = true;
        break;
      }
    if (!dominated) return false;
  }
  return true;
}

Rv ess_sup(const RvSet& a) {
  std::vector<double> v(a[0].values().begin(), a[0].values().end());
  for (const auto& x : a.generators())
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(v[i], x[i]);
  return Rv(std::move(v));
}

Rv ess_inf(const RvSet& a) { return -ess_sup(-a); }

double support_value(const RvSet& a, std::span<const double> q) {
  if (q.size() != a.dim())
    fail(Errc::dimension_mismatch, "support function: dual vector has " + std::to_string(q.size()) +
                                       " atoms, set has " + std::to_string(a.dim()));
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& x : a.generators()) best = std::max(best, dot(q, x.values()));
  return best;
}

}  // namespace setrisk
