#pragma once

// Brute-force reference computations used to check the library. Each one
// takes a different route from the production code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <vector>

#include "setrisk/rng.hpp"

namespace oracle {

using Vec = std::vector<double>;

// Rockafellar-Uryasev: ES_a(x) = min_t { t + E[(-x - t)^+] / a }, attained at a kink t = -x_i.
inline double es_ru(const Vec& p, const Vec& x, double alpha) {
  double best = std::numeric_limits<double>::infinity();
  for (double xi : x) {
    const double t = -xi;
    double e = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) e += p[i] * std::max(-x[i] - t, 0.0);
    best = std::min(best, t + e / alpha);
  }
  return best;
}

// -inf{v : P(x <= v) >= alpha} by scanning the CDF at every attained value.
inline double var_cdf(const Vec& p, const Vec& x, double alpha) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : x) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] <= v) f += p[i];
    if (f >= alpha - 1e-12) best = std::min(best, v);
  }
  return -best;
}

inline double kl(const Vec& q, const Vec& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] > 0.0) s += q[i] * std::log(q[i] / p[i]);
  return s;
}

// Visits the simplex grid with the given number of steps (dim <= 3).
inline void simplex_grid(std::size_t dim, std::size_t steps, const std::function<void(const Vec&)>& fn) {
  const double h = 1.0 / static_cast<double>(steps);
  if (dim == 1) {
    fn({1.0});
  } else if (dim == 2) {
    for (std::size_t a = 0; a <= steps; ++a) fn({a * h, 1.0 - a * h});
  } else {
    for (std::size_t a = 0; a <= steps; ++a)
      for (std::size_t b = 0; a + b <= steps; ++b) fn({a * h, b * h, std::max(0.0, 1.0 - (a + b) * h)});
  }
}

// max over the simplex grid of E_q[-x] - KL(q || p) / gamma.
inline double entropic_grid(const Vec& p, const Vec& x, double gamma, std::size_t steps, Vec* argmax = nullptr) {
  double best = -std::numeric_limits<double>::infinity();
  simplex_grid(p.size(), steps, [&](const Vec& q) {
    double e = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) e -= q[i] * x[i];
    const double v = e - kl(q, p) / gamma;
    if (v > best) {
      best = v;
      if (argmax) *argmax = q;
    }
  });
  return best;
}

inline double sup_dist(const Vec& a, const Vec& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  auto directed = [](const std::vector<Vec>& from, const std::vector<Vec>& to) {
    double worst = 0.0;
    for (const auto& x : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& y : to) nearest = std::min(nearest, sup_dist(x, y));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

inline std::set<Vec> minkowski(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  std::set<Vec> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      Vec s(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] + y[i];
      out.insert(s);
    }
  return out;
}

// min of sum_i q_i s_i over every selection s_i from the per-atom value sets.
inline double bochner_min(const std::vector<Vec>& gens, const Vec& q) {
  const std::size_t n = q.size();
  std::vector<Vec> values(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& g : gens) values[i].push_back(g[i]);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double acc) {
    if (i == n) {
      best = std::min(best, acc);
      return;
    }
    for (double v : values[i]) rec(i + 1, acc + q[i] * v);
  };
  rec(0, 0.0);
  return best;
}

// Every point with coordinates in {0, cap_i} except at most one free
// coordinate, that sums to one: the basic feasible points of the ES polytope.
inline std::vector<Vec> es_vertices(const Vec& p, double alpha) {
  const std::size_t n = p.size();
  std::vector<Vec> out;
  std::vector<int> state(n, 0);  // 0 -> zero, 1 -> cap, 2 -> free
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int frees) {
    if (i == n) {
      Vec q(n, 0.0);
      double s = 0.0;
      std::size_t free_at = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (state[j] == 1) q[j] = std::min(1.0, p[j] / alpha), s += q[j];
        if (state[j] == 2) free_at = j;
      }
      if (free_at == n) {
        if (std::abs(s - 1.0) <= 1e-12) out.push_back(q);
        return;
      }
      const double f = 1.0 - s;
      if (f < -1e-12 || f > std::min(1.0, p[free_at] / alpha) + 1e-12) return;
      q[free_at] = std::max(0.0, f);
      out.push_back(q);
      return;
    }
    for (int s = 0; s < 3; ++s) {
      if (s == 2 && frees == 1) continue;
      state[i] = s;
      rec(i + 1, frees + (s == 2));
    }
  };
  rec(0, 0);
  std::vector<Vec> unique;
  for (const auto& v : out) {
    bool seen = false;
    for (const auto& w : unique) seen = seen || sup_dist(v, w) <= 1e-12;
    if (!seen) unique.push_back(v);
  }
  return unique;
}

inline double dot(const Vec& q, const Vec& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * x[i];
  return s;
}

inline Vec random_weights(setrisk::CounterRng& rng, std::size_t n) {
  Vec w(n);
  double s = 0.0;
  for (auto& e : w) s += (e = rng.uniform(0.05, 1.0));
  for (auto& e : w) e /= s;
  return w;
}

inline Vec random_vec(setrisk::CounterRng& rng, std::size_t n, double range = 5.0) {
  Vec v(n);
  for (auto& e : v) e = rng.uniform(-range, range);
  return v;
}

}  // namespace oracle
