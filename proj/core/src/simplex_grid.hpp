#pragma once

// Grid search over the probability simplex, shared by the convex-combination
// SRM, the dual grid maximizer and the portfolio optimizer.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace setrisk::detail {

inline double simplex_grid_size(std::size_t dim, std::size_t steps) {
  // C(steps + dim - 1, dim - 1)
  double c = 1.0;
  for (std::size_t i = 1; i < dim; ++i)
    c = c * static_cast<double>(steps + i) / static_cast<double>(i);
  return c;
}

/// Largest step count <= max_steps whose grid has at most `budget` points.
inline std::size_t steps_within_budget(std::size_t dim, std::size_t max_steps, double budget) {
  std::size_t steps = max_steps;
  while (steps > 1 && simplex_grid_size(dim, steps) > budget) --steps;
  return steps;
}

/// Visits every w with w_i = k_i / steps, k_i >= 0, sum k_i = steps, in
/// lexicographic order of k.
inline void for_each_simplex_point(std::size_t dim, std::size_t steps,
                                   const std::function<void(const std::vector<double>&)>& fn) {
  std::vector<std::size_t> k(dim, 0);
  std::vector<double> w(dim, 0.0);
  const double h = 1.0 / static_cast<double>(steps);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == dim) {
      k[i] = left;
      for (std::size_t j = 0; j < dim; ++j) w[j] = static_cast<double>(k[j]) * h;
      fn(w);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      k[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, steps);
}

/// Visits center + h z for integer z with sum z = 0 and |z_i| <= radius,
/// skipping points that leave the simplex.
inline void for_each_local_point(const std::vector<double>& center, double h, int radius,
                                 const std::function<void(const std::vector<double>&)>& fn) {
  const std::size_t dim = center.size();
  std::vector<int> z(dim, 0);
  std::vector<double> w(dim, 0.0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int sum) {
    if (i + 1 == dim) {
      z[i] = -sum;
      if (z[i] < -radius || z[i] > radius) return;
      for (std::size_t j = 0; j < dim; ++j) {
        w[j] = center[j] + h * z[j];
        if (w[j] < -1e-15) return;
        if (w[j] < 0.0) w[j] = 0.0;
      }
      fn(w);
      return;
    }
    for (int v = -radius; v <= radius; ++v) {
      z[i] = v;
      rec(i + 1, sum + v);
    }
  };
  if (dim == 1) {
    fn(center);
    return;
  }
  rec(0, 0);
}

struct SimplexSearchResult {
  std::vector<double> weights;
  double value = -std::numeric_limits<double>::infinity();
};

/// Maximizes `objective` over the simplex: a full grid with `steps`
/// subdivisions, then `rounds` local refinements shrinking the pitch by
/// `factor` each time. Infeasible points should return -inf. Ties keep the
/// first point visited.
inline SimplexSearchResult simplex_search(std::size_t dim, std::size_t steps, std::size_t rounds,
                                          double factor,
                                          const std::function<double(const std::vector<double>&)>& objective) {
  SimplexSearchResult best;
  auto consider = [&](const std::vector<double>& w) {
    const double v = objective(w);
    if (v > best.value) {
      best.value = v;
      best.weights = w;
    }
  };
  for_each_simplex_point(dim, steps, consider);
  if (best.weights.empty()) return best;
  int radius = static_cast<int>(std::ceil(factor));
  while (radius > 1 && std::pow(2.0 * radius + 1.0, static_cast<double>(dim) - 1.0) > 2e5) --radius;
  double h = 1.0 / static_cast<double>(steps);
  for (std::size_t r = 0; r < rounds; ++r) {
    h /= factor;
    const auto center = best.weights;
    for_each_local_point(center, h, radius, consider);
  }
  return best;
}

}  // namespace setrisk::detail
