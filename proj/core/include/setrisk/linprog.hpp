#pragma once

#include <vector>

namespace setrisk::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

/// Dense two-phase simplex (Bland's rule) for
///   maximize c^T x  subject to  A x <= b,  x >= 0.
/// Intended for the small feasibility and distance problems of the set
/// algebra (tens of variables), not as a general-purpose solver.
Result maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                const std::vector<double>& c, double eps = 1e-11);

}  // namespace setrisk::lp
