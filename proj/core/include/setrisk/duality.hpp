#pragma once

// Dual representations of convex SRMs: support functions, finite-support
// dual measures, penalty functionals and one-sided certificates.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "setrisk/core.hpp"
#include "setrisk/riskbase.hpp"
#include "setrisk/srm.hpp"

namespace setrisk {

/// max over generators of sum_i q_i x_i. Exact for hulls as well.
double support(const RvSet& x, const DualVec& q);

/// Finitely supported measure on nonnegative dual vectors with TV norm <= 1.
class FiniteSupportMeasure {
 public:
  struct Atom {
    DualVec q;
    double weight;
  };

  explicit FiniteSupportMeasure(std::vector<Atom> atoms);
  static FiniteSupportMeasure dirac(DualVec q);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t dim() const noexcept { return atoms_.front().q.size(); }
  bool is_dirac() const noexcept { return atoms_.size() == 1; }

  /// sum_j w_j support(x, q_j)
  double integrate_support(const RvSet& x) const;

 private:
  std::vector<Atom> atoms_;
};

struct PenaltyEstimate {
  double value = 0.0;
  bool exact = false;  // false: lower estimate from the probe family
};

/// tau_R(mu). Exact for worst-case SRMs over a scalar base whose atoms are
/// all probability vectors (the weighted sum of base penalties); +inf (still
/// an upper bound) when some atom has total mass != 1. Otherwise a lower
/// estimate: the best integrated support of -X over the accepted probe sets
/// and the zero singleton. A rejected probe set is an invalid_argument error.
PenaltyEstimate penalty_srm(const Srm& r, const FiniteSupportMeasure& mu, const std::vector<RvSet>& probe = {});

struct Certificate {
  double value_bound = 0.0;
  FiniteSupportMeasure measure;
  double penalty_value = 0.0;
  double gap = 0.0;  // eval(R, X) - value_bound
  bool exact_penalty = false;
};

/// value_bound = sum_j w_j support(-X, q_j) - tau_R(mu).
Certificate dual_value(const Srm& r, const RvSet& x, const FiniteSupportMeasure& mu,
                       const std::vector<RvSet>& probe = {});

enum class DualMethod { Vertices, Grid, ProjectedAscent };

const char* dual_method_name(DualMethod m);

struct DualOptions {
  double grid_pitch = 1e-3;
  std::size_t ascent_iterations = 500;
  std::size_t ascent_starts = 8;
  std::uint64_t seed = 42;
};

inline constexpr std::size_t kMaxGridAtoms = 4;

/// Best Dirac certificate for a worst-case SRM over a convex scalar base.
/// Vertices needs a coherent base; Grid is refused above kMaxGridAtoms atoms
/// (guard_exceeded). Non-convex bases and other constructions are refused.
Certificate maximize_dual(const Srm& r, const RvSet& x, DualMethod method, const DualOptions& options = {});

enum class Monotonicity { Decreasing, Increasing };

/// A finite sequence of sets whose support functions on nonnegative dual
/// vectors move monotonically towards the limit.
struct MonotoneFamily {
  std::string name;
  std::vector<RvSet> sequence;
  RvSet limit;
  Monotonicity direction;

  /// X + 1/n for n = 1..steps, decreasing to X.
  static MonotoneFamily shrinking_translate(const RvSet& x, std::size_t steps);
  /// Finite prefixes of the generator list, increasing to their hull.
  static MonotoneFamily growing_subsets(const std::vector<Rv>& generators);
  /// conv{c, c + d/n : d in directions}, decreasing to {c}.
  static MonotoneFamily shrinking_hull(const Rv& center, const std::vector<Rv>& directions, std::size_t steps);
  /// User-supplied sequence, verified on sampled nonnegative dual vectors.
  static MonotoneFamily custom(std::string name, std::vector<RvSet> sequence, RvSet limit, Monotonicity direction,
                               std::uint64_t seed = 42);
};

struct ContinuityReport {
  std::vector<double> values;
  double limit_value = 0.0;
  std::vector<double> errors;  // |R(X_n) - R(limit)|
  bool monotone_values = false;  // nondecreasing or nonincreasing along the sequence
  bool converged = false;  // monotone and the last error within tol
};

ContinuityReport continuity_probe(const Srm& r, const MonotoneFamily& family, double tol = 1e-6);

}  // namespace setrisk
