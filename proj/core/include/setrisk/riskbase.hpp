#pragma once

// Scalar (single-position) risk measures on a finite space, their acceptance
// predicates, and the finite-dimensional dual objects behind them.

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "setrisk/core.hpp"

namespace setrisk {

/// Finitely additive measure on the finite space: one signed mass per atom.
class DualVec {
 public:
  static constexpr double kProbTolerance = 1e-12;

  DualVec() = default;
  explicit DualVec(std::vector<double> masses);
  DualVec(std::initializer_list<double> masses) : DualVec(std::vector<double>(masses)) {}
  static DualVec from_space(const ProbSpace& space);
  static DualVec dirac(std::size_t atoms, std::size_t at);

  std::size_t size() const noexcept { return masses_.size(); }
  std::span<const double> masses() const noexcept { return masses_; }
  double operator[](std::size_t i) const noexcept { return masses_[i]; }

  double tv_norm() const noexcept;
  double total_mass() const noexcept;
  bool is_nonnegative() const noexcept;
  bool is_probability(double tol = kProbTolerance) const noexcept;

  /// sum_i q_i x_i
  double integrate(const Rv& x) const;

  bool operator==(const DualVec&) const = default;

 private:
  std::vector<double> masses_;
};

std::string to_string(const DualVec& q);

struct ExpectedLoss {
  DualVec q;
};
struct ValueAtRisk {
  double alpha;
};
struct ExpectedShortfall {
  double alpha;
};
struct Entropic {
  double gamma;
};
struct MaxLoss {};

enum class ScalarKind { ExpectedLoss, ValueAtRisk, ExpectedShortfall, Entropic, MaxLoss };

/// A scalar risk measure bound to its probability space.
class ScalarRisk {
 public:
  using Params = std::variant<ExpectedLoss, ValueAtRisk, ExpectedShortfall, Entropic, MaxLoss>;

  static ScalarRisk expected_loss(const ProbSpace& space);
  static ScalarRisk expected_loss(const ProbSpace& space, DualVec q);
  static ScalarRisk value_at_risk(const ProbSpace& space, double alpha);
  static ScalarRisk expected_shortfall(const ProbSpace& space, double alpha);
  static ScalarRisk entropic(const ProbSpace& space, double gamma);
  static ScalarRisk max_loss(const ProbSpace& space);

  const ProbSpace& space() const noexcept { return space_; }
  const Params& params() const noexcept { return params_; }
  ScalarKind kind() const noexcept { return static_cast<ScalarKind>(params_.index()); }

  bool is_convex() const noexcept { return kind() != ScalarKind::ValueAtRisk; }
  bool is_coherent() const noexcept { return is_convex() && kind() != ScalarKind::Entropic; }

  /// Short label such as "ES(0.5)".
  std::string name() const;

  double operator()(const Rv& x) const;

 private:
  ScalarRisk(ProbSpace space, Params params) : space_(std::move(space)), params_(std::move(params)) {}

  ProbSpace space_;
  Params params_;
};

/// rho(x). VaR uses the lower quantile; ES weights the boundary atom
/// fractionally so the quantile integral is exact; Entropic is evaluated with
/// a max-shifted log-sum-exp.
double eval_scalar(const ScalarRisk& rho, const Rv& x);

/// rho(x) <= 0, exact comparison.
bool accepts(const ScalarRisk& rho, const Rv& x);

/// Lower alpha-quantile inf{t : F_x(t) >= alpha}.
double lower_quantile(const ProbSpace& space, const Rv& x, double alpha);

struct EsPolytope {
  ProbSpace space;
  double alpha;
  /// q_i <= p_i / alpha
  double cap(std::size_t i) const { return space.weight(i) / alpha; }
};

/// Dual set of a coherent scalar measure.
class DualSet {
 public:
  using Description = std::variant<DualVec, EsPolytope, std::vector<DualVec>>;

  static DualSet singleton(DualVec q);
  static DualSet es_polytope(const ProbSpace& space, double alpha);
  static DualSet explicit_vertices(std::vector<DualVec> vertices);

  const Description& description() const noexcept { return description_; }
  std::size_t dim() const;
  /// Membership up to tol on each constraint.
  bool contains(const DualVec& q, double tol = 1e-12) const;

 private:
  explicit DualSet(Description d) : description_(std::move(d)) {}
  Description description_;
};

/// Singleton(q) for expected loss, the Q_alpha polytope for ES, all Dirac
/// atoms for MaxLoss. Entropic and VaR have no coherent dual set (refusal).
DualSet dual_set(const ScalarRisk& rho);

inline constexpr std::size_t kMaxEsVertexAtoms = 12;

/// Exact vertex list. The ES polytope is enumerated combinatorially and is
/// guarded to at most kMaxEsVertexAtoms atoms (Errc::guard_exceeded).
std::vector<DualVec> vertices(const DualSet& ds);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Minimal penalty sup_{x accepted} E_q[-x] for a probability vector q:
/// indicator (0 / +inf) for the coherent measures, KL(q||P)/gamma for the
/// entropic one. VaR is unsupported.
double penalty(const ScalarRisk& rho, const DualVec& q);

/// Kullback-Leibler divergence with the 0 log 0 = 0 convention.
double kl_divergence(const DualVec& q, const ProbSpace& p);

}  // namespace setrisk
