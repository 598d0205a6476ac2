#pragma once

// Set risk measures: real-valued maps on finitely generated sets of random
// variables, built from scalar measures, acceptance families, or other SRMs.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "setrisk/core.hpp"
#include "setrisk/riskbase.hpp"

namespace setrisk {

/// A collection of acceptable sets, given as a pure predicate. `threshold` is
/// the smallest accepted constant inf{a : {a*1} accepted}, which is 0 for the
/// acceptance set of any normalized SRM.
struct AcceptFamily {
  std::function<bool(const RvSet&)> predicate;
  std::size_t atoms = 0;
  std::string name;
  double threshold = 0.0;

  bool operator()(const RvSet& x) const { return predicate(x); }
};

/// Strictly convex, increasing loss function for shortfall SRMs.
class ShortfallLoss {
 public:
  static ShortfallLoss exponential(double lambda);
  static ShortfallLoss custom(std::function<double(double)> fn, std::string name);

  double operator()(double t) const { return fn_(t); }
  bool is_exponential() const noexcept { return lambda_.has_value(); }
  double lambda() const { return lambda_.value(); }
  const std::string& name() const noexcept { return name_; }

 private:
  ShortfallLoss(std::function<double(double)> fn, std::string name, std::optional<double> lambda)
      : fn_(std::move(fn)), name_(std::move(name)), lambda_(lambda) {}

  std::function<double(double)> fn_;
  std::string name_;
  std::optional<double> lambda_;
};

struct SupNormBall {
  double radius;
};
/// u_D(x) = {x} together with the candidates x + d that satisfy D(x, x + d) <= radius.
struct DivergenceBall {
  std::function<double(const Rv&, const Rv&)> divergence;
  double radius;
  std::vector<Rv> candidate_offsets;
};
struct ExplicitPerturbations {
  std::vector<Rv> offsets;
};

/// Maps a position to a finite set of plausible alternatives that contains it.
class UncertaintyMap {
 public:
  using Kind = std::variant<SupNormBall, DivergenceBall, ExplicitPerturbations>;

  static UncertaintyMap sup_norm_ball(double radius);
  static UncertaintyMap divergence_ball(std::function<double(const Rv&, const Rv&)> divergence,
                                        double radius, std::vector<Rv> candidate_offsets);
  static UncertaintyMap explicit_perturbations(std::vector<Rv> offsets);

  const Kind& kind() const noexcept { return kind_; }
  std::string name() const;

 private:
  explicit UncertaintyMap(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// SupNormBall(r) yields {x, x +- r e_i, x +- r 1}: a finite inner
/// approximation of the sup-norm ball that keeps the extreme cash translates.
RvSet apply_uncertainty(const UncertaintyMap& u, const Rv& x);

enum class CompositeOp { Max, Min, Average };
enum class Aggregator { EssInf, EssSup };

struct WorstCase;
struct AcceptInduced;
struct Shortfall;
struct Composite;
struct ConvexComb;
struct Aggregation;
struct Robust;
struct BochnerMin;

using SrmConstruction =
    std::variant<WorstCase, AcceptInduced, Shortfall, Composite, ConvexComb, Aggregation, Robust, BochnerMin>;

/// Axiom flags declared by construction (not proven at runtime).
struct SrmTraits {
  bool monetary = true;
  bool convex = false;
  bool coherent = false;
  bool worst_case = false;
  bool normalized = true;
};

namespace detail {
struct SrmNode;
}

/// Immutable set risk measure. Copies share the underlying construction.
class Srm {
 public:
  static constexpr double kDefaultTol = 1e-8;

  static Srm worst_case(ScalarRisk base);
  static Srm accept_induced(AcceptFamily family, double tol = kDefaultTol);
  /// inf{a : sup over generators and dual elements of E_q[l(-(x+a))] <= level},
  /// shifted so that the zero singleton evaluates to 0.
  static Srm shortfall(ShortfallLoss loss, DualSet dual, double level);
  static Srm composite_max(std::vector<Srm> members);
  static Srm composite_min(std::vector<Srm> members);
  static Srm composite_average(std::vector<Srm> members, std::vector<double> weights);
  static Srm convex_combination(ScalarRisk base, std::size_t max_n);
  static Srm aggregation(Aggregator agg, ScalarRisk base);
  static Srm robust(ScalarRisk base, UncertaintyMap u);
  /// R1(X) = -min of the P-weighted Minkowski integral of the per-atom value sets.
  static Srm bochner_min(const ProbSpace& space);
  /// R2: union of the integrals over the given probability vectors before the min.
  static Srm bochner_min(const ProbSpace& space, std::vector<DualVec> measures);

  double eval(const RvSet& x) const;
  double operator()(const RvSet& x) const { return eval(x); }

  const SrmConstruction& construction() const noexcept;
  const SrmTraits& traits() const noexcept;
  std::size_t atoms() const noexcept;
  std::string name() const;

  template <class T>
  const T* as() const noexcept;

 private:
  explicit Srm(std::shared_ptr<const detail::SrmNode> node) : node_(std::move(node)) {}
  static Srm make(SrmConstruction c, SrmTraits traits, std::size_t atoms, std::string name);

  std::shared_ptr<const detail::SrmNode> node_;
};

struct WorstCase {
  ScalarRisk base;
};
struct AcceptInduced {
  AcceptFamily family;
  double tol;
};
struct Shortfall {
  ShortfallLoss loss;
  DualSet dual;
  double level;
  std::vector<DualVec> dual_vertices;
  double zero_value;  // unshifted value at the zero singleton
};
struct Composite {
  CompositeOp op;
  std::vector<Srm> members;
  std::vector<double> weights;
};
struct ConvexComb {
  ScalarRisk base;
  std::size_t max_n;
};
struct Aggregation {
  Aggregator agg;
  ScalarRisk base;
};
struct Robust {
  ScalarRisk base;
  UncertaintyMap u;
};
struct BochnerMin {
  ProbSpace space;
  std::vector<DualVec> measures;  // empty: integrate against P only
};

template <class T>
const T* Srm::as() const noexcept {
  return std::get_if<T>(&construction());
}

double eval(const Srm& r, const RvSet& x);

/// Acceptance family {X : R(X) <= 0}. For worst-case SRMs the predicate
/// checks each generator against the base measure individually.
AcceptFamily acceptance(const Srm& r);

/// Bisection trace of the induced measure inf{a : X + a accepted}.
struct InducedBisection {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> widths;  // bracket width after each iteration
};

/// Bisection on [threshold - |X|, threshold + |X|] with
/// 2 + ceil(log2(2|X| / tol)) iterations. Errc::invariant_breach when the
/// upper end of the bracket is not accepted.
InducedBisection induced_bisection(const AcceptFamily& family, const RvSet& x, double tol);

/// The acceptance-induced value of R's own acceptance set; equals eval(R, X)
/// within tol for monetary R.
double induced_roundtrip(const Srm& r, const RvSet& x, double tol = Srm::kDefaultTol);

/// Index of the generator attaining a worst-case SRM's value (lowest index on
/// ties), or nullopt for constructions without the worst-case property.
std::optional<std::size_t> attaining_generator(const Srm& r, const RvSet& x);

/// Per-atom value sets combined as sum_i q_i X(w_i) (weighted Minkowski sum
/// of finite real sets), sorted and deduplicated. Guarded to 2^20 points.
std::vector<double> bochner_integral(const RvSet& x, const DualVec& q);

}  // namespace setrisk
