#pragma once

// Randomized property harness for SRM axioms, set-convergence diagnostics
// and the application routines (portfolio, contributions, robustness).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "setrisk/core.hpp"
#include "setrisk/riskbase.hpp"
#include "setrisk/srm.hpp"

namespace setrisk {

enum class Axiom {
  Monotonicity,
  TranslationInvariance,
  SetMonotonicity,
  UnionBoundedness,
  WcBoundedness,
  Convexity,
  PositiveHomogeneity,
  SetConvexity,
  Normalization,
  Lipschitz,
  WorstCaseEquality,
  AcceptanceRoundtrip,
};

const char* axiom_name(Axiom a);
std::optional<Axiom> axiom_from_name(const std::string& name);

/// Items (i)-(viii) of the SRM definition, in order.
std::vector<Axiom> definition_axioms();
std::vector<Axiom> all_axioms();

/// A trial violates its axiom when slack < kViolationSlack.
inline constexpr double kViolationSlack = -1e-9;

/// Bounds for random instances. Values are drawn uniformly from
/// [-value_range, value_range]; when `grid` > 0 they are rounded to that pitch.
struct InstanceSpec {
  std::size_t min_atoms = 2;
  std::size_t max_atoms = 6;
  std::size_t min_size = 1;
  std::size_t max_size = 8;
  double value_range = 5.0;
  double grid = 0.0;
  double roundtrip_tol = Srm::kDefaultTol;

  void validate() const;
};

struct TrialOutcome {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::string witness;
};

struct Violation {
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  std::string witness;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

struct AxiomReport {
  Axiom axiom = Axiom::Monotonicity;
  std::size_t trials = 0;
  std::size_t skipped = 0;  // trials whose evaluation raised a library error
  std::vector<Violation> violations;
  double worst_slack = 0.0;
  std::string first_error;

  bool passed() const noexcept { return violations.empty(); }
};

using SrmFactory = std::function<Srm(const ProbSpace&)>;

/// Runs each axiom on `trials` random premise-satisfying instances. The
/// factory form draws a fresh space per trial; the Srm form keeps its atom
/// count and only varies the sets. Library errors are counted, never thrown.
std::vector<AxiomReport> check_axioms(const SrmFactory& factory, const InstanceSpec& spec, std::size_t trials,
                                      std::uint64_t seed, const std::vector<Axiom>& axioms = definition_axioms());
std::vector<AxiomReport> check_axioms(const Srm& r, const InstanceSpec& spec, std::size_t trials, std::uint64_t seed,
                                      const std::vector<Axiom>& axioms = definition_axioms());

/// Rebuilds one trial from (seed, axiom, trial index); bit-identical to the run.
TrialOutcome replay_trial(const SrmFactory& factory, const InstanceSpec& spec, Axiom axiom, std::uint64_t seed,
                          std::size_t trial);
TrialOutcome replay_trial(const Srm& r, const InstanceSpec& spec, Axiom axiom, std::uint64_t seed, std::size_t trial);

/// |induced_roundtrip - eval| <= tol over random instances.
AxiomReport roundtrip_check(const Srm& r, std::size_t trials, double tol, std::uint64_t seed,
                            const InstanceSpec& spec = {});

// ---------------------------------------------------------------------------
// Set convergence

enum class PkClass { AppearsInner, AppearsOuterOnly, Outside };
const char* pk_class_name(PkClass c);

struct WitnessTail {
  Rv witness;
  std::vector<double> distances;   // d(w, X_n)
  std::vector<double> difference;  // |d(w, X_n) - d(w, limit)|
  PkClass classification;
};

struct ConvergenceReport {
  std::string sequence_id;
  std::vector<double> hausdorff_tail;  // d_H(X_n, limit), upper bracket for hulls
  std::vector<double> value_tail;      // |R(X_n) - R(limit)|, empty without an SRM
  std::vector<WitnessTail> pk_witnesses;
};

struct PkOptions {
  double zero_threshold = 1e-6;
  std::string sequence_id;
};

/// Heuristic Painleve-Kuratowski diagnosis on a finite prefix. The tail is
/// the last third of the sequence; a witness "appears inner" when its tail
/// distances all fall below the threshold, "outer only" when only some do.
ConvergenceReport pk_diagnose(const std::vector<RvSet>& sequence, const RvSet& limit, const std::vector<Rv>& witnesses,
                              const PkOptions& options = {});

/// pk_diagnose plus the value tail of R along the sequence.
ConvergenceReport convergence_report(const Srm& r, const std::vector<RvSet>& sequence, const RvSet& limit,
                                     const std::vector<Rv>& witnesses, const PkOptions& options = {});

// ---------------------------------------------------------------------------
// Applications

using ActionLoss = std::function<Rv(double action, const Rv& x)>;

struct ExperimentSpec {
  std::vector<double> action_grid;
  ActionLoss loss;
  std::vector<RvSet> sequence;
  RvSet limit;
  Srm srm;
};

struct ExperimentReport {
  std::vector<double> values;  // min over actions of R(loss(a, X_n))
  std::vector<double> argmin;
  double limit_value = 0.0;
  double limit_argmin = 0.0;
  std::vector<double> gaps;        // |values[n] - limit_value|
  std::vector<double> bounds;      // max over actions of d_H(loss(a, X_n), loss(a, limit))
  std::vector<double> set_distances;  // d_H(X_n, limit)
  bool bound_holds = true;
};

/// Loss images keep Finite mode: loss(a, X) = {loss(a, x) : x generator of X}.
RvSet apply_loss(const ActionLoss& loss, double action, const RvSet& x);

ExperimentReport robustness_experiment(const ExperimentSpec& spec);

struct PortfolioOptions {
  std::size_t initial_steps = 20;
  std::size_t rounds = 3;
  double refine_factor = 4.0;
};

struct PortfolioResult {
  double value = 0.0;
  std::vector<double> weights;
  double expected_return = 0.0;
};

/// min rho(sum w_i x_i) over simplex weights with E_P[sum w_i x_i] >= mu_target.
/// Errc::infeasible when no grid point meets the target.
PortfolioResult portfolio_risk(const RvSet& assets, const ScalarRisk& rho, double mu_target,
                               const PortfolioOptions& options = {});

/// rho(x + y) - min{rho(x), rho(y)}
double risk_contribution(const Rv& x, const Rv& y, const ScalarRisk& rho);
/// rho(sum of generators) - min over generators of rho
double risk_contribution(const RvSet& x, const ScalarRisk& rho);

/// sum over generators of rho(x) - rho(sum of generators)
double diversification_benefit(const RvSet& x, const ScalarRisk& rho);

/// min over the measures of the sum of that measure over the generators.
double inf_convolution(const RvSet& x, const std::vector<ScalarRisk>& measures);

}  // namespace setrisk
