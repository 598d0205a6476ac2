#include <algorithm>
#include <cmath>
#include <limits>

#include "setrisk/lab.hpp"

namespace setrisk {

const char* pk_class_name(PkClass c) {
  switch (c) {
    case PkClass::AppearsInner: return "appears-inner";
    case PkClass::AppearsOuterOnly: return "appears-outer-only";
    case PkClass::Outside: return "outside";
  }
  return "?";
}

ConvergenceReport pk_diagnose(const std::vector<RvSet>& sequence, const RvSet& limit, const std::vector<Rv>& witnesses,
                              const PkOptions& options) {
  if (sequence.empty()) fail(Errc::invalid_argument, "convergence diagnosis needs a non-empty sequence");
  for (const auto& s : sequence) require_same_dim(s, limit, "convergence sequence");
  ConvergenceReport rep;
  rep.sequence_id = options.sequence_id;
  for (const auto& s : sequence) rep.hausdorff_tail.push_back(hausdorff(s, limit).upper);

  const std::size_t len = sequence.size();
  const std::size_t tail_start = len - std::max<std::size_t>(1, len / 3);
  for (const auto& w : witnesses) {
    if (w.size() != limit.dim()) fail(Errc::dimension_mismatch, "witness point has the wrong dimension");
    WitnessTail t{w, {}, {}, PkClass::Outside};
    const double at_limit = distance_to(w, limit);
    for (const auto& s : sequence) {
      const double d = distance_to(w, s);
      t.distances.push_back(d);
      t.difference.push_back(std::abs(d - at_limit));
    }
    const auto [lo, hi] = std::minmax_element(t.distances.begin() + static_cast<std::ptrdiff_t>(tail_start),
                                              t.distances.end());
    if (*hi <= options.zero_threshold)
      t.classification = PkClass::AppearsInner;
    else if (*lo <= options.zero_threshold)
      t.classification = PkClass::AppearsOuterOnly;
    rep.pk_witnesses.push_back(std::move(t));
  }
  return rep;
}

ConvergenceReport convergence_report(const Srm& r, const std::vector<RvSet>& sequence, const RvSet& limit,
                                     const std::vector<Rv>& witnesses, const PkOptions& options) {
  auto rep = pk_diagnose(sequence, limit, witnesses, options);
  const double at_limit = r.eval(limit);
  for (const auto& s : sequence) rep.value_tail.push_back(std::abs(r.eval(s) - at_limit));
  return rep;
}

RvSet apply_loss(const ActionLoss& loss, double action, const RvSet& x) {
  std::vector<Rv> out;
  out.reserve(x.size());
  for (const auto& g : x.generators()) {
    Rv y = loss(action, g);
    if (y.size() != g.size()) fail(Errc::dimension_mismatch, "loss changed the number of atoms");
    out.push_back(std::move(y));
  }
  return RvSet(std::move(out));
}

namespace {

struct ActionMin {
  double value;
  double action;
};

ActionMin min_over_actions(const ExperimentSpec& spec, const RvSet& x) {
  ActionMin best{std::numeric_limits<double>::infinity(), 0.0};
  for (double a : spec.action_grid) {
    const double v = spec.srm.eval(apply_loss(spec.loss, a, x));
    if (v < best.value) best = {v, a};
  }
  return best;
}

}  // namespace

ExperimentReport robustness_experiment(const ExperimentSpec& spec) {
  if (spec.action_grid.empty()) fail(Errc::invalid_argument, "experiment action grid is empty");
  if (!spec.loss) fail(Errc::invalid_argument, "experiment needs a loss function");
  for (const auto& s : spec.sequence) require_same_dim(s, spec.limit, "experiment sequence");
  if (spec.limit.dim() != spec.srm.atoms())
    fail(Errc::dimension_mismatch, "experiment sets and SRM live on different spaces");

  ExperimentReport rep;
  const auto limit = min_over_actions(spec, spec.limit);
  rep.limit_value = limit.value;
  rep.limit_argmin = limit.action;
  std::vector<RvSet> limit_images;
  for (double a : spec.action_grid) limit_images.push_back(apply_loss(spec.loss, a, spec.limit));

  for (const auto& s : spec.sequence) {
    const auto m = min_over_actions(spec, s);
    double bound = 0.0;
    for (std::size_t k = 0; k < spec.action_grid.size(); ++k)
      bound = std::max(bound, hausdorff(apply_loss(spec.loss, spec.action_grid[k], s), limit_images[k]).upper);
    const double gap = std::abs(m.value - limit.value);
    rep.values.push_back(m.value);
    rep.argmin.push_back(m.action);
    rep.gaps.push_back(gap);
    rep.bounds.push_back(bound);
    rep.set_distances.push_back(hausdorff(s, spec.limit).upper);
    if (gap > bound + 1e-12) rep.bound_holds = false;
  }
  return rep;
}

}  // namespace setrisk
