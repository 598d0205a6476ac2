#include <algorithm>
#include <cmath>
#include <limits>

#include "setrisk/lab.hpp"
#include "simplex_grid.hpp"

namespace setrisk {

namespace {

void require_finite_mode(const RvSet& x, const char* what) {
  if (x.is_hull()) fail(Errc::invalid_argument, std::string(what) + " needs a Finite-mode set");
}

void require_space(const RvSet& x, const ScalarRisk& rho) {
  if (x.dim() != rho.space().size())
    fail(Errc::dimension_mismatch, "set has " + std::to_string(x.dim()) + " atoms, " + rho.name() + " expects " +
                                       std::to_string(rho.space().size()));
}

Rv generator_sum(const RvSet& x) {
  Rv s = Rv::zero(x.dim());
  for (const auto& g : x.generators()) s += g;
  return s;
}

}  // namespace

PortfolioResult portfolio_risk(const RvSet& assets, const ScalarRisk& rho, double mu_target,
                               const PortfolioOptions& options) {
  require_finite_mode(assets, "portfolio optimization");
  require_space(assets, rho);
  if (options.initial_steps == 0 || !(options.refine_factor > 1.0))
    fail(Errc::invalid_argument, "portfolio grid needs initial_steps >= 1 and refine_factor > 1");

  const auto& space = rho.space();
  std::vector<double> asset_mean;
  for (const auto& g : assets.generators()) asset_mean.push_back(space.expectation(g.values()));

  const std::size_t k = assets.size();
  std::vector<double> mix(assets.dim());
  auto combine = [&](const std::vector<double>& w) {
    std::fill(mix.begin(), mix.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < mix.size(); ++i) mix[i] += w[j] * assets[j][i];
    return Rv(mix);
  };
  auto expected = [&](const std::vector<double>& w) {
    double m = 0.0;
    for (std::size_t j = 0; j < k; ++j) m += w[j] * asset_mean[j];
    return m;
  };

  const auto found = detail::simplex_search(
      k, options.initial_steps, options.rounds, options.refine_factor, [&](const std::vector<double>& w) {
        if (expected(w) < mu_target - 1e-12) return -std::numeric_limits<double>::infinity();
        return -rho(combine(w));
      });
  if (found.weights.empty())
    fail(Errc::infeasible, "no portfolio on the grid reaches the return target mu=" + std::to_string(mu_target));
  return {-found.value, found.weights, expected(found.weights)};
}

double risk_contribution(const Rv& x, const Rv& y, const ScalarRisk& rho) {
  return rho(x + y) - std::min(rho(x), rho(y));
}

double risk_contribution(const RvSet& x, const ScalarRisk& rho) {
  require_finite_mode(x, "risk contribution");
  require_space(x, rho);
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& g : x.generators()) lowest = std::min(lowest, rho(g));
  return rho(generator_sum(x)) - lowest;
}

double diversification_benefit(const RvSet& x, const ScalarRisk& rho) {
  require_finite_mode(x, "diversification benefit");
  require_space(x, rho);
  double sum = 0.0;
  for (const auto& g : x.generators()) sum += rho(g);
  return sum - rho(generator_sum(x));
}

double inf_convolution(const RvSet& x, const std::vector<ScalarRisk>& measures) {
  require_finite_mode(x, "inf-convolution");
  if (measures.empty()) fail(Errc::invalid_argument, "inf-convolution needs at least one measure");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rho : measures) {
    require_space(x, rho);
    double s = 0.0;
    for (const auto& g : x.generators()) s += rho(g);
    best = std::min(best, s);
  }
  return best;
}

}  // namespace setrisk
