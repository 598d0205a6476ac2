#include <algorithm>
#include <cmath>
#include <numeric>

#include "setrisk/core.hpp"

namespace setrisk {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::parse: return "parse error";
    case Errc::resolution: return "resolution error";
    case Errc::infeasible: return "infeasible";
    case Errc::refusal: return "refusal";
    case Errc::unsupported: return "unsupported";
    case Errc::guard_exceeded: return "guard exceeded";
    case Errc::invariant_breach: return "invariant breach";
  }
  return "unknown";
}

ProbSpace::ProbSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) fail(Errc::invalid_argument, "probability space needs at least one atom");
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w <= 0.0)
      fail(Errc::invalid_argument, "atom weights must be finite and strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    fail(Errc::invalid_argument, "atom weights must sum to 1 (got " + std::to_string(sum) + ")");
}

ProbSpace ProbSpace::uniform(std::size_t atoms) {
  if (atoms == 0) fail(Errc::invalid_argument, "probability space needs at least one atom");
  return ProbSpace(std::vector<double>(atoms, 1.0 / static_cast<double>(atoms)));
}

double ProbSpace::min_weight() const noexcept {
  return *std::min_element(weights_.begin(), weights_.end());
}

double ProbSpace::expectation(std::span<const double> values) const {
  if (values.size() != weights_.size())
    fail(Errc::dimension_mismatch, "random variable has " + std::to_string(values.size()) +
                                       " atoms, space has " + std::to_string(weights_.size()));
  return std::inner_product(weights_.begin(), weights_.end(), values.begin(), 0.0);
}

}  // namespace setrisk
