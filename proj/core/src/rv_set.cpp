#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "setrisk/core.hpp"

namespace setrisk {

namespace {

void check_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) fail(Errc::invalid_argument, "random variable entries must be finite");
}

void check_same_size(const Rv& a, const Rv& b) {
  if (a.size() != b.size())
    fail(Errc::dimension_mismatch, "random variables of different dimension (" +
                                       std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                                       ")");
}

}  // namespace

Rv::Rv(std::vector<double> values) : values_(std::move(values)) { check_finite(values_); }

Rv::Rv(std::initializer_list<double> values) : values_(values) { check_finite(values_); }

Rv Rv::constant(std::size_t atoms, double c) { return Rv(std::vector<double>(atoms, c)); }

double Rv::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Rv::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double Rv::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

Rv Rv::abs() const {
  Rv r = *this;
  for (double& v : r.values_) v = std::abs(v);
  return r;
}

bool Rv::dominated_by(const Rv& other) const {
  check_same_size(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] > other.values_[i]) return false;
  return true;
}

Rv& Rv::operator+=(const Rv& other) {
  check_same_size(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Rv& Rv::operator-=(const Rv& other) {
  check_same_size(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Rv& Rv::operator+=(double c) noexcept {
  for (double& v : values_) v += c;
  return *this;
}

Rv& Rv::operator*=(double lambda) noexcept {
  for (double& v : values_) v *= lambda;
  return *this;
}

double sup_distance(const Rv& a, const Rv& b) {
  check_same_size(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

RvSet::RvSet(std::vector<Rv> generators, SetMode mode) : mode_(mode) {
  if (generators.empty()) fail(Errc::invalid_argument, "set must have at least one generator");
  const std::size_t n = generators.front().size();
  if (n == 0) fail(Errc::invalid_argument, "generators must have at least one atom");
  std::set<Rv> seen;
  generators_.reserve(generators.size());
  for (auto& g : generators) {
    if (g.size() != n)
      fail(Errc::dimension_mismatch, "set generators have inconsistent dimensions (" +
                                         std::to_string(n) + " vs " + std::to_string(g.size()) + ")");
    if (seen.insert(g).second) generators_.push_back(std::move(g));
  }
}

std::string to_string(const Rv& x) {
  std::string out = "(";
  char buf[32];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g", x[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out + ")";
}

std::string to_string(const RvSet& a) {
  std::string out = a.is_hull() ? "conv{" : "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ", ";
    out += to_string(a[i]);
  }
  return out + "}";
}

}  // namespace setrisk
