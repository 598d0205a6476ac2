#include "setrisk/riskbase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "setrisk/linprog.hpp"

namespace setrisk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_alpha(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(Errc::invalid_argument, std::string(what) + " level alpha must lie strictly inside (0,1)");
}

void check_on_space(const ProbSpace& space, std::size_t n, const char* what) {
  if (space.size() != n)
    fail(Errc::dimension_mismatch, std::string(what) + ": expected " + std::to_string(space.size()) +
                                       " atoms, got " + std::to_string(n));
}

// Atom indices ordered by outcome, ties by index.
std::vector<std::size_t> ascending_order(const Rv& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  return idx;
}

double expected_shortfall(const ProbSpace& space, const Rv& x, double alpha) {
  double remaining = alpha;
  double tail = 0.0;
  for (std::size_t i : ascending_order(x)) {
    const double take = std::min(space.weight(i), remaining);
    tail += take * (-x[i]);
    remaining -= take;
    if (remaining <= 0.0) break;
  }
  return tail / alpha;
}

double entropic(const ProbSpace& space, const Rv& x, double gamma) {
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) shift = std::max(shift, -gamma * x[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += space.weight(i) * std::exp(-gamma * x[i] - shift);
  return (shift + std::log(s)) / gamma;
}

bool near_equal(const DualVec& a, const DualVec& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

bool in_explicit_hull(const std::vector<DualVec>& verts, const DualVec& q, double tol) {
  for (const auto& v : verts)
    if (near_equal(v, q, tol)) return true;
  const std::size_t m = verts.size();
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::vector<double> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = verts[j][i];
    A.push_back(row);
    b.push_back(q[i] + tol);
    for (double& r : row) r = -r;
    A.push_back(row);
    b.push_back(-q[i] + tol);
  }
  A.emplace_back(m, 1.0);
  b.push_back(1.0);
  A.emplace_back(m, -1.0);
  b.push_back(-1.0);
  return lp::maximize(A, b, std::vector<double>(m, 0.0)).status == lp::Status::Optimal;
}

std::vector<DualVec> es_vertices(const EsPolytope& poly) {
  const std::size_t n = poly.space.size();
  if (n > kMaxEsVertexAtoms)
    fail(Errc::guard_exceeded, "ES polytope vertex enumeration is limited to " +
                                   std::to_string(kMaxEsVertexAtoms) +
                                   " atoms; use the optimization path instead");
  constexpr double tol = 1e-12;
  std::vector<DualVec> out;
  auto push_unique = [&](std::vector<double> q) {
    DualVec v(std::move(q));
    for (const auto& w : out)
      if (near_equal(v, w, tol)) return;
    out.push_back(std::move(v));
  };
  // A basic feasible point of {0 <= q <= cap, sum q = 1} has every coordinate
  // at a bound except at most one.
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double capped = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) capped += poly.cap(i);
    if (capped > 1.0 + tol) continue;
    const double rem = 1.0 - capped;
    std::vector<double> q(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) q[i] = poly.cap(i);
    if (rem <= tol) {
      push_unique(q);
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1U || poly.cap(j) < rem - tol) continue;
      auto r = q;
      r[j] = rem;
      push_unique(std::move(r));
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// DualVec

DualVec::DualVec(std::vector<double> masses) : masses_(std::move(masses)) {
  if (masses_.empty()) fail(Errc::invalid_argument, "dual vector needs at least one atom");
  for (double m : masses_)
    if (!std::isfinite(m)) fail(Errc::invalid_argument, "dual vector masses must be finite");
}

DualVec DualVec::from_space(const ProbSpace& space) {
  return DualVec(std::vector<double>(space.weights().begin(), space.weights().end()));
}

DualVec DualVec::dirac(std::size_t atoms, std::size_t at) {
  std::vector<double> m(atoms, 0.0);
  m.at(at) = 1.0;
  return DualVec(std::move(m));
}

double DualVec::tv_norm() const noexcept {
  double s = 0.0;
  for (double m : masses_) s += std::abs(m);
  return s;
}

double DualVec::total_mass() const noexcept {
  return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

bool DualVec::is_nonnegative() const noexcept {
  return std::all_of(masses_.begin(), masses_.end(), [](double m) { return m >= 0.0; });
}

bool DualVec::is_probability(double tol) const noexcept {
  return is_nonnegative() && std::abs(total_mass() - 1.0) <= tol;
}

double DualVec::integrate(const Rv& x) const {
  if (x.size() != masses_.size())
    fail(Errc::dimension_mismatch, "dual vector and random variable dimensions differ");
  double s = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) s += masses_[i] * x[i];
  return s;
}

std::string to_string(const DualVec& q) {
  std::string out = "[";
  char buf[32];
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g", q[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// ScalarRisk

ScalarRisk ScalarRisk::expected_loss(const ProbSpace& space) {
  return ScalarRisk(space, ExpectedLoss{DualVec::from_space(space)});
}

ScalarRisk ScalarRisk::expected_loss(const ProbSpace& space, DualVec q) {
  check_on_space(space, q.size(), "expected loss");
  if (!q.is_probability()) fail(Errc::invalid_argument, "expected loss needs a probability vector q");
  return ScalarRisk(space, ExpectedLoss{std::move(q)});
}

ScalarRisk ScalarRisk::value_at_risk(const ProbSpace& space, double alpha) {
  check_alpha(alpha, "VaR");
  return ScalarRisk(space, ValueAtRisk{alpha});
}

ScalarRisk ScalarRisk::expected_shortfall(const ProbSpace& space, double alpha) {
  check_alpha(alpha, "ES");
  return ScalarRisk(space, ExpectedShortfall{alpha});
}

ScalarRisk ScalarRisk::entropic(const ProbSpace& space, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    fail(Errc::invalid_argument, "entropic risk aversion gamma must be strictly positive");
  return ScalarRisk(space, Entropic{gamma});
}

ScalarRisk ScalarRisk::max_loss(const ProbSpace& space) { return ScalarRisk(space, MaxLoss{}); }

std::string ScalarRisk::name() const {
  char buf[64];
  std::visit(overloaded{
                 [&](const ExpectedLoss&) { std::snprintf(buf, sizeof buf, "EL"); },
                 [&](const ValueAtRisk& v) { std::snprintf(buf, sizeof buf, "VaR(%g)", v.alpha); },
                 [&](const ExpectedShortfall& e) { std::snprintf(buf, sizeof buf, "ES(%g)", e.alpha); },
                 [&](const Entropic& e) { std::snprintf(buf, sizeof buf, "Entropic(%g)", e.gamma); },
                 [&](const MaxLoss&) { std::snprintf(buf, sizeof buf, "MaxLoss"); },
             },
             params_);
  return buf;
}

double ScalarRisk::operator()(const Rv& x) const { return eval_scalar(*this, x); }

double lower_quantile(const ProbSpace& space, const Rv& x, double alpha) {
  check_on_space(space, x.size(), "quantile");
  double cum = 0.0;
  const auto order = ascending_order(x);
  for (std::size_t i : order) {
    cum += space.weight(i);
    // Cumulative sums of the weights carry roundoff; a level that matches a
    // cumulative weight up to that roundoff counts as reached.
    if (cum + 1e-12 >= alpha) return x[i];
  }
  return x[order.back()];
}

double eval_scalar(const ScalarRisk& rho, const Rv& x) {
  const auto& space = rho.space();
  check_on_space(space, x.size(), rho.name().c_str());
  return std::visit(
      overloaded{
          [&](const ExpectedLoss& el) { return -el.q.integrate(x); },
          [&](const ValueAtRisk& v) { return -lower_quantile(space, x, v.alpha); },
          [&](const ExpectedShortfall& e) { return expected_shortfall(space, x, e.alpha); },
          [&](const Entropic& e) { return entropic(space, x, e.gamma); },
          [&](const MaxLoss&) { return -x.min(); },
      },
      rho.params());
}

bool accepts(const ScalarRisk& rho, const Rv& x) { return eval_scalar(rho, x) <= 0.0; }

// ---------------------------------------------------------------------------
// Dual sets

DualSet DualSet::singleton(DualVec q) {
  if (!q.is_probability()) fail(Errc::invalid_argument, "dual singleton must be a probability vector");
  return DualSet(std::move(q));
}

DualSet DualSet::es_polytope(const ProbSpace& space, double alpha) {
  check_alpha(alpha, "ES polytope");
  return DualSet(EsPolytope{space, alpha});
}

DualSet DualSet::explicit_vertices(std::vector<DualVec> verts) {
  if (verts.empty()) fail(Errc::invalid_argument, "explicit dual set needs at least one vertex");
  for (const auto& v : verts) {
    if (v.size() != verts.front().size())
      fail(Errc::dimension_mismatch, "explicit dual set vertices differ in dimension");
    if (!v.is_probability()) fail(Errc::invalid_argument, "explicit dual set vertices must be probability vectors");
  }
  return DualSet(std::move(verts));
}

std::size_t DualSet::dim() const {
  return std::visit(overloaded{
                        [](const DualVec& q) { return q.size(); },
                        [](const EsPolytope& e) { return e.space.size(); },
                        [](const std::vector<DualVec>& v) { return v.front().size(); },
                    },
                    description_);
}

bool DualSet::contains(const DualVec& q, double tol) const {
  if (q.size() != dim()) return false;
  return std::visit(overloaded{
                        [&](const DualVec& s) { return near_equal(s, q, tol); },
                        [&](const EsPolytope& e) {
                          if (!q.is_probability(tol)) return false;
                          for (std::size_t i = 0; i < q.size(); ++i)
                            if (q[i] > e.cap(i) + tol) return false;
                          return true;
                        },
                        [&](const std::vector<DualVec>& v) {
                          return q.is_probability(tol) && in_explicit_hull(v, q, tol);
                        },
                    },
                    description_);
}

DualSet dual_set(const ScalarRisk& rho) {
  const auto& space = rho.space();
  return std::visit(
      overloaded{
          [&](const ExpectedLoss& el) { return DualSet::singleton(el.q); },
          [&](const ExpectedShortfall& e) { return DualSet::es_polytope(space, e.alpha); },
          [&](const MaxLoss&) {
            std::vector<DualVec> atoms;
            for (std::size_t i = 0; i < space.size(); ++i) atoms.push_back(DualVec::dirac(space.size(), i));
            return DualSet::explicit_vertices(std::move(atoms));
          },
          [&](const Entropic&) -> DualSet {
            fail(Errc::refusal, "no coherent dual set: the entropic measure is convex but not coherent");
          },
          [&](const ValueAtRisk&) -> DualSet {
            fail(Errc::refusal, "no coherent dual set: VaR is not convex");
          },
      },
      rho.params());
}

std::vector<DualVec> vertices(const DualSet& ds) {
  return std::visit(overloaded{
                        [](const DualVec& q) { return std::vector<DualVec>{q}; },
                        [](const EsPolytope& e) { return es_vertices(e); },
                        [](const std::vector<DualVec>& v) { return v; },
                    },
                    ds.description());
}

double kl_divergence(const DualVec& q, const ProbSpace& p) {
  check_on_space(p, q.size(), "KL divergence");
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] > 0.0) s += q[i] * std::log(q[i] / p.weight(i));
  return std::max(0.0, s);
}

double penalty(const ScalarRisk& rho, const DualVec& q) {
  check_on_space(rho.space(), q.size(), "penalty");
  if (!q.is_probability()) fail(Errc::invalid_argument, "penalty is defined on probability vectors");
  return std::visit(
      overloaded{
          [&](const ExpectedLoss& el) { return near_equal(el.q, q, 1e-12) ? 0.0 : kInfinity; },
          [&](const ExpectedShortfall& e) {
            return DualSet::es_polytope(rho.space(), e.alpha).contains(q) ? 0.0 : kInfinity;
          },
          [&](const MaxLoss&) { return 0.0; },
          [&](const Entropic& e) { return kl_divergence(q, rho.space()) / e.gamma; },
          [&](const ValueAtRisk&) -> double {
            fail(Errc::unsupported, "VaR has no convex penalty representation");
          },
      },
      rho.params());
}

}  // namespace setrisk
