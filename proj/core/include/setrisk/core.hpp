#pragma once

// Finite probability spaces, random variables on them, and finitely generated
// sets of random variables together with their algebra (Minkowski sum,
// scaling, union, Hausdorff distance, preorder).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "setrisk/error.hpp"

namespace setrisk {

/// Sample space with strictly positive atom weights that sum to one.
class ProbSpace {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit ProbSpace(std::vector<double> weights);
  static ProbSpace uniform(std::size_t atoms);

  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t i) const { return weights_.at(i); }
  double min_weight() const noexcept;

  /// E_P[x] for a plain value vector of matching length.
  double expectation(std::span<const double> values) const;

  bool operator==(const ProbSpace&) const = default;

 private:
  std::vector<double> weights_;
};

/// Real outcome vector indexed by atoms. On a finite space every random
/// variable is bounded, so the essential sup norm is the max-abs entry.
class Rv {
 public:
  Rv() = default;
  explicit Rv(std::vector<double> values);
  Rv(std::initializer_list<double> values);
  static Rv constant(std::size_t atoms, double c);
  static Rv zero(std::size_t atoms) { return constant(atoms, 0.0); }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  double sup_norm() const noexcept;
  double min() const noexcept;
  double max() const noexcept;
  Rv abs() const;

  /// Componentwise x <= y.
  bool dominated_by(const Rv& other) const;

  Rv& operator+=(const Rv& other);
  Rv& operator-=(const Rv& other);
  Rv& operator+=(double c) noexcept;
  Rv& operator*=(double lambda) noexcept;

  friend Rv operator+(Rv a, const Rv& b) { return a += b; }
  friend Rv operator-(Rv a, const Rv& b) { return a -= b; }
  friend Rv operator+(Rv a, double c) { return a += c; }
  friend Rv operator*(double lambda, Rv a) { return a *= lambda; }
  friend Rv operator-(Rv a) { return a *= -1.0; }

  bool operator==(const Rv&) const = default;
  auto operator<=>(const Rv&) const = default;

 private:
  std::vector<double> values_;
};

double sup_distance(const Rv& a, const Rv& b);

enum class SetMode { Finite, ConvexHull };

/// Non-empty finitely generated subset of L-infinity: either the generator
/// list itself (Finite) or its closed convex hull (ConvexHull). Generators are
/// deduplicated by exact equality, keeping first occurrences in order.
class RvSet {
 public:
  RvSet(std::vector<Rv> generators, SetMode mode = SetMode::Finite);
  RvSet(std::initializer_list<Rv> generators, SetMode mode = SetMode::Finite)
      : RvSet(std::vector<Rv>(generators), mode) {}

  static RvSet singleton(Rv x) { return RvSet(std::vector<Rv>{std::move(x)}); }
  static RvSet zero(std::size_t atoms) { return singleton(Rv::zero(atoms)); }
  static RvSet hull(std::vector<Rv> generators) {
    return RvSet(std::move(generators), SetMode::ConvexHull);
  }

  const std::vector<Rv>& generators() const noexcept { return generators_; }
  const Rv& operator[](std::size_t i) const noexcept { return generators_[i]; }
  std::size_t size() const noexcept { return generators_.size(); }
  std::size_t dim() const noexcept { return generators_.front().size(); }
  SetMode mode() const noexcept { return mode_; }
  bool is_hull() const noexcept { return mode_ == SetMode::ConvexHull; }
  bool is_singleton() const noexcept { return generators_.size() == 1; }

  RvSet with_mode(SetMode mode) const { return RvSet(generators_, mode); }

  /// Exact structural equality (same generator list and mode).
  bool operator==(const RvSet&) const = default;

 private:
  std::vector<Rv> generators_;
  SetMode mode_;
};

/// Bracket for a Hausdorff distance. Finite operands give lower == upper.
struct SetDistance {
  double lower = 0.0;
  double upper = 0.0;
  bool exact() const noexcept { return lower == upper; }
};

struct HausdorffOptions {
  std::size_t sample_count = 256;
  std::uint64_t seed = 0x5e7d15a3c0ffee11ULL;
};

void require_same_dim(const RvSet& a, const RvSet& b, const char* what);

RvSet minkowski_sum(const RvSet& a, const RvSet& b);
RvSet scale(const RvSet& a, double lambda);
RvSet translate(const RvSet& a, double alpha);
RvSet translate(const RvSet& a, const Rv& x);
RvSet set_union(const RvSet& a, const RvSet& b);
/// {|x| : x in X}, generator-wise (Finite sets only are meaningful here).
RvSet set_abs(const RvSet& a);

inline RvSet operator+(const RvSet& a, const RvSet& b) { return minkowski_sum(a, b); }
inline RvSet operator+(const RvSet& a, double alpha) { return translate(a, alpha); }
inline RvSet operator*(double lambda, const RvSet& a) { return scale(a, lambda); }
inline RvSet operator-(const RvSet& a) { return scale(a, -1.0); }
inline RvSet operator-(const RvSet& a, const RvSet& b) { return minkowski_sum(a, scale(b, -1.0)); }

/// sup over generators of the sup norm; unchanged by hull formation.
double set_norm(const RvSet& a);

/// Point-to-set distance d(x, X) under the sup norm. Finite sets are exact;
/// ConvexHull sets are solved as a small linear program.
double distance_to(const Rv& x, const RvSet& set);

/// Exact max-min Hausdorff distance between the generator lists.
double hausdorff_generators(const RvSet& a, const RvSet& b);

/// Hausdorff distance. If either operand is in ConvexHull mode both are
/// compared as convex hulls: upper is the generator-level distance, lower is
/// the best support-function gap over a deterministic sample of the TV ball.
SetDistance hausdorff(const RvSet& a, const RvSet& b, const HausdorffOptions& options = {});

/// Closure equality on finite sets: d_H <= 1e-12.
bool set_equal(const RvSet& a, const RvSet& b, double tol = 1e-12);

/// X <= Y in the set preorder: every element of a is dominated by an element
/// of b. When b is a ConvexHull set, domination by the hull is decided by a
/// linear feasibility solve. Elements of a are its generators (the preorder is
/// stable under taking the hull of a once b is convex).
bool preorder_leq(const RvSet& a, const RvSet& b);

Rv ess_sup(const RvSet& a);
Rv ess_inf(const RvSet& a);

/// Pointwise support function max_x sum_i q_i x_i over the generators.
double support_value(const RvSet& a, std::span<const double> q);

std::string to_string(const Rv& x);
std::string to_string(const RvSet& a);

}  // namespace setrisk
