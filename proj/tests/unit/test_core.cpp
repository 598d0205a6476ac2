#include <cmath>

#include "doctest.h"
#include "setrisk/setrisk.hpp"
#include "unit/oracles.hpp"

using namespace setrisk;

namespace {

RvSet random_set(CounterRng& rng, std::size_t n, std::size_t k) {
  std::vector<Rv> g;
  for (std::size_t j = 0; j < k; ++j) g.emplace_back(oracle::random_vec(rng, n));
  return RvSet(std::move(g));
}

bool same(const RvSet& a, const RvSet& b) { return set_equal(a, b); }

}  // namespace

TEST_CASE("probability space validation") {
  CHECK_NOTHROW(ProbSpace({0.5, 0.5}));
  CHECK_THROWS_AS(ProbSpace({0.5, 0.4}), Error);
  CHECK_THROWS_AS(ProbSpace({1.0, 0.0}), Error);
  CHECK_THROWS_AS(ProbSpace(std::vector<double>{}), Error);
  const auto u = ProbSpace::uniform(4);
  CHECK(u.size() == 4);
  CHECK(u.min_weight() == 0.25);
  CHECK(u.expectation(Rv{1, 2, 3, 4}.values()) == 2.5);
}

TEST_CASE("random variables") {
  CHECK_THROWS_AS(Rv({1.0, std::nan("")}), Error);
  const Rv x{1, -3};
  CHECK(x.sup_norm() == 3);
  CHECK(x.min() == -3);
  CHECK(x.max() == 1);
  CHECK(sup_distance(x, Rv{0, 0}) == 3);
  CHECK(((x + 1.0) == Rv{2, -2}));
  CHECK(((2.0 * x) == Rv{2, -6}));
  CHECK_THROWS_AS((x + Rv{1, 2, 3}), Error);
}

TEST_CASE("set construction deduplicates and validates") {
  const RvSet s({Rv{1, 0}, Rv{0, 1}, Rv{1, 0}});
  CHECK(s.size() == 2);
  CHECK((s[0] == Rv{1, 0}));
  CHECK_THROWS_AS(RvSet(std::vector<Rv>{}), Error);
  CHECK_THROWS_AS(RvSet({Rv{1, 0}, Rv{1}}), Error);
  CHECK(RvSet::zero(3).is_singleton());
  CHECK(RvSet::hull({Rv{0}, Rv{1}}).is_hull());
}

TEST_CASE("Minkowski sum examples") {
  CHECK(same(RvSet({Rv{0, 1}}) + RvSet({Rv{1, 0}, Rv{2, 2}}), RvSet({Rv{1, 1}, Rv{2, 3}})));
  const RvSet x({Rv{1, 2}, Rv{-1, 0}});
  CHECK(same(x + RvSet::zero(2), x));
  CHECK(same(RvSet({Rv{1, 1}}) + RvSet({Rv{-1, -1}}), RvSet::zero(2)));
  CHECK_THROWS_AS(x + RvSet::zero(3), Error);
  CHECK((RvSet::hull({Rv{0}, Rv{1}}) + RvSet({Rv{2}})).is_hull());
}

TEST_CASE("scaling and translation examples") {
  CHECK(same(2.0 * RvSet({Rv{1, 2}}), RvSet({Rv{2, 4}})));
  CHECK(same(0.0 * RvSet({Rv{1, 2}, Rv{3, 4}}), RvSet::zero(2)));
  CHECK(same(-1.0 * RvSet({Rv{1, 0}, Rv{0, 1}}), RvSet({Rv{-1, 0}, Rv{0, -1}})));
  CHECK(same(RvSet({Rv{1, 2}}) + 1.0, RvSet({Rv{2, 3}})));
  const RvSet x({Rv{1, 2}, Rv{-1, 0}});
  CHECK(same(translate(x, 0.0), x));
}

TEST_CASE("Hausdorff distance examples and metric laws") {
  CHECK(hausdorff(RvSet({Rv{0, 0}}), RvSet({Rv{1, 1}, Rv{2, 2}})).upper == 2.0);
  CHECK(hausdorff(RvSet({Rv{0, 0}}), RvSet({Rv{1, 1}, Rv{2, 2}})).exact());
  CHECK(hausdorff(RvSet({Rv{1, -2}}), RvSet({Rv{0, 3}})).upper == 5.0);

  CounterRng rng(7, 1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = rng.between(1, 5);
    const auto a = random_set(rng, n, rng.between(1, 6));
    const auto b = random_set(rng, n, rng.between(1, 6));
    const auto c = random_set(rng, n, rng.between(1, 6));
    const double ab = hausdorff(a, b).upper;
    CHECK(ab == hausdorff(b, a).upper);
    CHECK(hausdorff(a, a).upper == 0.0);
    CHECK(hausdorff(a, c).upper <= ab + hausdorff(b, c).upper + 1e-12);
    const double shift = rng.uniform(-3, 3);
    CHECK(std::abs(hausdorff(a + shift, b + shift).upper - ab) <= 1e-12);
    const double lam = rng.uniform(-2, 2);
    CHECK(std::abs(hausdorff(lam * a, lam * b).upper - std::abs(lam) * ab) <= 1e-12);
    CHECK(ab <= set_norm(a - b) + 1e-12);
    CHECK(hausdorff(set_union(a, b), a).upper <= ab + 1e-12);
  }
}

TEST_CASE("hull-mode Hausdorff is a valid bracket") {
  CounterRng rng(7, 2);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = rng.between(1, 4);
    const auto a = random_set(rng, n, rng.between(1, 5));
    const auto b = random_set(rng, n, rng.between(1, 5));
    const auto d = hausdorff(a.with_mode(SetMode::ConvexHull), b.with_mode(SetMode::ConvexHull));
    CHECK(d.lower <= d.upper);
    CHECK(d.upper == hausdorff_generators(a, b));
    // Every point of conv(a) is within d.upper of conv(b): spot-check random combinations.
    for (int s = 0; s < 5; ++s) {
      Rv c = Rv::zero(n);
      double tot = 0.0;
      std::vector<double> w(a.size());
      for (auto& e : w) tot += (e = rng.uniform());
      for (std::size_t j = 0; j < a.size(); ++j) c += (w[j] / tot) * a[j];
      CHECK(distance_to(c, b.with_mode(SetMode::ConvexHull)) <= d.upper + 1e-9);
    }
  }
  // A finite set against its own hull: not equal as sets, but at distance 0 as hulls.
  const RvSet pts({Rv{0}, Rv{2}});
  CHECK(hausdorff(pts, pts.with_mode(SetMode::ConvexHull)).upper == 0.0);
}

TEST_CASE("set norm") {
  CHECK(set_norm(RvSet({Rv{1, -2}, Rv{0, 3}})) == 3.0);
  CHECK(set_norm(RvSet::zero(4)) == 0.0);
  CounterRng rng(7, 3);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_set(rng, 3, 4);
    const double lam = rng.uniform(-3, 3);
    CHECK(std::abs(set_norm(lam * a) - std::abs(lam) * set_norm(a)) <= 1e-12);
  }
}

TEST_CASE("preorder") {
  CHECK(preorder_leq(RvSet({Rv{0, 0}}), RvSet({Rv{1, 1}, Rv{-5, -5}})));
  CHECK_FALSE(preorder_leq(RvSet({Rv{2, 2}}), RvSet({Rv{1, 1}})));
  const RvSet gens({Rv{2, -2}, Rv{-2, 2}});
  CHECK_FALSE(preorder_leq(RvSet({Rv{1, 0}}), gens));
  CHECK_FALSE(preorder_leq(RvSet({Rv{1, 0}}), gens.with_mode(SetMode::ConvexHull)));
  CHECK(preorder_leq(RvSet({Rv{0, 0}}), gens.with_mode(SetMode::ConvexHull)));
  CHECK_FALSE(preorder_leq(RvSet({Rv{0, 0}}), gens));

  CounterRng rng(7, 4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = rng.between(1, 4);
    const auto a = random_set(rng, n, rng.between(1, 4));
    std::vector<Rv> bg;
    for (const auto& g : a.generators()) {
      Rv y = g;
      y += rng.uniform(0, 1);
      bg.push_back(y);
    }
    const RvSet b(bg);
    REQUIRE(preorder_leq(a, b));
    const auto z = random_set(rng, n, 2);
    CHECK(preorder_leq(a + z, b + z));
    const double lam = rng.uniform(0, 2);
    CHECK(preorder_leq(lam * a, lam * b));
    CHECK(preorder_leq(-b, -a));
  }
}

TEST_CASE("essential bounds and union") {
  const RvSet s({Rv{1, 0}, Rv{0, 1}});
  CHECK((ess_sup(s) == Rv{1, 1}));
  CHECK((ess_inf(s) == Rv{0, 0}));
  CHECK((ess_sup(RvSet({Rv{3, 4}})) == Rv{3, 4}));
  CHECK(same(set_union(RvSet({Rv{1, 0}}), RvSet({Rv{0, 1}})), s));
  CHECK(same(set_union(s, s), s));
  CHECK(set_union(s, s.with_mode(SetMode::ConvexHull)).is_hull());
}

TEST_CASE("distributivity and its failure") {
  CounterRng rng(7, 5);
  for (int t = 0; t < 50; ++t) {
    const auto x = random_set(rng, 3, 3);
    const auto y = random_set(rng, 3, 3);
    const double lam = rng.uniform(-2, 2);
    CHECK(hausdorff(lam * (x + y), lam * x + lam * y).upper <= 1e-12);
  }
  // 1X + 1X has the cross sums, 2X does not.
  const RvSet x({Rv{0}, Rv{1}});
  CHECK_FALSE(same(x + x, 2.0 * x));
}

TEST_CASE("support values") {
  const RvSet s({Rv{1, 0}, Rv{0, 1}});
  const std::vector<double> q{0.5, 0.5};
  CHECK(support_value(s, q) == 0.5);
}

TEST_CASE("linear programming") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6
  const auto r = lp::maximize({{1, 2}, {3, 1}}, {4, 6}, {1, 1});
  REQUIRE(r.status == lp::Status::Optimal);
  CHECK(r.objective == doctest::Approx(2.8));
  CHECK(lp::maximize({{1, 1}}, {-1}, {1, 0}).status == lp::Status::Infeasible);
  CHECK(lp::maximize({{-1, 0}}, {1}, {1, 0}).status == lp::Status::Unbounded);
}

TEST_CASE("error codes have names") {
  CHECK(std::string(errc_name(Errc::dimension_mismatch)) == "dimension mismatch");
  try {
    fail(Errc::refusal, "nope");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::refusal);
  }
}
