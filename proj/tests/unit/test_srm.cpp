#include <cmath>

#include "doctest.h"
#include "setrisk/setrisk.hpp"
#include "unit/oracles.hpp"

using namespace setrisk;

namespace {

const ProbSpace u2 = ProbSpace::uniform(2);
const ProbSpace u4 = ProbSpace::uniform(4);

RvSet random_set(CounterRng& rng, std::size_t n, std::size_t k) {
  std::vector<Rv> g;
  for (std::size_t j = 0; j < k; ++j) g.emplace_back(oracle::random_vec(rng, n));
  return RvSet(std::move(g));
}

}  // namespace

TEST_CASE("worst-case examples") {
  const auto wc_el = Srm::worst_case(ScalarRisk::expected_loss(u2));
  CHECK(wc_el(RvSet({Rv{1, 1}, Rv{0, 2}})) == -1.0);
  const Rv x{3, -1};
  CHECK(wc_el(RvSet({x, x + 1.0})) == ScalarRisk::expected_loss(u2)(x));
  CHECK(wc_el.traits().coherent);
  CHECK(wc_el.traits().worst_case);
  CHECK_THROWS_AS(wc_el(RvSet::zero(3)), Error);
}

TEST_CASE("worst-case over hulls") {
  CounterRng rng(11, 1);
  const auto wc_es = Srm::worst_case(ScalarRisk::expected_shortfall(u4, 0.25));
  for (int t = 0; t < 50; ++t) {
    const auto s = random_set(rng, 4, rng.between(1, 5));
    CHECK(wc_es(s) == wc_es(s.with_mode(SetMode::ConvexHull)));
  }
  const auto wc_var = Srm::worst_case(ScalarRisk::value_at_risk(u2, 0.75));
  CHECK_THROWS_AS(wc_var(RvSet::hull({Rv{0, 1}, Rv{1, 0}})), Error);
  // The hull contains the midpoint, which is riskier than both generators.
  const RvSet gens({Rv{0, -1}, Rv{-1, 0}});
  const auto var = ScalarRisk::value_at_risk(u2, 0.75);
  CHECK(wc_var(gens) == 0.0);
  CHECK(var(Rv{-0.5, -0.5}) > wc_var(gens));
}

TEST_CASE("acceptance-induced examples") {
  const auto wc_el = Srm::worst_case(ScalarRisk::expected_loss(u2));
  const auto induced = Srm::accept_induced(acceptance(wc_el), 1e-8);
  CHECK(std::abs(induced(RvSet({Rv{0, -2}})) - 1.0) <= 1e-8);
  CHECK(induced(RvSet::zero(2)) == 0.0);

  const auto wc_es = Srm::worst_case(ScalarRisk::expected_shortfall(u4, 0.5));
  CHECK(std::abs(induced_roundtrip(wc_es, RvSet({Rv{1, 2, 3, 4}})) + 1.5) <= 1e-8);
  const auto wc_ent = Srm::worst_case(ScalarRisk::entropic(u2, 1.0));
  const double ent = std::log((1 + std::exp(-1.0)) / 2);
  CHECK(std::abs(induced_roundtrip(wc_ent, RvSet({Rv{0, 1}})) - ent) <= 1e-6);
  CHECK(std::abs(ent + 0.37989) <= 1e-5);

  const auto trace = induced_bisection(acceptance(wc_el), RvSet({Rv{3, -7}}), 1e-8);
  for (std::size_t i = 1; i < trace.widths.size(); ++i)
    CHECK(trace.widths[i] == doctest::Approx(trace.widths[i - 1] / 2).epsilon(1e-12));
  CHECK(trace.widths.back() <= 1e-8);

  AcceptFamily broken{[](const RvSet&) { return false; }, 2, "never", 0.0};
  CHECK_THROWS_AS(Srm::accept_induced(broken)(RvSet({Rv{1, 2}})), Error);
  CHECK_THROWS_AS(Srm::accept_induced(broken, 0.0), Error);
}

TEST_CASE("acceptance families") {
  const auto fam = acceptance(Srm::worst_case(ScalarRisk::expected_loss(u2)));
  CHECK(fam(RvSet({Rv{1, 1}})));
  CHECK_FALSE(fam(RvSet({Rv{1, -3}})));
  CHECK(fam(RvSet::zero(2)));
  CHECK(fam.threshold == 0.0);

  CounterRng rng(11, 2);
  const auto r1 = Srm::worst_case(ScalarRisk::expected_loss(u2));
  const auto r2 = Srm::worst_case(ScalarRisk::max_loss(u2));
  const auto fmax = acceptance(Srm::composite_max({r1, r2}));
  const auto f1 = acceptance(r1), f2 = acceptance(r2);
  for (int t = 0; t < 200; ++t) {
    const auto s = random_set(rng, 2, rng.between(1, 3));
    CHECK(fmax(s) == (f1(s) && f2(s)));
    // Upward translates stay accepted.
    if (f1(s)) CHECK(f1(s + rng.uniform(0, 2)));
  }
}

TEST_CASE("shortfall SRMs") {
  const auto ent_sf = Srm::shortfall(ShortfallLoss::exponential(1.0), DualSet::singleton(DualVec::from_space(u2)), 0.7);
  const auto ent = Srm::worst_case(ScalarRisk::entropic(u2, 1.0));
  CounterRng rng(11, 3);
  for (int t = 0; t < 50; ++t) {
    const auto s = random_set(rng, 2, rng.between(1, 4));
    CHECK(std::abs(ent_sf(s) - ent(s)) <= 1e-12);
  }
  CHECK(ent_sf(RvSet::zero(2)) == 0.0);

  const auto custom = Srm::shortfall(ShortfallLoss::custom([](double t) { return std::exp(t); }, "exp"),
                                     DualSet::singleton(DualVec::from_space(u2)), 0.7);
  for (int t = 0; t < 20; ++t) {
    const auto s = random_set(rng, 2, rng.between(1, 4));
    CHECK(std::abs(custom(s) - ent(s)) <= 1e-9);
  }
  const auto robust_sf = Srm::shortfall(ShortfallLoss::exponential(2.0),
                                        dual_set(ScalarRisk::expected_shortfall(u4, 0.5)), 1.0);
  CHECK(robust_sf(RvSet::zero(4)) == 0.0);
  CHECK(robust_sf.traits().convex);
  CHECK_THROWS_AS(Srm::shortfall(ShortfallLoss::exponential(1.0), DualSet::singleton(DualVec::from_space(u2)), 0.0),
                  Error);
  CHECK_THROWS_AS(ShortfallLoss::exponential(-1.0), Error);
}

TEST_CASE("composites") {
  const auto el = Srm::worst_case(ScalarRisk::expected_loss(u2));
  const auto es = Srm::worst_case(ScalarRisk::expected_shortfall(u2, 0.5));
  const RvSet x({Rv{1, -1}});
  CHECK(Srm::composite_max({el, es})(x) == 1.0);
  CHECK(Srm::composite_min({el, es})(x) == 0.0);
  CHECK(Srm::composite_average({el, es}, {0.25, 0.75})(x) == 0.75);
  CHECK_THROWS_AS(Srm::composite_average({el, es}, {0.5, 0.6}), Error);
  CHECK_THROWS_AS(Srm::composite_average({el, es}, {1.5, -0.5}), Error);
  CHECK_THROWS_AS(Srm::composite_max({}), Error);
  CHECK_THROWS_AS(Srm::composite_max({el, Srm::worst_case(ScalarRisk::expected_loss(u4))}), Error);
  CHECK(Srm::composite_max({el, es}).traits().coherent);
  CHECK_FALSE(Srm::composite_min({el, es}).traits().convex);

  // Stored WC-boundedness witnesses: min sup > sup min and the averaged analogue.
  const auto a = Srm::worst_case(ScalarRisk::expected_loss(u2, DualVec{0.9, 0.1}));
  const auto b = Srm::worst_case(ScalarRisk::expected_loss(u2, DualVec{0.1, 0.9}));
  const RvSet w({Rv{-1, 1}, Rv{1, -1}});
  const auto rmin = Srm::composite_min({a, b});
  const auto ravg = Srm::composite_average({a, b}, {0.5, 0.5});
  double sup_min = -kInfinity, sup_avg = -kInfinity;
  for (const auto& g : w.generators()) {
    sup_min = std::max(sup_min, rmin(RvSet::singleton(g)));
    sup_avg = std::max(sup_avg, ravg(RvSet::singleton(g)));
  }
  CHECK(rmin(w) == doctest::Approx(0.8));
  CHECK(sup_min == doctest::Approx(-0.8));
  CHECK(ravg(w) == doctest::Approx(0.8));
  CHECK(sup_avg == doctest::Approx(0.0));
}

TEST_CASE("convex combinations") {
  const auto var = ScalarRisk::value_at_risk(u2, 0.75);
  const auto cc = Srm::convex_combination(var, 4);
  const RvSet gens({Rv{0, -1}, Rv{-1, 0}});
  CHECK(cc(gens) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cc(gens) >= Srm::worst_case(var)(gens));
  const auto cc_es = Srm::convex_combination(ScalarRisk::expected_shortfall(u2, 0.5), 2);
  CHECK(cc_es(RvSet({Rv{1, -1}, Rv{0, 3}})) == 1.0);
  CHECK_THROWS_AS(cc_es(RvSet({Rv{1, -1}, Rv{0, 3}, Rv{2, 2}})), Error);
  CHECK_THROWS_AS(Srm::convex_combination(var, 0), Error);
}

TEST_CASE("aggregation") {
  const auto ml = ScalarRisk::max_loss(u2);
  const auto inf = Srm::aggregation(Aggregator::EssInf, ml);
  const auto wc = Srm::worst_case(ml);
  CounterRng rng(11, 4);
  for (int t = 0; t < 50; ++t) {
    const auto s = random_set(rng, 2, rng.between(1, 4));
    CHECK(inf(s) == wc(s));
  }
  CHECK(inf.traits().worst_case);
  const auto sup = Srm::aggregation(Aggregator::EssSup, ScalarRisk::expected_loss(u2));
  CHECK(sup(RvSet({Rv{1, 0}, Rv{0, 1}})) == -1.0);
}

TEST_CASE("uncertainty maps and robust SRMs") {
  CHECK(apply_uncertainty(UncertaintyMap::sup_norm_ball(0.0), Rv{1, 2}).size() == 1);
  const auto ball = apply_uncertainty(UncertaintyMap::sup_norm_ball(1.0), Rv{0, 0});
  CHECK(set_equal(ball, RvSet({Rv{0, 0}, Rv{1, 0}, Rv{-1, 0}, Rv{0, 1}, Rv{0, -1}, Rv{1, 1}, Rv{-1, -1}})));
  CHECK_THROWS_AS(UncertaintyMap::sup_norm_ball(-1.0), Error);

  const auto el = ScalarRisk::expected_loss(u2);
  const Rv x{2, -1};
  CHECK(Srm::robust(el, UncertaintyMap::sup_norm_ball(0.3))(RvSet({x})) == doctest::Approx(el(x) + 0.3));
  CHECK_FALSE(Srm::robust(el, UncertaintyMap::sup_norm_ball(0.3)).traits().normalized);
  CHECK(Srm::robust(el, UncertaintyMap::sup_norm_ball(0.0)).traits().normalized);

  CounterRng rng(11, 5);
  for (int t = 0; t < 50; ++t) {
    const auto s = random_set(rng, 2, rng.between(1, 3));
    const double r1 = rng.uniform(0, 1), r2 = r1 + rng.uniform(0, 1);
    const auto es = ScalarRisk::expected_shortfall(u2, 0.5);
    CHECK(Srm::robust(es, UncertaintyMap::sup_norm_ball(r1))(s) <=
          Srm::robust(es, UncertaintyMap::sup_norm_ball(r2))(s));
  }
  const auto perturb = UncertaintyMap::explicit_perturbations({Rv{-1, 0}});
  CHECK(Srm::robust(el, perturb)(RvSet({x})) == el(x) + 0.5);

  const auto div = UncertaintyMap::divergence_ball([](const Rv& a, const Rv& b) { return sup_distance(a, b); }, 0.5,
                                                   {Rv{-0.4, 0}, Rv{-2, 0}});
  CHECK(apply_uncertainty(div, x).size() == 2);
}

TEST_CASE("Bochner set integrals") {
  const auto r1 = Srm::bochner_min(u2);
  const RvSet x({Rv{0, 4}, Rv{2, 4}});
  CHECK(bochner_integral(x, DualVec::from_space(u2)) == std::vector<double>{2, 3});
  CHECK(r1(x) == -2.0);
  const auto r2 = Srm::bochner_min(u2, {DualVec{0.5, 0.5}, DualVec{1, 0}});
  CHECK(r2(x) == 0.0);
  CHECK_THROWS_AS(Srm::bochner_min(u2, {DualVec{0.5, 0.6}}), Error);

  CounterRng rng(11, 6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = rng.between(1, 5);
    const ProbSpace p(oracle::random_weights(rng, n));
    const auto s = random_set(rng, n, rng.between(1, 6));
    double pointwise = 0.0;
    const Rv lo = ess_inf(s);
    for (std::size_t i = 0; i < n; ++i) pointwise += p.weight(i) * lo[i];
    CHECK(std::abs(Srm::bochner_min(p)(s) + pointwise) <= 1e-12);
  }
}

TEST_CASE("every construction is normalized where declared") {
  const auto es = ScalarRisk::expected_shortfall(u2, 0.5);
  const auto el = ScalarRisk::expected_loss(u2);
  const std::vector<Srm> all{
      Srm::worst_case(es),
      Srm::accept_induced(acceptance(Srm::worst_case(el))),
      Srm::shortfall(ShortfallLoss::exponential(1.5), dual_set(es), 0.3),
      Srm::composite_max({Srm::worst_case(es), Srm::worst_case(el)}),
      Srm::composite_min({Srm::worst_case(es), Srm::worst_case(el)}),
      Srm::composite_average({Srm::worst_case(es), Srm::worst_case(el)}, {0.5, 0.5}),
      Srm::convex_combination(ScalarRisk::value_at_risk(u2, 0.5), 3),
      Srm::aggregation(Aggregator::EssInf, es),
      Srm::aggregation(Aggregator::EssSup, es),
      Srm::robust(es, UncertaintyMap::sup_norm_ball(0.0)),
      Srm::bochner_min(u2),
  };
  for (const auto& r : all) {
    CAPTURE(r.name());
    CHECK(r.traits().normalized);
    CHECK(std::abs(r(RvSet::zero(2))) <= 1e-8);
  }
}

TEST_CASE("attaining generator") {
  const auto wc = Srm::worst_case(ScalarRisk::expected_loss(u2));
  CHECK(attaining_generator(wc, RvSet({Rv{1, 1}, Rv{0, 0}, Rv{-1, 1}})) == std::optional<std::size_t>(1));
  CHECK(attaining_generator(wc, RvSet({Rv{0, 0}, Rv{1, -1}})) == std::optional<std::size_t>(0));
  CHECK_FALSE(attaining_generator(Srm::bochner_min(u2), RvSet({Rv{0, 0}})).has_value());
}
