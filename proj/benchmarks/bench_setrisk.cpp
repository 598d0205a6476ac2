#include <benchmark/benchmark.h>

#include <vector>

#include "setrisk/setrisk.hpp"

using namespace setrisk;

namespace {

RvSet random_set(CounterRng& rng, std::size_t n, std::size_t k) {
  std::vector<Rv> g;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> v(n);
    for (auto& e : v) e = rng.uniform(-5, 5);
    g.emplace_back(std::move(v));
  }
  return RvSet(std::move(g));
}

void BM_WorstCaseES(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterRng rng(1, 1);
  const auto x = random_set(rng, n, 8);
  const auto r = Srm::worst_case(ScalarRisk::expected_shortfall(ProbSpace::uniform(n), 0.25));
  for (auto _ : state) benchmark::DoNotOptimize(r(x));
}
BENCHMARK(BM_WorstCaseES)->Arg(4)->Arg(16)->Arg(64);

void BM_Hausdorff(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  CounterRng rng(1, 2);
  const auto a = random_set(rng, 8, k);
  const auto b = random_set(rng, 8, k);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff(a, b));
}
BENCHMARK(BM_Hausdorff)->Arg(8)->Arg(64);

void BM_Minkowski(benchmark::State& state) {
  CounterRng rng(1, 3);
  const auto a = random_set(rng, 6, 16);
  const auto b = random_set(rng, 6, 16);
  for (auto _ : state) benchmark::DoNotOptimize(a + b);
}
BENCHMARK(BM_Minkowski);

void BM_InducedBisection(benchmark::State& state) {
  CounterRng rng(1, 4);
  const auto x = random_set(rng, 4, 4);
  const auto r = Srm::worst_case(ScalarRisk::entropic(ProbSpace::uniform(4), 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(induced_roundtrip(r, x));
}
BENCHMARK(BM_InducedBisection);

void BM_DualVertices(benchmark::State& state) {
  CounterRng rng(1, 5);
  const auto x = random_set(rng, 6, 8);
  const auto r = Srm::worst_case(ScalarRisk::expected_shortfall(ProbSpace::uniform(6), 0.25));
  for (auto _ : state) benchmark::DoNotOptimize(maximize_dual(r, x, DualMethod::Vertices).gap);
}
BENCHMARK(BM_DualVertices);

void BM_DualAscent(benchmark::State& state) {
  CounterRng rng(1, 6);
  const auto x = random_set(rng, 6, 4);
  const auto r = Srm::worst_case(ScalarRisk::entropic(ProbSpace::uniform(6), 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(maximize_dual(r, x, DualMethod::ProjectedAscent).gap);
}
BENCHMARK(BM_DualAscent);

void BM_AxiomSuite(benchmark::State& state) {
  const auto r = Srm::worst_case(ScalarRisk::expected_shortfall(ProbSpace::uniform(4), 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(check_axioms(r, InstanceSpec{}, 50, 42));
}
BENCHMARK(BM_AxiomSuite);

}  // namespace

BENCHMARK_MAIN();
