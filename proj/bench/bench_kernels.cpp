// Serial references against the OpenMP kernels; set OMP_NUM_THREADS to vary
// the thread count.

#include "edgeworth/cumulants.hpp"
#include "edgeworth/expansion.hpp"
#include "edgeworth/measures.hpp"
#include "edgeworth/moments.hpp"
#include "edgeworth/weighted_sums.hpp"

#include <benchmark/benchmark.h>

using namespace edgeworth;

namespace {

const DistributionSpec& spec3() {
  static const DistributionSpec s = DistributionSpec::three_point(3, Rational(2));
  return s;
}

EdgeworthExpansion expansion(std::size_t n) {
  const auto summand = moments_to_cumulants(analytic_moments<Rational>(spec3(), 6)).cast<double>();
  return EdgeworthExpansion::averaged(summand, n, 4);
}

void BM_sample_weighted_sum(benchmark::State& state) {
  const auto theta = ThetaVector::equal(64);
  const auto batch = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_weighted_sum(spec3(), theta, 1, batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_sample_weighted_sum_serial(benchmark::State& state) {
  const auto theta = ThetaVector::equal(64);
  const auto batch = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_weighted_sum_serial(spec3(), theta, 1, batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_expansion_measure_mc(benchmark::State& state) {
  const auto e = expansion(20);
  const ConvexSet ball = Ball{{0.2, -0.1, 0.4}, 1.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(expansion_measure_mc(e, ball, static_cast<std::size_t>(state.range(0)), 3));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_expansion_measure_mc_serial(benchmark::State& state) {
  const auto e = expansion(20);
  const ConvexSet ball = Ball{{0.2, -0.1, 0.4}, 1.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(expansion_measure_mc_serial(e, ball, static_cast<std::size_t>(state.range(0)), 3));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_exact_box_probability(benchmark::State& state) {
  const auto spec = DistributionSpec::rademacher(1);
  const auto theta = sample_sphere(static_cast<std::size_t>(state.range(0)), 9);
  const Box box{{-0.5}, {0.7}};
  for (auto _ : state) benchmark::DoNotOptimize(exact_box_probability(spec, theta, box));
}

void BM_exact_box_probability_reference(benchmark::State& state) {
  const auto spec = DistributionSpec::rademacher(1);
  const auto theta = sample_sphere(static_cast<std::size_t>(state.range(0)), 9);
  const Box box{{-0.5}, {0.7}};
  for (auto _ : state) benchmark::DoNotOptimize(exact_box_probability_reference(spec, theta, box));
}

}  // namespace

BENCHMARK(BM_sample_weighted_sum)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample_weighted_sum_serial)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_expansion_measure_mc)->Arg(1 << 16)->Arg(1 << 19)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_expansion_measure_mc_serial)->Arg(1 << 16)->Arg(1 << 19)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exact_box_probability)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_exact_box_probability_reference)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
