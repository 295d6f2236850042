#include "rauzy/exchange.hpp"
#include "rauzy/polytope.hpp"
#include "rauzy/projective.hpp"
#include "rauzy/rauzy.hpp"
#include "rauzy/rng.hpp"
#include "rauzy/weights.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace rauzy;

const char* const kExchanges[] = {"a b | b a", "a b c | c b a", "a b c d | d c b a", "a b c d e f | f e d c b a"};

ScaledWeights sample(const Exchange& ex, unsigned bits, std::uint64_t seed = 1) {
  PolytopeSampler sampler(carried_polytope(ex));
  RandomStream rng(seed);
  return sampler.sample_scaled(rng, bits);
}

void BM_StepScaled(benchmark::State& state) {
  const auto ex = Exchange::parse(kExchanges[state.range(0)]);
  const auto w = sample(ex, 512);
  for (auto _ : state) benchmark::DoNotOptimize(rauzy_step(ex, w));
}
BENCHMARK(BM_StepScaled)->DenseRange(0, 3);

void BM_ExpandScaled(benchmark::State& state) {
  const auto ex = Exchange::parse(kExchanges[state.range(0)]);
  const auto w = sample(ex, 2048);
  for (auto _ : state) benchmark::DoNotOptimize(expand(ex, w, 500));
  state.SetItemsProcessed(state.iterations() * 500);
}
BENCHMARK(BM_ExpandScaled)->DenseRange(0, 3);

void BM_ExpandFast(benchmark::State& state) {
  const auto ex = Exchange::parse(kExchanges[state.range(0)]);
  const auto w = to_fast(normalized(sample(ex, 256)));
  for (auto _ : state) benchmark::DoNotOptimize(expand(ex, w, 10000));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_ExpandFast)->DenseRange(0, 3);

void BM_ExpandExact(benchmark::State& state) {
  const auto ex = Exchange::parse(kExchanges[state.range(0)]);
  const auto w = normalized(sample(ex, 512));
  for (auto _ : state) benchmark::DoNotOptimize(expand(ex, w, 100));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_ExpandExact)->DenseRange(0, 3);

void BM_StoppingDecomposition(benchmark::State& state) {
  const auto ex = Exchange::parse(kExchanges[state.range(0)]);
  const auto trace = expand(ex, sample(ex, 2048), 500);
  for (auto _ : state) benchmark::DoNotOptimize(stopping_decomposition(trace, 100.0));
}
BENCHMARK(BM_StoppingDecomposition)->DenseRange(0, 3);

void BM_SampleScaled(benchmark::State& state) {
  const auto ex = Exchange::parse(kExchanges[state.range(0)]);
  PolytopeSampler sampler(carried_polytope(ex));
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample_scaled(rng, 1024));
}
BENCHMARK(BM_SampleScaled)->DenseRange(0, 3);

void BM_SampleChart(benchmark::State& state) {
  const auto ex = Exchange::parse("a a b c | c b d d");
  PolytopeSampler sampler(carried_polytope(ex));
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample_fast(rng));
}
BENCHMARK(BM_SampleChart);

void BM_Distortion(benchmark::State& state) {
  const auto ex = Exchange::parse(kExchanges[state.range(0)]);
  const auto trace = expand(ex, sample(ex, 2048), 60);
  const auto q = trace.stage_matrix(0, trace.length());
  const auto poly = carried_polytope(trace.exchange(trace.length()));
  for (auto _ : state) benchmark::DoNotOptimize(distortion(q, poly, DistortionMode::exact));
}
BENCHMARK(BM_Distortion)->DenseRange(0, 3);

}  // namespace

BENCHMARK_MAIN();
