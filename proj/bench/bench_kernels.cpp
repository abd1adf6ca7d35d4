// Parallel kernels against their serial references.
//
//   ./wsd_bench --benchmark_filter=Dissim
//   OMP_NUM_THREADS=8 ./wsd_bench

#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wsd/agglom.hpp"
#include "wsd/dissim.hpp"
#include "wsd/em.hpp"
#include "wsd/rng.hpp"

namespace {

wsd::FeatureSchema schema(std::size_t q, std::size_t card) {
  wsd::FeatureSchema s;
  for (std::size_t j = 0; j < q; ++j) {
    wsd::FeatureDescriptor d;
    d.name = "F" + std::to_string(j);
    for (std::size_t v = 0; v < card; ++v) d.values.push_back(std::to_string(v));
    s.features.push_back(std::move(d));
  }
  return s;
}

wsd::FeatureMatrix data(std::size_t n, std::size_t q) {
  return wsd::em::generate(3, schema(q, 5), n, 0.7, 12345).data;
}

void BM_DissimSerial(benchmark::State& state) {
  const auto m = data(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(wsd::dissim::build_serial(m));
}

void BM_DissimParallel(benchmark::State& state) {
  const auto m = data(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(wsd::dissim::build(m));
}

void BM_EStepReference(benchmark::State& state) {
  const auto m = data(static_cast<std::size_t>(state.range(0)), 8);
  const auto params = wsd::em::fit(m, 3, 1, {5, 1e-6}).params;
  for (auto _ : state) benchmark::DoNotOptimize(wsd::em::e_step_reference(params, m));
}

void BM_EStepParallel(benchmark::State& state) {
  const auto m = data(static_cast<std::size_t>(state.range(0)), 8);
  const auto params = wsd::em::fit(m, 3, 1, {5, 1e-6}).params;
  for (auto _ : state) benchmark::DoNotOptimize(wsd::em::e_step(params, m));
}

// Ward with the proximity updates pinned to one thread versus the default team.
void BM_Ward(benchmark::State& state) {
  const auto pts = wsd::dissim::row_vectors(wsd::dissim::build(data(static_cast<std::size_t>(state.range(0)), 8)));
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  if (state.range(1) == 1) omp_set_num_threads(1);
#endif
  for (auto _ : state) benchmark::DoNotOptimize(wsd::agglom::ward(pts, 3, 7));
#ifdef _OPENMP
  omp_set_num_threads(saved);
#endif
}

void BM_McQuitty(benchmark::State& state) {
  const auto d = wsd::dissim::build(data(static_cast<std::size_t>(state.range(0)), 8));
  for (auto _ : state) benchmark::DoNotOptimize(wsd::agglom::mcquitty(d, 3, 7));
}

}  // namespace

BENCHMARK(BM_DissimSerial)->Arg(500)->Arg(2000);
BENCHMARK(BM_DissimParallel)->Arg(500)->Arg(2000);
BENCHMARK(BM_EStepReference)->Arg(2000)->Arg(20000);
BENCHMARK(BM_EStepParallel)->Arg(2000)->Arg(20000);
BENCHMARK(BM_Ward)->Args({300, 1})->Args({300, 0})->Args({1000, 1})->Args({1000, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McQuitty)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
