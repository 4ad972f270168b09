#include <benchmark/benchmark.h>

#include <random>

#include "vmfs/clustering.hpp"
#include "vmfs/pipeline.hpp"
#include "vmfs/roughset.hpp"
#include "vmfs/selectors.hpp"
#include "vmfs/synthgen.hpp"

namespace {

const vmfs::LabeledDataset& experiment() {
  static const auto ds = vmfs::generate(vmfs::default_composition());
  return ds;
}

const vmfs::LabeledDataset& small_experiment() {
  static const auto ds = [] {
    auto cfg = vmfs::default_composition();
    cfg.samples_per_vm = 10;
    return vmfs::generate(cfg);
  }();
  return ds;
}

vmfs::Matrix blobs(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  vmfs::Matrix m(n, d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) m(r, c) = g(rng) + 8.0 * static_cast<double>(r % 4);
  return m;
}

}  // namespace

static void BM_KMeans(benchmark::State& state) {
  const auto x = blobs(static_cast<std::size_t>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(vmfs::kmeans(x, 4, 1).inertia);
}
BENCHMARK(BM_KMeans)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_Validity(benchmark::State& state) {
  const auto x = blobs(static_cast<std::size_t>(state.range(0)), 16);
  const auto a = vmfs::kmeans(x, 4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(vmfs::validity(x, a.labels));
}
BENCHMARK(BM_Validity)->Arg(100)->Arg(1000);

static void BM_Cfs(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vmfs::cfs_select(experiment()));
}
BENCHMARK(BM_Cfs)->Unit(benchmark::kMillisecond);

static void BM_ReliefWeights(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vmfs::relief_weights(experiment()));
}
BENCHMARK(BM_ReliefWeights)->Unit(benchmark::kMillisecond);

static void BM_ChiSquare(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vmfs::chi_square_scores(experiment()));
}
BENCHMARK(BM_ChiSquare)->Unit(benchmark::kMillisecond);

static void BM_Usqr(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vmfs::usqr_select(experiment()));
}
BENCHMARK(BM_Usqr)->Unit(benchmark::kMillisecond);

static void BM_WrapperGreedy(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vmfs::wrapper_select(small_experiment()));
}
BENCHMARK(BM_WrapperGreedy)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
