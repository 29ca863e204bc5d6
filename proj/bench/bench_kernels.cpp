// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to compare.
#include <benchmark/benchmark.h>

#include "polydet/domain.hpp"
#include "polydet/fit.hpp"
#include "polydet/reference.hpp"
#include "polydet/shapes.hpp"
#include "polydet/walker.hpp"

using namespace polydet;

namespace {

const Domain& annulus8() {
  static const Domain d = make_scaled_domain(shapes::annulus(), 8, {shapes::annulus_hole_puncture()});
  return d;
}

constexpr std::uint64_t kSamples = 1 << 16;

void BM_mc_kernel_parallel(benchmark::State& state) {
  const auto& d = annulus8();
  const int x = d.graph.find({4, 4});
  for (auto _ : state)
    benchmark::DoNotOptimize(mc_dirichlet_kernel(d.graph, d.connection, x, 2.0, kSamples, 7).mean);
  state.SetItemsProcessed(state.iterations() * kSamples);
}

void BM_mc_kernel_serial(benchmark::State& state) {
  const auto& d = annulus8();
  const int x = d.graph.find({4, 4});
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::dirichlet_kernel(d.graph, d.connection, x, 2.0, kSamples, 7).mean);
  state.SetItemsProcessed(state.iterations() * kSamples);
}

const std::vector<std::int64_t> kScales{32, 45, 64, 91, 128};

void BM_sweep_parallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sweep(shapes::unit_square(), {}, kScales));
}

void BM_sweep_serial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::sweep(shapes::unit_square(), {}, kScales));
}

}  // namespace

BENCHMARK(BM_mc_kernel_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_kernel_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
