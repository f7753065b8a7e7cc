// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "nvsil/collection_efficiency.hpp"

using namespace nvsil;

static void BM_efficiency_single_emitter(benchmark::State& state)
{
    const InterfaceConfig planar{Geometry::Planar};
    const EmitterModel emitter = make_nv_emitter(SurfaceOrientation::Cubic100, 0, 0.0);
    const QuadratureConfig quad{static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0)), 1e-6};
    for (auto _ : state)
        benchmark::DoNotOptimize(efficiency(emitter, planar, CollectionOptics{0.85}, quad).eta);
}
BENCHMARK(BM_efficiency_single_emitter)->Arg(32)->Arg(64)->Arg(128);

static void BM_efficiency_100_averaged(benchmark::State& state)
{
    const InterfaceConfig sil{Geometry::HemisphericalSIL};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            efficiency_100_averaged(sil, CollectionOptics{0.85}, {}, static_cast<int>(state.range(0))).eta);
}
BENCHMARK(BM_efficiency_100_averaged)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_monte_carlo(benchmark::State& state)
{
    const InterfaceConfig planar{Geometry::Planar};
    const EmitterModel emitter = make_nv_emitter(SurfaceOrientation::Cubic100, 1, 0.4);
    const MonteCarloConfig mc{static_cast<std::uint64_t>(state.range(0)), 7, 1};
    for (auto _ : state)
        benchmark::DoNotOptimize(efficiency_monte_carlo(emitter, planar, CollectionOptics{0.85}, mc).eta);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_monte_carlo)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
