// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include <benchmark/benchmark.h>

#include "nvsil/correlation.hpp"
#include "nvsil/photon_stream.hpp"
#include "nvsil/random.hpp"
#include "nvsil/saturation.hpp"

using namespace nvsil;

static void BM_simulate_stream(benchmark::State& state)
{
    const TwoLevelEmitterParams p{5e7, 1.0 / 12e-9, 1.0, 0.0};
    const double duration = static_cast<double>(state.range(0)) * 1e-3;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_two_level_stream(p, duration, 1).size());
}
BENCHMARK(BM_simulate_stream)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_correlate(benchmark::State& state)
{
    const TwoLevelEmitterParams p{5e7, 1.0 / 12e-9, 1.0, 0.0};
    const auto [a, b] = hbt_split(simulate_two_level_stream(p, 0.05, 3), 3);
    const double tau_max = static_cast<double>(state.range(0)) * 1e-9;
    for (auto _ : state)
        benchmark::DoNotOptimize(correlate(a, b, 0.1e-9, tau_max).counts.size());
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size()));
}
BENCHMARK(BM_correlate)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_fit_saturation(benchmark::State& state)
{
    Engine rng = make_engine(5);
    SaturationDataset data;
    for (int i = 0; i < 12; ++i) {
        const double intensity = 5.0 + 595.0 * i / 11.0;
        const double rate = saturation_rate(intensity, 493e3, 61.0);
        const double noise = 0.01 * rate * (uniform01(rng) - 0.5) * std::sqrt(12.0);
        data.points.push_back({intensity, rate + noise, 0.01 * rate});
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_saturation(data).r_infinity);
}
BENCHMARK(BM_fit_saturation);
