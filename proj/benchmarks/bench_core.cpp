#include <benchmark/benchmark.h>

#include "smldm/capacity.hpp"
#include "smldm/experiments.hpp"
#include "smldm/montecarlo.hpp"

using namespace smldm;

static void BM_SpatialBound(benchmark::State& state)
{
    const SinrVector s = SinrVector::uniform(Layer::Ml, static_cast<std::size_t>(state.range(0)), 0.8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spatial_mi_lower_bound(s));
    }
}
BENCHMARK(BM_SpatialBound)->Arg(2)->Arg(8)->Arg(64);

static void BM_SpatialMiExact(benchmark::State& state)
{
    const SinrVector s = SinrVector::uniform(Layer::Ml, static_cast<std::size_t>(state.range(0)), 0.8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spatial_mi_exact(s, 100000, {1, 0}).mean);
    }
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SpatialMiExact)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_EstimateMoments(benchmark::State& state)
{
    SystemConfig cfg;
    cfg.n_t = 2;
    cfg.n_rm = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_moments(Layer::Ml, cfg, 100000, {1, 0}).n_trials);
    }
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_EstimateMoments)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_BoundSweepFig5(benchmark::State& state)
{
    SweepSpec spec;
    spec.schemes = {SchemeId::SmLdm, SchemeId::SingleTaLdm, SchemeId::SmxLdm};
    spec.layers = {Layer::Fl};
    spec.sweep = {"snr_fl_db", parse_value_list("0:1:40")};
    spec.series = SweepAxis{"injection_level_db", {5, 20}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep(spec).rows.size());
    }
}
BENCHMARK(BM_BoundSweepFig5)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
