#include <benchmark/benchmark.h>

#include <vector>

#include "lsdnet/evidence.hpp"
#include "lsdnet/geometry.hpp"
#include "lsdnet/optimizer.hpp"
#include "lsdnet/patterns.hpp"
#include "lsdnet/rng.hpp"

using namespace lsdnet;

namespace {

SensorField make_field(std::size_t k, double extent, std::uint64_t seed) {
    CounterRng rng(seed);
    SensorField f;
    for (std::size_t i = 0; i < k; ++i)
        f.coords.push_back({rng.uniform(0.0, extent), rng.uniform(0.0, extent)});
    return f;
}

void BM_GeneralCombine(benchmark::State& state) {
    GeneralMass a(2), b(2);
    a.set(0b01, 0.4);
    a.set(0b11, 0.6);
    b.set(0b01, 0.7);
    b.set(0b11, 0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dempster_combine_general(a, b));
    }
}
BENCHMARK(BM_GeneralCombine);

void BM_SimpleFusionChain(benchmark::State& state) {
    const int len = static_cast<int>(state.range(0));
    std::vector<double> qs(len);
    CounterRng rng(7);
    for (double& q : qs) q = rng.uniform01();
    for (auto _ : state) {
        SimpleFusion fusion;
        for (double q : qs) {
            benchmark::DoNotOptimize(fusion.efficiency_of(q));
            fusion.fuse(q);
        }
        benchmark::DoNotOptimize(fusion.fused_prob());
    }
}
BENCHMARK(BM_SimpleFusionChain)->Arg(4)->Arg(16)->Arg(64);

void BM_Forward(benchmark::State& state) {
    const std::size_t k = static_cast<std::size_t>(state.range(0));
    const double extent = static_cast<double>(state.range(1));
    const Region region = Region::rectangle(extent, extent);
    const TargetGrid grid = discretize(region);
    const SensorField field = make_field(k, extent, 11);
    const EvidentialSensingParams params;
    const DetectionThresholds th;
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward(field, grid, params, th));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(grid.n_targets));
}
BENCHMARK(BM_Forward)->Args({10, 50})->Args({20, 50})->Args({20, 100})->Args({50, 100});

void BM_Gradient(benchmark::State& state) {
    const std::size_t k = static_cast<std::size_t>(state.range(0));
    const double extent = static_cast<double>(state.range(1));
    const Region region = Region::rectangle(extent, extent);
    const TargetGrid grid = discretize(region);
    const SensorField field = make_field(k, extent, 13);
    const EvidentialSensingParams params;
    const DetectionThresholds th;
    const TrainingConfig config;
    const ForwardResult fw = forward(field, grid, params, th);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            gradient(field, grid, fw.frozen, fw.report, fw.importance, config, params));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(grid.n_targets));
}
BENCHMARK(BM_Gradient)->Args({10, 50})->Args({20, 50})->Args({20, 100})->Args({50, 100});

void BM_TrainEpochs(benchmark::State& state) {
    const std::size_t k = static_cast<std::size_t>(state.range(0));
    const Region region = Region::rectangle(50.0, 50.0);
    const TargetGrid grid = discretize(region);
    const SensorField initial = make_field(k, 50.0, 17);
    TrainingConfig config;
    config.max_epochs = 10;
    config.early_stop_patience = 0;
    const EvidentialSensingParams params;
    const DetectionThresholds th;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(initial, grid, params, th, config));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            config.max_epochs);
}
BENCHMARK(BM_TrainEpochs)->Arg(10)->Arg(20)->Arg(40);

}  // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
