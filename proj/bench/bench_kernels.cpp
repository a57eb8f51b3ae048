// Serial reference vs OpenMP kernels on a synthetic MQTT-sized model.
#include <benchmark/benchmark.h>

#include <memory>

#include "protolearn/conformance.hpp"
#include "protolearn/sampling.hpp"
#include "protolearn/synth.hpp"

using namespace protolearn;

namespace {

std::shared_ptr<const MealyMachine> model() {
    static const auto m = std::make_shared<const MealyMachine>(synth_model(18, 9, 4, SynthOptions::mqtt()));
    return m;
}

const TestSuite& suite() {
    static const auto s = gen_random_suite(*model(), 20000, 3, 32, 11);
    return s;
}

HeatmapSpec grid_spec() {
    HeatmapSpec spec;
    spec.base_size = 500;
    spec.factors = {1, 3};
    spec.mean_lengths = {3.0, 18.0};
    spec.reps = 2;
    spec.seed = 1;
    spec.suite_size = 2000;
    return spec;
}

void BM_conformance_serial(benchmark::State& st) {
    for (auto _ : st) {
        benchmark::DoNotOptimize(conformance_pct_serial(*model(), suite()));
    }
}

void BM_conformance_omp(benchmark::State& st) {
    for (auto _ : st) {
        benchmark::DoNotOptimize(conformance_pct(*model(), suite()));
    }
}

void BM_heatmap_serial(benchmark::State& st) {
    for (auto _ : st) {
        benchmark::DoNotOptimize(heatmap_grid_serial(model(), grid_spec()));
    }
}

void BM_heatmap_omp(benchmark::State& st) {
    for (auto _ : st) {
        benchmark::DoNotOptimize(heatmap_grid(model(), grid_spec()));
    }
}

}  // namespace

BENCHMARK(BM_conformance_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_conformance_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_heatmap_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_heatmap_omp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
