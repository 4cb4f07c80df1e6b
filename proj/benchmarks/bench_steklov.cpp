#include <benchmark/benchmark.h>

#include "steklov/optimize.hpp"
#include "steklov/presets.hpp"
#include "steklov/solver.hpp"

using namespace steklov;

static void BM_ToGridRoundTrip(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    FourierSeries s(k);
    for (int i = -k; i <= k; ++i) s.set_coeff(i, {1.0 / (1 + i * i), 0.0});
    const int m = default_grid_size(k);
    for (auto _ : state) {
        FourierSeries back = from_grid(to_grid(s, m), k);
        benchmark::DoNotOptimize(back);
    }
}
BENCHMARK(BM_ToGridRoundTrip)->Arg(64)->Arg(256);

static void BM_BoundaryModulus(benchmark::State& state) {
    const ConformalShape shape = preset_cassini(0.4, static_cast<int>(state.range(0))).shape;
    for (auto _ : state) {
        FourierSeries d = boundary_modulus(shape);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_BoundaryModulus)->Arg(64)->Arg(128);

static void BM_SolveSpectrum(benchmark::State& state) {
    const int n2 = static_cast<int>(state.range(0)) / 2;
    const ConformalShape shape = preset_cassini(0.4, n2).shape;
    for (auto _ : state) {
        SteklovSpectrum spec = solve_spectrum(shape, n2);
        benchmark::DoNotOptimize(spec);
    }
}
BENCHMARK(BM_SolveSpectrum)->Arg(32)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_SolveSpectrumSymmetric(benchmark::State& state) {
    const int n2 = static_cast<int>(state.range(0)) / 2;
    const ConformalShape shape = preset_two_fold_fat();
    for (auto _ : state) {
        SteklovSpectrum spec = solve_spectrum_symmetric(shape, n2);
        benchmark::DoNotOptimize(spec);
    }
}
BENCHMARK(BM_SolveSpectrumSymmetric)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_OptimizerStep(benchmark::State& state) {
    OptimizerConfig config;
    config.grid_points = static_cast<int>(state.range(0));
    OptimizationState opt = make_state(preset_two_fold_fat(), 2, config);
    for (auto _ : state) {
        if (!step(opt)) state.SkipWithError(opt.halt_reason.c_str());
    }
}
BENCHMARK(BM_OptimizerStep)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
