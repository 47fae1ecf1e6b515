#include <benchmark/benchmark.h>

#include "qrm/cycle.hpp"
#include "qrm/eigen.hpp"
#include "qrm/model.hpp"
#include "qrm/splitting.hpp"

// Dense solve of the full truncated matrix versus the two parity tridiagonals.
static void DenseEigh(benchmark::State& state) {
    const qrm::ModelParams params(400.0, 0.9);
    const Eigen::MatrixXd h = qrm::build_hamiltonian(params, qrm::Truncation(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        auto result = qrm::eigh(h);
        benchmark::DoNotOptimize(result.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(DenseEigh)->RangeMultiplier(2)->Range(32, 512)->Complexity();

static void ParityTridiagonal(benchmark::State& state) {
    const qrm::ModelParams params(400.0, 0.9);
    const qrm::Truncation trunc(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto values = qrm::truncated_spectrum(params, trunc);
        benchmark::DoNotOptimize(values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(ParityTridiagonal)->RangeMultiplier(2)->Range(32, 4096)->Complexity();

static void ConvergedSpectrum(benchmark::State& state) {
    const qrm::ModelParams params(static_cast<double>(state.range(0)), 1.2);
    for (auto _ : state) {
        auto spectrum = qrm::converged_spectrum(params, {8, 1e-8, 32, 4096});
        benchmark::DoNotOptimize(spectrum.energies.data());
    }
}
BENCHMARK(ConvergedSpectrum)->Arg(100)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

static void SpectralCycle(benchmark::State& state) {
    qrm::CycleSpec spec;
    spec.backend = qrm::Backend::spectral;
    spec.ratio = 400.0;
    spec.g1 = 0.2;
    spec.g2 = 1.05;
    spec.t_cold = 1e-3 * spec.ratio;
    spec.t_hot = 1.1 * spec.t_cold;
    for (auto _ : state) {
        auto result = qrm::run_cycle(spec);
        benchmark::DoNotOptimize(result.work);
    }
}
BENCHMARK(SpectralCycle)->Unit(benchmark::kMillisecond);

static void GroundGapExtended(benchmark::State& state) {
    const qrm::ModelParams params(static_cast<double>(state.range(0)), 1.2);
    for (auto _ : state) {
        auto gap = qrm::resolve_ground_gap(params);
        benchmark::DoNotOptimize(gap.gap);
    }
}
BENCHMARK(GroundGapExtended)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
