// bench_core.cpp — Microbenchmarks for the hot paths: Bloch steady-state
// solves, rate-equation evolution, operator construction, and the quantum
// layers at small truncations.

#include <benchmark/benchmark.h>

#include <vector>

#include "eitcool/quantum.hpp"
#include "eitcool/rate_model.hpp"
#include "eitcool/spectrum.hpp"

namespace {

using namespace eitcool;

void BM_BlochSteadyState(benchmark::State& state) {
    LambdaParams p;
    double sink = 0.0;
    for (auto _ : state) {
        sink += bloch_steady_state(p, 2.6).rho_ee;
    }
    benchmark::DoNotOptimize(sink);
}
BENCHMARK(BM_BlochSteadyState);

void BM_SpectrumScan(benchmark::State& state) {
    LambdaParams p;
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto scan = spectrum_scan(p, 1.5, 3.5, n);
        benchmark::DoNotOptimize(scan.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SpectrumScan)->Arg(101)->Arg(801)->Unit(benchmark::kMillisecond);

void BM_SidebandWeights(benchmark::State& state) {
    LambdaParams p;
    for (auto _ : state) {
        auto w = sideband_weights(p);
        benchmark::DoNotOptimize(w.red);
    }
}
BENCHMARK(BM_SidebandWeights)->Unit(benchmark::kMillisecond);

void BM_RateCoefficients(benchmark::State& state) {
    LambdaParams p;
    double sink = 0.0;
    for (auto _ : state) {
        sink += rate_coefficients(p).a_minus + steady_state_mean_n(p);
    }
    benchmark::DoNotOptimize(sink);
}
BENCHMARK(BM_RateCoefficients);

void BM_EvolvePopulations(benchmark::State& state) {
    LambdaParams p;
    const auto p0 = PopulationDistribution::thermal(2.0, 60);
    const std::vector<double> grid{2.0e4, 1.0e5, 2.2e5};
    for (auto _ : state) {
        auto states = evolve_populations(p, p0, grid);
        benchmark::DoNotOptimize(states.back().p.data());
    }
}
BENCHMARK(BM_EvolvePopulations)->Unit(benchmark::kMillisecond);

void BM_BuildHamiltonian(benchmark::State& state) {
    LambdaParams p;
    const int n_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto h = build_hamiltonian(p, n_max, LdOrder::second);
        benchmark::DoNotOptimize(h.data());
    }
}
BENCHMARK(BM_BuildHamiltonian)->Arg(8)->Arg(15)->Arg(30);

void BM_BuildJumpOperators(benchmark::State& state) {
    LambdaParams p;
    const int n_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto ls = build_jump_operators(p, n_max, RecoilModel::lamb_dicke_2nd);
        benchmark::DoNotOptimize(ls.data());
    }
}
BENCHMARK(BM_BuildJumpOperators)->Arg(8)->Arg(15);

void BM_EvolveMaster(benchmark::State& state) {
    LambdaParams p;
    p.omega_g = 0.2;
    SimOptions opts;
    opts.n_max = static_cast<int>(state.range(0));
    const auto rho0 = DensityOperator::thermal_g(1.0, opts.n_max);
    const std::vector<double> grid{500.0, 1000.0};
    for (auto _ : state) {
        auto r = evolve_master(p, rho0, grid, opts);
        benchmark::DoNotOptimize(r.n_mean.data());
    }
}
BENCHMARK(BM_EvolveMaster)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SteadyStateMaster(benchmark::State& state) {
    LambdaParams p;
    SimOptions opts;
    opts.n_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto rho = steady_state_master(p, opts);
        benchmark::DoNotOptimize(rho.matrix.data());
    }
}
BENCHMARK(BM_SteadyStateMaster)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Trajectories(benchmark::State& state) {
    LambdaParams p;
    p.omega_g = 0.3;
    SimOptions opts;
    opts.n_max = 6;
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(15.0 * i);
    const int n_traj = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto r = run_trajectories(p, ThermalInit{1.0}, grid, n_traj, 3, opts);
        benchmark::DoNotOptimize(r.n_mean.data());
    }
    state.SetItemsProcessed(state.iterations() * n_traj);
}
BENCHMARK(BM_Trajectories)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
