#include <doctest.h>

#include <cmath>
#include <vector>

#include "eitcool/quantum.hpp"
#include "eitcool/rate_model.hpp"
#include "oracles.hpp"

using namespace eitcool;
using oracles::rel_err;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

TEST_SUITE("quantum_dynamics") {

TEST_CASE("dark initial state is stationary") {
    LambdaParams p;
    p.omega_g = 0.0;
    SimOptions opts;
    opts.n_max = 6;
    const auto rho0 = DensityOperator::pure(QuantumState::basis(kInternalG, 3, 6));
    const auto grid = linspace(10.0, 40.0, 4);
    const MasterResult r = evolve_master(p, rho0, grid, opts);
    for (double n : r.n_mean) CHECK(n == doctest::Approx(3.0).epsilon(1e-10));
    for (const auto& pop : r.pops) CHECK(pop[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.max_trace_error < 1e-10);
}

TEST_CASE("decoupled motion: internal dynamics matches the Bloch oracle") {
    LambdaParams p;
    p.eta = 0.0;
    p.eta_g = p.eta_r = 0.0;
    p.omega_g = 0.3;
    p.delta_g = 2.2;  // generic, off the dark resonance
    SimOptions opts;
    opts.n_max = 4;
    opts.recoil = RecoilModel::none;
    const auto rho0 = DensityOperator::pure(QuantumState::basis(kInternalG, 2, 4));
    const auto grid = linspace(5.0, 40.0, 8);
    const MasterResult r = evolve_master(p, rho0, grid, opts);

    oracles::BlochParams op;
    op.omega_g = 0.3;
    op.delta_g = 2.2;
    Eigen::Matrix3cd rho3 = Eigen::Matrix3cd::Zero();
    rho3(0, 0) = 1.0;
    double t_prev = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        rho3 = oracles::bloch_evolve(op, rho3, grid[k] - t_prev, 2e-4);
        t_prev = grid[k];
        CHECK(r.n_mean[k] == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(std::abs(r.pops[k][0] - rho3(0, 0).real()) < 1e-8);
        CHECK(std::abs(r.pops[k][1] - rho3(1, 1).real()) < 1e-8);
        CHECK(std::abs(r.pops[k][2] - rho3(2, 2).real()) < 1e-8);
    }
}

TEST_CASE("trace conserved on a generic cooling run") {
    LambdaParams p;
    SimOptions opts;
    opts.n_max = 8;
    const auto rho0 = DensityOperator::thermal_g(1.0, 8);
    const MasterResult r = evolve_master(p, rho0, linspace(50.0, 1000.0, 20), opts);
    CHECK(r.max_trace_error < 1e-8);
    for (const auto& pop : r.pops)
        CHECK(pop[0] + pop[1] + pop[2] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("master evolution relaxes onto the stationary solve") {
    LambdaParams p;
    p.omega_g = 0.2;  // faster relaxation than the default drive
    SimOptions opts;
    opts.n_max = 8;
    const auto rho0 = DensityOperator::thermal_g(1.5, 8);
    const std::vector<double> grid{40000.0};
    const MasterResult r = evolve_master(p, rho0, grid, opts);
    const DensityOperator ss = steady_state_master(p, opts);
    CHECK(rel_err(r.n_mean.back(), ss.mean_n()) < 1e-5);
    const auto pn_t = r.final_pn;
    const auto pn_s = ss.fock_populations();
    for (std::size_t n = 0; n < pn_t.p.size(); ++n)
        CHECK(std::abs(pn_t.p[n] - pn_s.p[n]) < 1e-6);
}

TEST_CASE("steady state against the detailed-balance distribution") {
    LambdaParams p;  // default operating point, weak drive
    SimOptions opts;
    opts.n_max = 12;
    const DensityOperator ss = steady_state_master(p, opts);
    CHECK_NOTHROW(ss.check(1e-9, 1e-9, -1e-8));
    const double ns_rate = steady_state_mean_n(p);
    CHECK(std::abs(ss.mean_n() - ns_rate) / ns_rate < 0.30);
    CHECK(ss.fock_populations().p[0] >= 0.98);
}

TEST_CASE("degenerate stationary states are rejected") {
    SimOptions opts;
    opts.n_max = 4;
    LambdaParams p;
    p.omega_g = 0.0;
    CHECK_THROWS_AS((void)steady_state_master(p, opts), DegenerateSteadyState);

    LambdaParams q;
    q.eta = 0.0;
    q.eta_g = q.eta_r = 0.0;
    SimOptions no_recoil = opts;
    no_recoil.recoil = RecoilModel::none;
    CHECK_THROWS_AS((void)steady_state_master(q, no_recoil), DegenerateSteadyState);
}

TEST_CASE("single dark trajectory never jumps") {
    LambdaParams p;
    p.omega_g = 0.0;
    SimOptions opts;
    opts.n_max = 5;
    const QuantumState psi0 = QuantumState::basis(kInternalG, 0, 5);
    const EnsembleResult r =
        run_trajectories(p, psi0, linspace(100.0, 1000.0, 10), 1, 7, opts);
    CHECK(r.total_jumps == 0);
    for (double n : r.n_mean) CHECK(n == doctest::Approx(0.0));
}

TEST_CASE("trajectories are bit-reproducible for a fixed seed") {
    LambdaParams p;
    p.omega_g = 0.3;
    SimOptions opts;
    opts.n_max = 5;
    const auto grid = linspace(20.0, 200.0, 10);
    const EnsembleResult a = run_trajectories(p, ThermalInit{1.0}, grid, 24, 123, opts);
    const EnsembleResult b = run_trajectories(p, ThermalInit{1.0}, grid, 24, 123, opts);
    CHECK(a.n_mean == b.n_mean);
    CHECK(a.n_mean_stderr == b.n_mean_stderr);
    CHECK(a.final_pn.p == b.final_pn.p);
    CHECK(a.total_jumps == b.total_jumps);

    const EnsembleResult c = run_trajectories(p, ThermalInit{1.0}, grid, 24, 124, opts);
    CHECK(a.n_mean != c.n_mean);
}

TEST_CASE("ensemble mean tracks the master equation within three standard errors") {
    LambdaParams p;
    p.omega_g = 0.3;  // plenty of jumps, fast dynamics
    p.eta = 0.1;
    p.eta_g = 0.1;
    SimOptions opts;
    opts.n_max = 6;
    const auto grid = linspace(20.0, 300.0, 15);
    const auto rho0 = DensityOperator::thermal_g(1.0, 6);
    const MasterResult me = evolve_master(p, rho0, grid, opts);
    const EnsembleResult mc = run_trajectories(p, ThermalInit{1.0}, grid, 300, 5, opts);
    CHECK(mc.total_jumps > 50);  // enough decay events to exercise the jump path
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(mc.n_mean_stderr[k] > 0.0);
        CHECK(std::abs(mc.n_mean[k] - me.n_mean[k]) < 3.0 * mc.n_mean_stderr[k]);
    }
}

TEST_CASE("standard error scales as one over sqrt(n_traj)") {
    LambdaParams p;
    p.omega_g = 0.3;
    p.eta = 0.1;
    p.eta_g = 0.1;
    SimOptions opts;
    opts.n_max = 6;
    const auto grid = linspace(50.0, 250.0, 5);
    const EnsembleResult small = run_trajectories(p, ThermalInit{1.0}, grid, 200, 11, opts);
    const EnsembleResult big = run_trajectories(p, ThermalInit{1.0}, grid, 800, 11, opts);
    double ratio = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        ratio += small.n_mean_stderr[k] / big.n_mean_stderr[k];
    ratio /= static_cast<double>(grid.size());
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.20));
}

TEST_CASE("fitted cooling rate and limit track the rate model in its validity regime") {
    LambdaParams p;
    p.omega_g = 0.1;  // still weak drive, but fast enough to fit cheaply
    SimOptions opts;
    opts.n_max = 10;
    const double w_rate = p.eta * p.eta *
                          (rate_coefficients(p).a_minus - rate_coefficients(p).a_plus);
    const auto grid = linspace(0.0, 6.0 / w_rate, 25);
    const auto rho0 = DensityOperator::thermal_g(1.0, opts.n_max);
    const MasterResult r = evolve_master(p, rho0, grid, opts);
    const FitResult f = fit_cooling(grid, r.n_mean);
    CHECK(f.converged);
    CHECK(std::abs(f.w - w_rate) / w_rate < 0.30);
    const double ns_rate = steady_state_mean_n(p);
    CHECK(std::abs(f.n_s - ns_rate) / ns_rate < 0.30);
}

TEST_CASE("ensemble observables stable under a larger truncation") {
    LambdaParams p;
    SimOptions opts;
    opts.n_max = 15;
    const double w = cooling_rate(p);
    const auto grid = linspace(0.0, 5.0 / w, 12);
    const EnsembleResult a = run_trajectories(p, ThermalInit{2.0}, grid, 200, 3, opts);
    SimOptions wide = opts;
    wide.n_max = 25;
    const EnsembleResult b = run_trajectories(p, ThermalInit{2.0}, grid, 200, 3, wide);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double band = 3.0 * std::hypot(a.n_mean_stderr[k], b.n_mean_stderr[k]);
        CHECK(std::abs(a.n_mean[k] - b.n_mean[k]) < band + 1e-12);
    }
}

TEST_CASE("boundary pile-up raises a truncation error") {
    LambdaParams p;
    p.delta_g = p.delta_r = -2.5;  // heating regime
    SimOptions opts;
    opts.n_max = 4;
    const auto rho0 = DensityOperator::thermal_g(0.5, 4);
    const auto grid = linspace(2.0e4, 2.0e5, 10);
    CHECK_THROWS_AS((void)evolve_master(p, rho0, grid, opts), TruncationError);
}

}  // TEST_SUITE
