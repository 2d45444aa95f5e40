// quantum.hpp — Full quantum model of the cooled ion: Lindblad master
// equation and quantum-jump (Monte Carlo wave function) trajectories on the
// product space (3 internal levels) x (n_max+1 Fock levels).
//
// Basis ordering: |internal> (x) |n| with internal in {g, r, e}; the flat
// index of |s, n> is s*(n_max+1) + n. All rates in units of gamma.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "eitcool/params.hpp"
#include "eitcool/rate_model.hpp"

namespace eitcool {

inline constexpr int kInternalG = 0;
inline constexpr int kInternalR = 1;
inline constexpr int kInternalE = 2;

// Order of the Lamb-Dicke expansion of exp(i eta (a + a†)) in the laser
// couplings; `exact` diagonalizes the truncated displacement generator.
enum class LdOrder { first, second, exact };

// Spontaneous-emission recoil: `none` ignores it; the other two split each
// decay channel into three emission-direction branches with weights chosen
// to reproduce the zeroth and second angular moments {1, alpha} of the
// dipole pattern, with the recoil exponential either expanded to second
// order or applied exactly.
enum class RecoilModel { none, lamb_dicke_2nd, exact };

struct QuantumState {
    Eigen::VectorXcd amplitudes;
    int n_max = 0;

    double norm() const { return amplitudes.norm(); }
    double mean_n() const;

    static QuantumState basis(int internal, int n, int n_max);
};

struct DensityOperator {
    Eigen::MatrixXcd matrix;
    int n_max = 0;

    double trace_real() const { return matrix.trace().real(); }
    double mean_n() const;
    std::array<double, 3> internal_populations() const;  // g, r, e
    PopulationDistribution fock_populations() const;

    // Hermiticity / unit trace / positivity tolerances per the data contract.
    void check(double herm_tol = 1e-10, double trace_tol = 1e-8,
               double min_eig = -1e-8) const;

    static DensityOperator pure(const QuantumState& psi);
    // |g><g| (x) thermal(n_bar), truncated and renormalized.
    static DensityOperator thermal_g(double n_bar, int n_max);
};

struct SimOptions {
    int n_max = 15;
    LdOrder ld_order = LdOrder::second;
    RecoilModel recoil = RecoilModel::lamb_dicke_2nd;
    double eta_emission = -1.0;  // < 0: use params.eta

    // Truncation monitor: evolution errors out when the population of the
    // top two Fock levels exceeds max(tail_tol, 2 x its initial value). The
    // second term exempts the truncated tail of the chosen initial state;
    // the monitor is there to catch population *piling up* at the boundary.
    double tail_tol = 1e-6;
};

// Rotating-frame Hamiltonian
//   nu a†a - delta_g sigma_ee - (delta_g - delta_r) sigma_rr
//   + [omega_g/2 exp(i eta_g (a+a†)) |e><g| + omega_r/2 exp(i eta_r (a+a†)) |e><r| + h.c.]
Eigen::MatrixXcd build_hamiltonian(const LambdaParams& p, int n_max, LdOrder ld_order);

// Jump operators for the decay channels e->g and e->r. With recoil, each
// channel c yields
//   sqrt(gamma_c (1-alpha)) |c><e|,
//   sqrt(gamma_c alpha/2) |c><e| exp(+- i eta_em (a+a†)).
// The completeness residual sum L†L - gamma sigma_ee is checked at build
// time on the low-lying Fock block (it is O(eta^4) there by construction).
std::vector<Eigen::MatrixXcd> build_jump_operators(const LambdaParams& p, int n_max,
                                                   RecoilModel recoil,
                                                   double eta_emission = -1.0);

struct MasterResult {
    std::vector<double> t;
    std::vector<double> n_mean;
    std::vector<std::array<double, 3>> pops;  // g, r, e at each time
    PopulationDistribution final_pn;
    DensityOperator final_rho;
    double max_trace_error = 0.0;
    double max_tail_mass = 0.0;
};

// Integrates d rho/dt = -i[H, rho] + sum_k (L_k rho L_k† - 1/2 {L_k†L_k, rho})
// on the given time grid (t_grid[0] may be > 0; evolution starts at t = 0).
// Uniform grids propagate with a precomputed matrix exponential of the
// Liouvillian (exact for this linear system); non-uniform grids, or systems
// too large to vectorize, fall back to adaptive Runge-Kutta on the matrix.
MasterResult evolve_master(const LambdaParams& p, const DensityOperator& rho0,
                           std::span<const double> t_grid, const SimOptions& opts = {});

// Initial condition for trajectories: a fixed pure state, or |g> (x) a Fock
// state drawn from the thermal distribution per trajectory.
struct ThermalInit {
    double n_bar = 2.0;
};
using InitialState = std::variant<QuantumState, ThermalInit>;

struct EnsembleResult {
    std::vector<double> t_grid;
    std::vector<double> n_mean;
    std::vector<double> n_mean_stderr;
    std::vector<std::array<double, 3>> pops;  // g, r, e at each time
    PopulationDistribution final_pn;          // ensemble-averaged final |<n|psi>|^2
    int n_traj = 0;
    std::uint64_t seed = 0;
    long total_jumps = 0;
};

// Quantum-jump unraveling. Each trajectory evolves under
// H_eff = H - (i/2) sum L†L between jumps; jump times are found by locating
// the norm^2 crossing of a pre-drawn uniform threshold by bisection. The
// per-trajectory random stream is a pure function of (seed, trajectory
// index), so results are bit-reproducible regardless of execution order.
EnsembleResult run_trajectories(const LambdaParams& p, const InitialState& init,
                                std::span<const double> t_grid, int n_traj,
                                std::uint64_t seed, const SimOptions& opts = {});

struct FitResult {
    double w = 0.0;
    double n_s = 0.0;
    double n0 = 0.0;
    double residual = 0.0;   // rms of fit residuals
    bool converged = false;  // false when the data do not pin down the model
};

// Least-squares fit of <n>(t) = n_s + (n0 - n_s) exp(-w t). The amplitude
// parameters enter linearly, so the search is a one-dimensional bracketed
// minimization over w with the linear pair solved exactly at each candidate.
FitResult fit_cooling(std::span<const double> t, std::span<const double> n_mean);

// Stationary state of the Liouvillian via a dense null-space solve with the
// trace constraint; for n_max > 30 a long-time integration is used instead.
// Throws DegenerateSteadyState when the stationary state is not unique
// (e.g. omega_g == 0, or motion decoupled at eta == 0 without recoil).
DensityOperator steady_state_master(const LambdaParams& p, const SimOptions& opts = {});

}  // namespace eitcool
