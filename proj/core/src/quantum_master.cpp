#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <map>

#include "eitcool/ode.hpp"
#include "eitcool/quantum.hpp"

namespace eitcool {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr int kMaxDenseNullspaceNmax = 30;  // beyond: long-time integration
constexpr int kMaxExpmVecDim = 4100;        // dim^2 cap for the dense propagator

struct System {
    MatrixXcd h;
    MatrixXcd h_eff;  // h - i/2 sum L†L
    std::vector<MatrixXcd> ls;
    int dim = 0;
};

System build_system(const LambdaParams& p, const SimOptions& opts) {
    System sys;
    sys.h = build_hamiltonian(p, opts.n_max, opts.ld_order);
    sys.ls = build_jump_operators(p, opts.n_max, opts.recoil, opts.eta_emission);
    sys.dim = static_cast<int>(sys.h.rows());
    MatrixXcd damp = MatrixXcd::Zero(sys.dim, sys.dim);
    for (const auto& l : sys.ls) damp += l.adjoint() * l;
    sys.h_eff = sys.h - std::complex<double>(0.0, 0.5) * damp;
    return sys;
}

// M += (B^T kron A), i.e. the superoperator of rho -> A rho B under
// column-stacked vectorization vec(rho)[j*d + i] = rho(i, j).
void superop_add(MatrixXcd& m, const MatrixXcd& a, const MatrixXcd& b) {
    const int d = static_cast<int>(a.rows());
    for (int jp = 0; jp < d; ++jp)
        for (int jq = 0; jq < d; ++jq) {
            const std::complex<double> c = b(jq, jp);
            if (c == 0.0) continue;
            m.block(jp * d, jq * d, d, d) += c * a;
        }
}

MatrixXcd dense_liouvillian(const System& sys) {
    const int d = sys.dim;
    const MatrixXcd identity = MatrixXcd::Identity(d, d);
    MatrixXcd m = MatrixXcd::Zero(d * d, d * d);
    superop_add(m, std::complex<double>(0.0, -1.0) * sys.h_eff, identity);
    superop_add(m, identity, std::complex<double>(0.0, 1.0) * sys.h_eff.adjoint());
    for (const auto& l : sys.ls) superop_add(m, l, l.adjoint());
    return m;
}

// d rho / dt in matrix form, for the adaptive fallback path.
void master_rhs(const System& sys, const MatrixXcd& rho, MatrixXcd& out) {
    out.noalias() = std::complex<double>(0.0, -1.0) * (sys.h_eff * rho);
    out.noalias() += std::complex<double>(0.0, 1.0) * (rho * sys.h_eff.adjoint());
    for (const auto& l : sys.ls) out.noalias() += l * (rho * l.adjoint());
}

bool motional_coupling_present(const LambdaParams& p, const SimOptions& opts) {
    const double eta_em = opts.eta_emission < 0.0 ? p.eta : opts.eta_emission;
    return p.eta_g != 0.0 || p.eta_r != 0.0 ||
           (opts.recoil != RecoilModel::none && eta_em != 0.0 && p.alpha > 0.0);
}

void record_point(const DensityOperator& rho, double t, MasterResult& res,
                  double tail_limit) {
    res.t.push_back(t);
    res.n_mean.push_back(rho.mean_n());
    res.pops.push_back(rho.internal_populations());
    res.max_trace_error =
        std::max(res.max_trace_error, std::abs(rho.trace_real() - 1.0));
    const double tail = rho.fock_populations().tail_mass();
    res.max_tail_mass = std::max(res.max_tail_mass, tail);
    if (tail > tail_limit)
        throw TruncationError(
            "population reached the Fock-space boundary (top-two mass " +
            std::to_string(tail) + "); increase n_max");
}

}  // namespace

MasterResult evolve_master(const LambdaParams& p, const DensityOperator& rho0,
                           std::span<const double> t_grid, const SimOptions& opts) {
    if (rho0.n_max != opts.n_max)
        throw InvalidParameter("rho0", "n_max mismatch with simulation options");
    rho0.check();
    if (t_grid.empty()) throw InvalidParameter("t_grid", "must not be empty");
    if (t_grid[0] < 0.0) throw InvalidParameter("t_grid", "times must be >= 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1])
            throw InvalidParameter("t_grid", "must be strictly increasing");

    const System sys = build_system(p, opts);
    const double tail_limit =
        std::max(opts.tail_tol, 2.0 * rho0.fock_populations().tail_mass());

    MasterResult res;
    DensityOperator rho = rho0;

    // Distinct segment lengths on the grid (evolution starts at t = 0).
    std::vector<double> segments;
    segments.reserve(t_grid.size());
    double prev = 0.0;
    for (double t : t_grid) {
        segments.push_back(t - prev);
        prev = t;
    }

    const int vec_dim = sys.dim * sys.dim;
    if (vec_dim <= kMaxExpmVecDim) {
        // Exact propagation of the linear system: one matrix exponential per
        // distinct segment length, then cheap matrix-vector applications.
        const MatrixXcd liou = dense_liouvillian(sys);
        std::map<long long, MatrixXcd> props;
        const auto key_of = [](double dt) {
            return static_cast<long long>(std::llround(dt * 1e9));
        };
        for (double dt : segments)
            if (dt > 0.0 && !props.count(key_of(dt)))
                props.emplace(key_of(dt), (liou * dt).exp());

        VectorXcd v = Eigen::Map<const VectorXcd>(rho.matrix.data(), vec_dim);
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            if (segments[i] > 0.0) v = props.at(key_of(segments[i])) * v;
            rho.matrix = Eigen::Map<const MatrixXcd>(v.data(), sys.dim, sys.dim);
            record_point(rho, t_grid[i], res, tail_limit);
        }
    } else {
        Rk45Options ode;
        ode.rtol = 1e-9;
        ode.atol = 1e-12;
        double t = 0.0;
        MatrixXcd m = rho.matrix;
        auto rhs = [&sys](double, const MatrixXcd& y, MatrixXcd& dy) {
            master_rhs(sys, y, dy);
        };
        for (double t_target : t_grid) {
            rk45_advance(rhs, t, m, t_target, ode);
            rho.matrix = m;
            record_point(rho, t_target, res, tail_limit);
        }
    }

    rho.matrix = 0.5 * (rho.matrix + rho.matrix.adjoint()).eval();
    res.final_rho = rho;
    res.final_pn = rho.fock_populations();
    const double total = res.final_pn.total();
    if (total > 0.0)
        for (double& v : res.final_pn.p) v /= total;
    return res;
}

DensityOperator steady_state_master(const LambdaParams& p, const SimOptions& opts) {
    if (p.omega_g == 0.0)
        throw DegenerateSteadyState(
            "omega_g == 0: every |g,n> is stationary; no unique steady state");
    if (!motional_coupling_present(p, opts))
        throw DegenerateSteadyState(
            "motion decoupled (all Lamb-Dicke parameters vanish); the motional "
            "state is conserved and the steady state is not unique");

    const System sys = build_system(p, opts);
    const int d = sys.dim;

    if (opts.n_max > kMaxDenseNullspaceNmax) {
        // Long-time relaxation instead of a dense null-space solve.
        DensityOperator rho = DensityOperator::thermal_g(1.0, opts.n_max);
        double horizon = 50.0 / p.gamma;
        double n_prev = rho.mean_n();
        for (int chunk = 0; chunk < 40; ++chunk) {
            const double grid[1] = {horizon};
            MasterResult r = evolve_master(p, rho, grid, opts);
            rho = r.final_rho;
            const double n_now = rho.mean_n();
            if (std::abs(n_now - n_prev) < 1e-8 * std::max(1.0, std::abs(n_now)))
                return rho;
            n_prev = n_now;
            horizon *= 2.0;
        }
        throw DivergenceError("steady-state relaxation did not settle");
    }

    const MatrixXcd liou = dense_liouvillian(sys);

    const auto solve_with_trace_row = [&](int diag_index) {
        MatrixXcd m = liou;
        const int row = diag_index * d + diag_index;
        m.row(row).setZero();
        for (int i = 0; i < d; ++i) m(row, i * d + i) = 1.0;
        VectorXcd b = VectorXcd::Zero(d * d);
        b[row] = 1.0;
        return VectorXcd(m.partialPivLu().solve(b));
    };

    const VectorXcd x1 = solve_with_trace_row(0);
    const VectorXcd x2 = solve_with_trace_row(d - 1);

    const double residual = (liou * x1).cwiseAbs().maxCoeff();
    const double mismatch = (x1 - x2).cwiseAbs().maxCoeff();
    if (!x1.allFinite() || !x2.allFinite() || residual > 1e-8 || mismatch > 1e-6)
        throw DegenerateSteadyState(
            "Liouvillian null space is not one-dimensional (residual " +
            std::to_string(residual) + ", solver mismatch " + std::to_string(mismatch) +
            ")");

    DensityOperator rho;
    rho.n_max = opts.n_max;
    rho.matrix = Eigen::Map<const MatrixXcd>(x1.data(), d, d);
    rho.matrix = 0.5 * (rho.matrix + rho.matrix.adjoint()).eval();
    rho.matrix /= rho.trace_real();
    rho.check(1e-9, 1e-9, -1e-8);
    return rho;
}

}  // namespace eitcool
