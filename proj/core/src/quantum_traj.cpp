#include <Eigen/Eigenvalues>
#include <cmath>

#include "eitcool/ode.hpp"
#include "eitcool/quantum.hpp"
#include "eitcool/rng.hpp"

namespace eitcool {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// No-jump propagator exp(-i H_eff dt) for the non-Hermitian effective
// Hamiltonian. Uses the spectral decomposition when the eigenbasis is well
// conditioned (then any dt costs two matrix-vector products and jump times
// carry no step-size bias at all); falls back to adaptive integration near
// exceptional points.
class NoJumpPropagator {
  public:
    explicit NoJumpPropagator(MatrixXcd h_eff) : h_eff_(std::move(h_eff)) {
        Eigen::ComplexEigenSolver<MatrixXcd> es(h_eff_);
        if (es.info() == Eigen::Success) {
            v_ = es.eigenvectors();
            evals_ = es.eigenvalues();
            Eigen::PartialPivLU<MatrixXcd> lu(v_);
            v_inv_ = lu.solve(MatrixXcd::Identity(v_.rows(), v_.cols()));
            const double kappa = v_.norm() * v_inv_.norm();
            spectral_ = v_inv_.allFinite() && kappa < 1e8;
        }
    }

    bool spectral() const { return spectral_; }

    VectorXcd apply(const VectorXcd& psi0, double dt) const {
        if (dt == 0.0) return psi0;
        if (spectral_) {
            VectorXcd phi = v_inv_ * psi0;
            phi.array() *= (std::complex<double>(0.0, -dt) * evals_.array()).exp();
            return v_ * phi;
        }
        VectorXcd psi = psi0;
        double t = 0.0;
        Rk45Options opts;
        opts.rtol = 1e-10;
        opts.atol = 1e-13;
        auto rhs = [this](double, const VectorXcd& y, VectorXcd& dy) {
            dy.noalias() = std::complex<double>(0.0, -1.0) * (h_eff_ * y);
        };
        rk45_advance(rhs, t, psi, dt, opts);
        return psi;
    }

  private:
    MatrixXcd h_eff_;
    MatrixXcd v_, v_inv_;
    VectorXcd evals_;
    bool spectral_ = false;
};

constexpr double kJumpTimeTol = 1e-10;  // bisection window for the jump time

struct TrajectoryRecord {
    std::vector<double> n_mean;
    std::vector<std::array<double, 3>> pops;
    std::vector<double> tail;
    std::vector<double> final_pn;
    long jumps = 0;
};

}  // namespace

EnsembleResult run_trajectories(const LambdaParams& p, const InitialState& init,
                                std::span<const double> t_grid, int n_traj,
                                std::uint64_t seed, const SimOptions& opts) {
    if (n_traj < 1) throw InvalidParameter("n_traj", "must be >= 1");
    if (t_grid.empty()) throw InvalidParameter("t_grid", "must not be empty");
    if (t_grid[0] < 0.0) throw InvalidParameter("t_grid", "times must be >= 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1])
            throw InvalidParameter("t_grid", "must be strictly increasing");

    const int d_fock = opts.n_max + 1;
    const int dim = 3 * d_fock;

    const MatrixXcd h = build_hamiltonian(p, opts.n_max, opts.ld_order);
    const std::vector<MatrixXcd> ls =
        build_jump_operators(p, opts.n_max, opts.recoil, opts.eta_emission);
    MatrixXcd damp = MatrixXcd::Zero(dim, dim);
    for (const auto& l : ls) damp += l.adjoint() * l;
    const MatrixXcd h_eff = h - std::complex<double>(0.0, 0.5) * damp;
    const NoJumpPropagator prop(h_eff);

    // Initial-state machinery. A thermal initial condition samples the Fock
    // level per trajectory from the truncated thermal weights.
    const QuantumState* pure = std::get_if<QuantumState>(&init);
    std::vector<double> thermal_weights;
    double initial_tail = 0.0;
    if (pure != nullptr) {
        if (pure->n_max != opts.n_max)
            throw InvalidParameter("psi0", "n_max mismatch with simulation options");
        if (std::abs(pure->norm() - 1.0) > 1e-9)
            throw InvalidParameter("psi0", "initial state must be normalized");
        PopulationDistribution pn;
        pn.p.assign(static_cast<std::size_t>(d_fock), 0.0);
        for (int s = 0; s < 3; ++s)
            for (int n = 0; n < d_fock; ++n)
                pn.p[static_cast<std::size_t>(n)] +=
                    std::norm(pure->amplitudes[s * d_fock + n]);
        initial_tail = pn.tail_mass();
    } else {
        const auto& th = std::get<ThermalInit>(init);
        const PopulationDistribution dist =
            PopulationDistribution::thermal(th.n_bar, opts.n_max);
        thermal_weights = dist.p;
        initial_tail = dist.tail_mass();
    }
    // Allowance for the sampled initial tail: the ensemble draw puts a
    // Binomial(n_traj, initial_tail) count on the top levels, so the monitor
    // must tolerate normal sampling fluctuations on top of the mean.
    const double tail_limit =
        std::max(opts.tail_tol,
                 2.0 * initial_tail + 8.0 / static_cast<double>(n_traj));

    const std::size_t n_times = t_grid.size();
    std::vector<TrajectoryRecord> records(static_cast<std::size_t>(n_traj));

#pragma omp parallel for schedule(dynamic)
    for (int traj = 0; traj < n_traj; ++traj) {
        Rng rng = Rng::for_trajectory(seed, static_cast<std::uint64_t>(traj));
        TrajectoryRecord& rec = records[static_cast<std::size_t>(traj)];
        rec.n_mean.resize(n_times);
        rec.pops.resize(n_times);
        rec.tail.resize(n_times);

        VectorXcd psi;
        if (pure != nullptr) {
            psi = pure->amplitudes / pure->norm();
        } else {
            const int n0 = static_cast<int>(rng.discrete(thermal_weights));
            psi = VectorXcd::Zero(dim);
            psi[kInternalG * d_fock + n0] = 1.0;
        }

        double threshold = rng.uniform();
        std::vector<double> weights(ls.size());

        double t = 0.0;
        for (std::size_t k = 0; k < n_times; ++k) {
            double remaining = t_grid[k] - t;
            while (remaining > 0.0) {
                VectorXcd cand = prop.apply(psi, remaining);
                if (cand.squaredNorm() > threshold) {
                    psi.swap(cand);
                    t += remaining;
                    remaining = 0.0;
                    break;
                }
                // A jump occurred inside this segment: bisect the norm^2
                // crossing of the pre-drawn threshold.
                double lo = 0.0, hi = remaining;
                while (hi - lo > kJumpTimeTol) {
                    const double mid = 0.5 * (lo + hi);
                    if (prop.apply(psi, mid).squaredNorm() > threshold)
                        lo = mid;
                    else
                        hi = mid;
                }
                VectorXcd at_jump = prop.apply(psi, hi);
                at_jump /= at_jump.norm();
                for (std::size_t j = 0; j < ls.size(); ++j)
                    weights[j] = (ls[j] * at_jump).squaredNorm();
                const std::size_t channel = rng.discrete(weights);
                psi = ls[channel] * at_jump;
                const double nrm = psi.norm();
                if (nrm == 0.0)
                    throw DivergenceError("jump produced a null state");
                psi /= nrm;
                threshold = rng.uniform();
                t += hi;
                remaining = t_grid[k] - t;
                rec.jumps += 1;
            }

            VectorXcd unit = psi / psi.norm();
            double nbar = 0.0, tail = 0.0;
            std::array<double, 3> pops{};
            for (int s = 0; s < 3; ++s)
                for (int n = 0; n < d_fock; ++n) {
                    const double w = std::norm(unit[s * d_fock + n]);
                    pops[static_cast<std::size_t>(s)] += w;
                    nbar += n * w;
                    if (n >= d_fock - 2) tail += w;
                }
            rec.n_mean[k] = nbar;
            rec.pops[k] = pops;
            rec.tail[k] = tail;
            if (k + 1 == n_times) {
                rec.final_pn.assign(static_cast<std::size_t>(d_fock), 0.0);
                for (int s = 0; s < 3; ++s)
                    for (int n = 0; n < d_fock; ++n)
                        rec.final_pn[static_cast<std::size_t>(n)] +=
                            std::norm(unit[s * d_fock + n]);
            }
        }
    }

    // Order-independent reduction: per-trajectory records are combined in
    // index order regardless of how the loop above was scheduled.
    EnsembleResult res;
    res.t_grid.assign(t_grid.begin(), t_grid.end());
    res.n_mean.assign(n_times, 0.0);
    res.n_mean_stderr.assign(n_times, 0.0);
    res.pops.assign(n_times, {0.0, 0.0, 0.0});
    res.final_pn.p.assign(static_cast<std::size_t>(d_fock), 0.0);
    res.n_traj = n_traj;
    res.seed = seed;

    std::vector<double> tail_mean(n_times, 0.0);
    for (const auto& rec : records) {
        res.total_jumps += rec.jumps;
        for (std::size_t k = 0; k < n_times; ++k) {
            res.n_mean[k] += rec.n_mean[k];
            tail_mean[k] += rec.tail[k];
            for (int s = 0; s < 3; ++s) res.pops[k][s] += rec.pops[k][s];
        }
        for (std::size_t n = 0; n < res.final_pn.p.size(); ++n)
            res.final_pn.p[n] += rec.final_pn[n];
    }
    const double inv = 1.0 / static_cast<double>(n_traj);
    for (std::size_t k = 0; k < n_times; ++k) {
        res.n_mean[k] *= inv;
        tail_mean[k] *= inv;
        for (auto& v : res.pops[k]) v *= inv;
    }
    for (auto& v : res.final_pn.p) v *= inv;

    if (n_traj > 1) {
        for (std::size_t k = 0; k < n_times; ++k) {
            double ss = 0.0;
            for (const auto& rec : records) {
                const double dlt = rec.n_mean[k] - res.n_mean[k];
                ss += dlt * dlt;
            }
            res.n_mean_stderr[k] =
                std::sqrt(ss / (static_cast<double>(n_traj) *
                                static_cast<double>(n_traj - 1)));
        }
    }

    for (std::size_t k = 0; k < n_times; ++k)
        if (tail_mean[k] > tail_limit)
            throw TruncationError(
                "ensemble population reached the Fock-space boundary (top-two mass " +
                std::to_string(tail_mean[k]) + " at t = " + std::to_string(t_grid[k]) +
                "); increase n_max");
    return res;
}

}  // namespace eitcool
