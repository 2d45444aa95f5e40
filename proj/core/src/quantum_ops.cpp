#include <Eigen/Eigenvalues>
#include <cmath>

#include "eitcool/quantum.hpp"

namespace eitcool {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

// Position-like operator a + a† on the truncated Fock space.
MatrixXd x_operator(int n_max) {
    MatrixXd x = MatrixXd::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n < n_max; ++n) {
        const double v = std::sqrt(static_cast<double>(n + 1));
        x(n, n + 1) = v;
        x(n + 1, n) = v;
    }
    return x;
}

// exp(i eta (a+a†)) expanded to the requested order, or exactly via the
// spectral decomposition of the truncated generator (exactly unitary).
MatrixXcd displacement(double eta, int n_max, LdOrder order) {
    const int dim = n_max + 1;
    if (eta == 0.0) return MatrixXcd::Identity(dim, dim);
    const MatrixXd x = x_operator(n_max);
    switch (order) {
        case LdOrder::first:
            return MatrixXcd::Identity(dim, dim) + std::complex<double>(0.0, eta) * x;
        case LdOrder::second:
            return MatrixXcd::Identity(dim, dim) + std::complex<double>(0.0, eta) * x -
                   (eta * eta / 2.0) * (x * x);
        case LdOrder::exact: {
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(x);
            const VectorXcd phases =
                (std::complex<double>(0.0, eta) * es.eigenvalues().cast<std::complex<double>>())
                    .array()
                    .exp();
            return es.eigenvectors().cast<std::complex<double>>() * phases.asDiagonal() *
                   es.eigenvectors().transpose().cast<std::complex<double>>();
        }
    }
    throw InvalidParameter("ld_order", "unknown expansion order");
}

// |a><b| on the internal space, as a 3x3 matrix.
Eigen::Matrix3cd internal_proj(int a, int b) {
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(a, b) = 1.0;
    return m;
}

MatrixXcd kron(const Eigen::Matrix3cd& s, const MatrixXcd& f) {
    const int d = static_cast<int>(f.rows());
    MatrixXcd out = MatrixXcd::Zero(3 * d, 3 * d);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (s(i, j) != 0.0) out.block(i * d, j * d, d, d) = s(i, j) * f;
    return out;
}

}  // namespace

double QuantumState::mean_n() const {
    const int d = n_max + 1;
    double acc = 0.0;
    for (int s = 0; s < 3; ++s)
        for (int n = 1; n < d; ++n) acc += n * std::norm(amplitudes[s * d + n]);
    return acc;
}

QuantumState QuantumState::basis(int internal, int n, int n_max) {
    if (internal < 0 || internal > 2) throw InvalidParameter("internal", "must be 0..2");
    if (n < 0 || n > n_max) throw InvalidParameter("n", "must lie in [0, n_max]");
    QuantumState psi;
    psi.n_max = n_max;
    psi.amplitudes = VectorXcd::Zero(3 * (n_max + 1));
    psi.amplitudes[internal * (n_max + 1) + n] = 1.0;
    return psi;
}

double DensityOperator::mean_n() const {
    const int d = n_max + 1;
    double acc = 0.0;
    for (int s = 0; s < 3; ++s)
        for (int n = 1; n < d; ++n) acc += n * matrix(s * d + n, s * d + n).real();
    return acc;
}

std::array<double, 3> DensityOperator::internal_populations() const {
    const int d = n_max + 1;
    std::array<double, 3> pops{};
    for (int s = 0; s < 3; ++s)
        for (int n = 0; n < d; ++n) pops[s] += matrix(s * d + n, s * d + n).real();
    return pops;
}

PopulationDistribution DensityOperator::fock_populations() const {
    const int d = n_max + 1;
    PopulationDistribution pn;
    pn.p.assign(static_cast<std::size_t>(d), 0.0);
    for (int n = 0; n < d; ++n)
        for (int s = 0; s < 3; ++s)
            pn.p[static_cast<std::size_t>(n)] += matrix(s * d + n, s * d + n).real();
    return pn;
}

void DensityOperator::check(double herm_tol, double trace_tol, double min_eig) const {
    const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm > herm_tol)
        throw InvalidParameter("rho", "not Hermitian within tolerance");
    if (std::abs(trace_real() - 1.0) > trace_tol)
        throw InvalidParameter("rho", "trace differs from 1 beyond tolerance");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (matrix + matrix.adjoint()),
                                                Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < min_eig)
        throw InvalidParameter("rho", "negative eigenvalue beyond tolerance");
}

DensityOperator DensityOperator::pure(const QuantumState& psi) {
    DensityOperator rho;
    rho.n_max = psi.n_max;
    rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
    return rho;
}

DensityOperator DensityOperator::thermal_g(double n_bar, int n_max) {
    const PopulationDistribution pth = PopulationDistribution::thermal(n_bar, n_max);
    DensityOperator rho;
    rho.n_max = n_max;
    rho.matrix = MatrixXcd::Zero(3 * (n_max + 1), 3 * (n_max + 1));
    for (int n = 0; n <= n_max; ++n)
        rho.matrix(kInternalG * (n_max + 1) + n, kInternalG * (n_max + 1) + n) =
            pth.p[static_cast<std::size_t>(n)];
    return rho;
}

Eigen::MatrixXcd build_hamiltonian(const LambdaParams& p, int n_max, LdOrder ld_order) {
    if (n_max < 1) throw InvalidParameter("n_max", "must be >= 1");
    const int d = n_max + 1;

    MatrixXcd number = MatrixXcd::Zero(d, d);
    for (int n = 0; n <= n_max; ++n) number(n, n) = static_cast<double>(n);

    const MatrixXcd identity = MatrixXcd::Identity(d, d);
    MatrixXcd h = kron(Eigen::Matrix3cd::Identity(), p.nu * number);
    h += kron(-p.delta_g * internal_proj(kInternalE, kInternalE) -
                  (p.delta_g - p.delta_r) * internal_proj(kInternalR, kInternalR),
              identity);

    const MatrixXcd coupling =
        kron(internal_proj(kInternalE, kInternalG),
             (p.omega_g / 2.0) * displacement(p.eta_g, n_max, ld_order)) +
        kron(internal_proj(kInternalE, kInternalR),
             (p.omega_r / 2.0) * displacement(p.eta_r, n_max, ld_order));
    h += coupling + coupling.adjoint();
    return h;
}

std::vector<Eigen::MatrixXcd> build_jump_operators(const LambdaParams& p, int n_max,
                                                   RecoilModel recoil,
                                                   double eta_emission) {
    if (n_max < 1) throw InvalidParameter("n_max", "must be >= 1");
    if (std::abs(p.gamma_g + p.gamma_r - p.gamma) > 1e-12 * p.gamma)
        throw InvalidParameter("gamma_g", "gamma_g + gamma_r must equal gamma");
    const int d = n_max + 1;
    const MatrixXcd identity = MatrixXcd::Identity(d, d);
    const double eta_em = eta_emission < 0.0 ? p.eta : eta_emission;

    std::vector<MatrixXcd> ls;
    for (auto [c, rate] :
         {std::pair{kInternalG, p.gamma_g}, std::pair{kInternalR, p.gamma_r}}) {
        if (rate == 0.0) continue;
        const Eigen::Matrix3cd drop = internal_proj(c, kInternalE);
        if (recoil == RecoilModel::none) {
            ls.push_back(kron(std::sqrt(rate) * drop, identity));
            continue;
        }
        const LdOrder order =
            recoil == RecoilModel::exact ? LdOrder::exact : LdOrder::second;
        ls.push_back(kron(std::sqrt(rate * (1.0 - p.alpha)) * drop, identity));
        if (p.alpha > 0.0) {
            ls.push_back(kron(std::sqrt(rate * p.alpha / 2.0) * drop,
                              displacement(+eta_em, n_max, order)));
            ls.push_back(kron(std::sqrt(rate * p.alpha / 2.0) * drop,
                              displacement(-eta_em, n_max, order)));
        }
    }

    // Completeness guard: sum L†L must equal gamma*sigma_ee up to O(eta^4)
    // on the low-lying Fock block (the expansion is only trusted there).
    MatrixXcd residual = MatrixXcd::Zero(3 * d, 3 * d);
    for (const auto& l : ls) residual += l.adjoint() * l;
    residual -= kron(p.gamma * internal_proj(kInternalE, kInternalE), identity);
    const int cut = std::min(2, n_max);
    double worst = 0.0;
    for (int s = 0; s < 3; ++s)
        for (int sp = 0; sp < 3; ++sp)
            for (int n = 0; n <= cut; ++n)
                for (int m = 0; m <= cut; ++m)
                    worst = std::max(worst, std::abs(residual(s * d + n, sp * d + m)));
    if (worst > 3e-2 * p.gamma)
        throw InvalidParameter("recoil_model",
                               "jump operators violate decay-rate completeness; "
                               "eta too large for the second-order recoil model");
    return ls;
}

}  // namespace eitcool
