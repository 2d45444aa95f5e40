// oracles.hpp — Independent reference computations used by the tests. These
// deliberately avoid the library's own code paths: the Bloch evolution here
// is a hand-rolled fixed-step RK4 on the 3x3 master equation, and analytic
// formulas are written out directly.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace oracles {

// Relative difference with a floor; used where the contract is relative.
inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// Two-level resonance fluorescence: excited-state population in steady state.
inline double two_level_rho_ee(double delta, double omega, double gamma) {
    return (omega * omega / 4.0) /
           (delta * delta + gamma * gamma / 4.0 + omega * omega / 2.0);
}

struct BlochParams {
    double gamma = 1.0;
    double gamma_g = 0.5;
    double gamma_r = 0.5;
    double omega_g = 0.05;
    double omega_r = 1.0;
    double delta_g = 2.5;
    double delta_r = 2.5;
};

// d rho / dt of the three-level optical Bloch equations (internal only).
inline Eigen::Matrix3cd bloch_rhs(const BlochParams& p, const Eigen::Matrix3cd& rho) {
    using std::complex;
    constexpr int G = 0, R = 1, E = 2;
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(E, E) = -p.delta_g;
    h(R, R) = -(p.delta_g - p.delta_r);
    h(E, G) = h(G, E) = p.omega_g / 2.0;
    h(E, R) = h(R, E) = p.omega_r / 2.0;
    Eigen::Matrix3cd out = complex<double>(0.0, -1.0) * (h * rho - rho * h);
    const complex<double> pee = rho(E, E);
    out(G, G) += p.gamma_g * pee;
    out(R, R) += p.gamma_r * pee;
    const double g2 = (p.gamma_g + p.gamma_r) / 2.0;
    out.row(E) -= g2 * rho.row(E);
    out.col(E) -= g2 * rho.col(E);
    return out;
}

// Fixed-step RK4 integration of the Bloch equations from rho0 to time t.
inline Eigen::Matrix3cd bloch_evolve(const BlochParams& p, Eigen::Matrix3cd rho,
                                     double t, double dt = 1e-3) {
    const long steps = static_cast<long>(t / dt) + 1;
    const double h = t / static_cast<double>(steps);
    for (long i = 0; i < steps; ++i) {
        const Eigen::Matrix3cd k1 = bloch_rhs(p, rho);
        const Eigen::Matrix3cd k2 = bloch_rhs(p, rho + 0.5 * h * k1);
        const Eigen::Matrix3cd k3 = bloch_rhs(p, rho + 0.5 * h * k2);
        const Eigen::Matrix3cd k4 = bloch_rhs(p, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

// Dressed-state widths through a different algorithm than the library's
// closed form: QR eigenvalues of the non-Hermitian 2x2.
inline std::array<double, 2> dressed_widths_eig(double delta_r, double omega_r,
                                                double gamma) {
    Eigen::Matrix2cd m;
    m << 0.0, omega_r / 2.0, omega_r / 2.0,
        std::complex<double>(-delta_r, -gamma / 2.0);
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m);
    double w0 = -2.0 * es.eigenvalues()[0].imag();
    double w1 = -2.0 * es.eigenvalues()[1].imag();
    if (w0 > w1) std::swap(w0, w1);
    return {w0, w1};
}

}  // namespace oracles
