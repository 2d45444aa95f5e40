#include "eitcool/params.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace eitcool {

namespace {

constexpr double kHbar = 1.054571817e-34;  // J s

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

double ac_stark_shift(double delta_r, double omega_r) {
    if (omega_r < 0.0) throw InvalidParameter("omega_r", "must be >= 0");
    return (std::hypot(delta_r, omega_r) - std::abs(delta_r)) / 2.0;
}

DressedStateInfo dressed_states(const LambdaParams& p) {
    if (p.omega_r <= 0.0) throw InvalidParameter("omega_r", "must be > 0");

    const double delta = ac_stark_shift(p.delta_r, p.omega_r);

    // Eigenvalues of [[0, W/2], [W/2, -D - i g/2]]; widths are -2 Im(lambda).
    const std::complex<double> z(-p.delta_r, -p.gamma / 2.0);
    const std::complex<double> disc = std::sqrt(z * z + p.omega_r * p.omega_r);
    const double w1 = -2.0 * std::imag((z + disc) / 2.0);
    const double w2 = -2.0 * std::imag((z - disc) / 2.0);

    DressedStateInfo info;
    info.delta_shift = delta;
    info.narrow_position = p.delta_r + delta;
    info.broad_position = -delta;
    info.narrow_width = std::min(w1, w2);
    info.broad_width = std::max(w1, w2);
    info.narrow_width_approx =
        p.delta_r != 0.0 ? p.gamma * p.nu / std::abs(p.delta_r)
                         : std::numeric_limits<double>::quiet_NaN();
    return info;
}

double optimal_detuning(double omega_r, double nu) {
    if (nu <= 0.0) throw InvalidParameter("nu", "must be > 0");
    if (omega_r <= 2.0 * nu)
        throw DivergenceError(
            "omega_r <= 2*nu: no positive detuning places the Stark shift at nu "
            "(steady-state pole region)");
    return (omega_r * omega_r - 4.0 * nu * nu) / (4.0 * nu);
}

OptimalRabi optimal_rabi(double delta, double nu) {
    if (nu <= 0.0) throw InvalidParameter("nu", "must be > 0");
    if (delta < 0.0) throw InvalidParameter("delta", "must be >= 0");
    OptimalRabi result;
    result.omega_r = 2.0 * std::sqrt(nu * (nu + delta));
    result.at_pole = (delta == 0.0);
    return result;
}

std::vector<std::string> validate(const LambdaParams& p, double initial_n_mean) {
    if (!(p.gamma > 0.0)) throw InvalidParameter("gamma", "must be > 0");
    if (!(p.nu > 0.0)) throw InvalidParameter("nu", "must be > 0");
    if (!(p.omega_r > 0.0)) throw InvalidParameter("omega_r", "must be > 0");
    if (p.omega_g < 0.0) throw InvalidParameter("omega_g", "must be >= 0");
    if (p.eta < 0.0) throw InvalidParameter("eta", "must be >= 0");
    if (!(p.alpha > 0.0) || p.alpha > 1.0)
        throw InvalidParameter("alpha", "must be in (0, 1]");
    if (p.gamma_g < 0.0) throw InvalidParameter("gamma_g", "must be >= 0");
    if (p.gamma_r < 0.0) throw InvalidParameter("gamma_r", "must be >= 0");
    if (std::abs(p.gamma_g + p.gamma_r - p.gamma) > 1e-12 * p.gamma)
        throw InvalidParameter("gamma_g", "gamma_g + gamma_r must equal gamma");
    if (std::abs(std::abs(p.eta_g - p.eta_r) - p.eta) > 1e-12 * std::max(1.0, p.eta))
        throw InvalidParameter("eta_g", "|eta_g - eta_r| must equal eta");
    if (initial_n_mean < 0.0)
        throw InvalidParameter("initial_n_mean", "must be >= 0");

    std::vector<std::string> warnings;
    if (p.omega_g >= 0.2 * p.omega_r)
        warnings.push_back(
            "cooling laser not weak relative to coupling laser "
            "(omega_g >= 0.2*omega_r); rate-equation results unreliable");
    const double gp = dressed_states(p).narrow_width;
    if (p.omega_g >= 0.5 * std::sqrt(p.gamma * gp))
        warnings.push_back(
            "narrow dressed state saturated (omega_g >= 0.5*sqrt(gamma*gamma')); "
            "rate-equation results unreliable");
    if (p.eta * p.eta * (initial_n_mean + 1.0) >= 0.1)
        warnings.push_back(
            "outside the Lamb-Dicke regime (eta^2*(n+1) >= 0.1 at the initial "
            "mean occupation)");
    return warnings;
}

LambDickeResult lamb_dicke(const std::array<double, 3>& k_g,
                           const std::array<double, 3>& k_r, double mass, double nu,
                           const std::array<double, 3>& mode_axis) {
    if (!(mass > 0.0)) throw InvalidParameter("mass", "must be > 0");
    if (!(nu > 0.0)) throw InvalidParameter("nu", "must be > 0");
    const double axis_norm = std::sqrt(dot(mode_axis, mode_axis));
    if (axis_norm == 0.0) throw InvalidParameter("mode_axis", "must be nonzero");

    LambDickeResult result;
    result.a0 = std::sqrt(kHbar / (2.0 * mass * nu));
    result.eta_g = dot(k_g, mode_axis) / axis_norm * result.a0;
    result.eta_r = dot(k_r, mode_axis) / axis_norm * result.a0;
    result.eta = std::abs(result.eta_g - result.eta_r);
    return result;
}

}  // namespace eitcool
