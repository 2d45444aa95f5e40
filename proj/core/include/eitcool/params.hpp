// params.hpp — Parameters of the driven Lambda system and the analytic
// dressed-state quantities derived from them.
//
// Level scheme: ground |g>, stable |r>, excited |e> with total linewidth
// gamma. A strong "coupling" laser drives |r>-|e> (Rabi frequency omega_r,
// detuning delta_r); a weak "cooling" laser drives |g>-|e> (omega_g,
// delta_g). The atom is trapped in a harmonic potential of frequency nu.
// All rates are expressed in units of gamma unless noted otherwise.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "eitcool/errors.hpp"

namespace eitcool {

struct LambdaParams {
    double gamma = 1.0;     // total linewidth of |e> (the rate unit)
    double gamma_g = 0.5;   // partial decay rate |e> -> |g>
    double gamma_r = 0.5;   // partial decay rate |e> -> |r>
    double omega_g = 0.05;  // cooling-laser Rabi frequency
    double omega_r = 1.0;   // coupling-laser Rabi frequency
    double delta_g = 2.5;   // cooling-laser detuning
    double delta_r = 2.5;   // coupling-laser detuning
    double nu = 0.1;        // trap frequency
    double eta = 0.145;     // effective Lamb-Dicke parameter |k_g - k_r| a0
    double eta_g = 0.145;   // signed projected Lamb-Dicke parameter, cooling beam
    double eta_r = 0.0;     // signed projected Lamb-Dicke parameter, coupling beam
    double alpha = 0.4;     // second angular moment of the dipole emission pattern
};

// Positions and widths of the two resonances of the absorption profile seen
// by the cooling laser (dressed states of atom + coupling laser). Positions
// are detunings relative to the bare |g> -> |e> resonance.
struct DressedStateInfo {
    double delta_shift;          // AC Stark shift induced by the coupling laser
    double narrow_position;      // delta_r + delta_shift
    double broad_position;       // -delta_shift
    double narrow_width;         // gamma', exact eigenvalue width
    double broad_width;          // gamma'', exact eigenvalue width
    double narrow_width_approx;  // gamma*nu/delta_r, valid when delta_shift ~ nu << delta_r
};

// AC Stark shift (sqrt(delta_r^2 + omega_r^2) - |delta_r|) / 2.
double ac_stark_shift(double delta_r, double omega_r);

// Exact dressed-state positions and widths. Widths come from the complex
// eigenvalues of the non-Hermitian 2x2 matrix
//   [[0, omega_r/2], [omega_r/2, -delta_r - i*gamma/2]]
// as -2*Im(lambda); they sum to gamma identically.
DressedStateInfo dressed_states(const LambdaParams& p);

// Unique positive detuning solving delta_shift(delta, omega_r) = nu.
// Throws DivergenceError when omega_r <= 2*nu (no positive solution; the
// steady state has a pole on that boundary).
double optimal_detuning(double omega_r, double nu);

struct OptimalRabi {
    double omega_r = 0.0;
    bool at_pole = false;  // delta == 0 gives omega_r = 2*nu, the pole value
};

// Coupling-laser Rabi frequency 2*sqrt(nu*(nu + delta)) that places the
// AC Stark shift at nu for the given detuning.
OptimalRabi optimal_rabi(double delta, double nu);

// Hard parameter violations throw InvalidParameter (message names the
// field). Returns warnings when the rate-equation validity conditions are
// not met:
//   omega_g >= 0.2 * omega_r          (cooling laser not weak)
//   omega_g >= 0.5 * sqrt(gamma*gamma')  (narrow dressed state saturated)
//   eta^2 * (initial_n_mean + 1) >= 0.1  (outside the Lamb-Dicke regime)
std::vector<std::string> validate(const LambdaParams& p, double initial_n_mean = 2.0);

struct LambDickeResult {
    double eta;    // |(k_g - k_r) . mode_axis| * a0
    double eta_g;  // signed projection (k_g . mode_axis) * a0
    double eta_r;  // signed projection (k_r . mode_axis) * a0
    double a0;     // rms ground-state size sqrt(hbar / (2 m nu)), meters
};

// SI units here only: wave vectors in rad/m, mass in kg, trap frequency in
// rad/s. mode_axis need not be normalized; it must be nonzero.
LambDickeResult lamb_dicke(const std::array<double, 3>& k_g,
                           const std::array<double, 3>& k_r, double mass, double nu,
                           const std::array<double, 3>& mode_axis);

}  // namespace eitcool
