// spectrum.hpp — Steady-state internal dynamics of the driven Lambda system
// with the motion frozen out: the Fano-like absorption/scattering profile
// seen by the cooling laser and its dark-resonance zero at delta_g == delta_r.

#pragma once

#include <optional>
#include <vector>

#include "eitcool/params.hpp"

namespace eitcool {

struct SpectrumPoint {
    double delta_g = 0.0;       // cooling-laser detuning of this sample
    double scatter_rate = 0.0;  // steady-state photon scattering rate gamma*rho_ee
    double rho_ee = 0.0;
    double rho_gg = 0.0;
    double rho_rr = 0.0;
    bool degenerate = false;  // set when the stationary state is not unique
};

// Steady state of the three-level optical Bloch equations, solved as a dense
// linear system in the 9 real degrees of freedom of rho with one equation
// replaced by the trace constraint. If delta_g_override is given it replaces
// p.delta_g for this evaluation.
//
// When the Liouvillian is singular beyond the trace degeneracy (e.g.
// omega_g == 0 and gamma_g == 0: decoupled dark manifold) the dark-state
// solution is returned with `degenerate` set.
SpectrumPoint bloch_steady_state(const LambdaParams& p,
                                 std::optional<double> delta_g_override = {});

// Uniform scan of bloch_steady_state over delta_g in [lo, hi]; output ordered
// by delta_g. Requires n_points >= 2.
std::vector<SpectrumPoint> spectrum_scan(const LambdaParams& p, double lo, double hi,
                                         int n_points);

// Scattering rates at the carrier and sideband detunings, normalized to the
// maximum of the narrow dressed-state resonance. The red sideband
// |g,n> -> |e,n-1> takes a photon of energy lower by nu, which samples the
// profile at effective detuning delta_g + nu; the blue sideband at
// delta_g - nu.
struct SidebandWeights {
    double carrier = 0.0;
    double red = 0.0;
    double blue = 0.0;
    double narrow_peak_rate = 0.0;  // un-normalized maximum used as reference
};

// Requires delta_g == delta_r (the operating condition of the scheme).
SidebandWeights sideband_weights(const LambdaParams& p);

}  // namespace eitcool
