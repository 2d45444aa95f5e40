// rate_model.hpp — Lamb-Dicke-regime rate-equation layer: heating/cooling
// coefficients of the birth-death equation for the vibrational populations
// P(n), its closed-form steady state and time dependence, and the comparison
// against conventional two-level sideband cooling.

#pragma once

#include <span>
#include <vector>

#include "eitcool/params.hpp"

namespace eitcool {

struct RateCoefficients {
    double a_plus = 0.0;   // heating coefficient A+ (rate units)
    double a_minus = 0.0;  // cooling coefficient A-; cooling requires a_minus > a_plus
};

// A+- = (omega_g^2/gamma) * gamma^2 nu^2 / (gamma^2 nu^2 + 4 [omega_r^2/4 - nu(nu -+ delta)]^2)
// Valid for delta_g == delta_r (enforced); delta := delta_g.
RateCoefficients rate_coefficients(const LambdaParams& p);

// Steady-state mean vibrational number
//   [gamma^2 nu^2 + 4 (omega_r^2/4 - nu(nu+delta))^2] / [4 delta nu (omega_r^2 - 4 nu^2)]
// equal to a_plus / (a_minus - a_plus). Throws DivergenceError at the poles
// (delta == 0 or omega_r == 2 nu) and in heating regimes (negative value).
double steady_state_mean_n(const LambdaParams& p);

// W = eta^2 (a_minus - a_plus); negative means net heating (reported, not an error).
double cooling_rate(const LambdaParams& p);

// <n>(t) = n_s + (n0 - n_s) exp(-W t), the closed-form first moment.
double mean_n_closed_form(const LambdaParams& p, double n0, double t);

// Normalized occupation probabilities of the Fock levels 0..n_max.
struct PopulationDistribution {
    std::vector<double> p;

    int n_max() const { return static_cast<int>(p.size()) - 1; }
    double total() const;
    double mean_n() const;
    double tail_mass() const;  // occupation of the top two levels
    void normalize();

    static PopulationDistribution thermal(double n_bar, int n_max);
    static PopulationDistribution fock(int n, int n_max);
};

struct EvolveOptions {
    double tail_tol = 1e-6;  // tolerated top-two-level mass
    int max_doublings = 4;   // grow n_max up to 2^max_doublings before giving up
    double rtol = 1e-9;      // integrator relative tolerance
    double atol = 1e-12;
};

// Integrates dP(n)/dt = eta^2 [A-((n+1)P(n+1) - nP(n)) + A+(nP(n-1) - (n+1)P(n))]
// with reflecting truncation, returning the distribution at each requested
// time. Injected coefficients, for studies decoupled from the parameter set.
// The truncation is doubled automatically while the tail tolerance is
// violated; a TruncationError is thrown if the cap is reached.
std::vector<PopulationDistribution> evolve_birth_death(const RateCoefficients& coeffs,
                                                       double eta,
                                                       const PopulationDistribution& p0,
                                                       std::span<const double> t_grid,
                                                       const EvolveOptions& opts = {});

// Same, with coefficients taken from the parameter set.
std::vector<PopulationDistribution> evolve_populations(const LambdaParams& p,
                                                       const PopulationDistribution& p0,
                                                       std::span<const double> t_grid,
                                                       const EvolveOptions& opts = {});

// Detailed-balance steady state P(n) proportional to (A+/A-)^n on the
// truncated space. Throws DivergenceError when a_minus <= a_plus.
PopulationDistribution steady_state_distribution(const RateCoefficients& coeffs, int n_max);
PopulationDistribution steady_state_distribution(const LambdaParams& p, int n_max);

// Sideband-cooling coefficients on a transition of linewidth gamma_sc driven
// at omega_sc, with the beam at angle phi to the motional axis:
//   A+-_SC = A+- + (omega_sc^2/gamma_sc) (alpha/cos^2 phi) gamma_sc^2/(gamma_sc^2 + 4 nu^2)
// The matched-saturation convention (omega_sc/gamma_sc)^2 = omega_g^2/(gamma*gamma')
// ties omega_sc to an EIT parameter set; see sc_matched().
RateCoefficients sc_rate_coefficients(const LambdaParams& p, double gamma_sc,
                                      double omega_sc, double phi, double alpha);

struct ScMatched {
    double gamma_sc = 0.0;  // gamma' = gamma*nu/delta of the narrow resonance
    double omega_sc = 0.0;  // matched-saturation Rabi frequency
};
ScMatched sc_matched(const LambdaParams& p);

// Steady-state ratio <n_S>_EIT / <n_S>_SC = 1 / (1 + 4 alpha / cos^2 phi),
// valid in the gamma_sc << nu regime. Throws DivergenceError at cos phi == 0.
double eit_vs_sc_ratio(double alpha, double phi);

}  // namespace eitcool
