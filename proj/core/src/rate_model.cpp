#include "eitcool/rate_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "eitcool/ode.hpp"

namespace eitcool {

namespace {

void require_common_detuning(const LambdaParams& p) {
    if (std::abs(p.delta_g - p.delta_r) > 1e-12 * std::max(1.0, std::abs(p.delta_r)))
        throw InvalidParameter("delta_g",
                               "rate coefficients are derived for delta_g == delta_r");
}

double bracket(const LambdaParams& p, double sign) {
    // omega_r^2/4 - nu*(nu + sign*delta)
    return p.omega_r * p.omega_r / 4.0 - p.nu * (p.nu + sign * p.delta_g);
}

}  // namespace

RateCoefficients rate_coefficients(const LambdaParams& p) {
    require_common_detuning(p);
    const double gn2 = p.gamma * p.gamma * p.nu * p.nu;
    const double drive = p.omega_g * p.omega_g / p.gamma;
    const double bp = bracket(p, -1.0);  // A+ carries nu*(nu - delta)
    const double bm = bracket(p, +1.0);  // A- carries nu*(nu + delta)
    RateCoefficients c;
    c.a_plus = drive * gn2 / (gn2 + 4.0 * bp * bp);
    c.a_minus = drive * gn2 / (gn2 + 4.0 * bm * bm);
    return c;
}

double steady_state_mean_n(const LambdaParams& p) {
    require_common_detuning(p);
    const double delta = p.delta_g;
    const double om2 = p.omega_r * p.omega_r, nu42 = 4.0 * p.nu * p.nu;
    // omega_r == 2*nu up to rounding of the squares is the pole itself
    const double pole_tol = 64.0 * std::numeric_limits<double>::epsilon();
    if (std::abs(om2 - nu42) <= pole_tol * std::max(om2, nu42) || delta == 0.0)
        throw DivergenceError(
            "steady state diverges: A+ equals A- (delta == 0 or omega_r == 2*nu)");
    const double denom = 4.0 * delta * p.nu * (om2 - nu42);
    if (denom < 0.0)
        throw DivergenceError("no cooling steady state: heating regime (A+ >= A-)");
    const double bm = bracket(p, +1.0);
    const double num = p.gamma * p.gamma * p.nu * p.nu + 4.0 * bm * bm;
    return num / denom;
}

double cooling_rate(const LambdaParams& p) {
    const RateCoefficients c = rate_coefficients(p);
    return p.eta * p.eta * (c.a_minus - c.a_plus);
}

double mean_n_closed_form(const LambdaParams& p, double n0, double t) {
    const double n_s = steady_state_mean_n(p);
    const double w = cooling_rate(p);
    return n_s + (n0 - n_s) * std::exp(-w * t);
}

double PopulationDistribution::total() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
}

double PopulationDistribution::mean_n() const {
    double s = 0.0;
    for (std::size_t n = 1; n < p.size(); ++n) s += static_cast<double>(n) * p[n];
    return s;
}

double PopulationDistribution::tail_mass() const {
    const std::size_t m = p.size();
    if (m < 2) return total();
    return p[m - 1] + p[m - 2];
}

void PopulationDistribution::normalize() {
    const double s = total();
    if (s <= 0.0) throw InvalidParameter("p", "cannot normalize: total mass <= 0");
    for (double& v : p) v /= s;
}

PopulationDistribution PopulationDistribution::thermal(double n_bar, int n_max) {
    if (n_bar < 0.0) throw InvalidParameter("n_bar", "must be >= 0");
    if (n_max < 0) throw InvalidParameter("n_max", "must be >= 0");
    PopulationDistribution d;
    d.p.resize(static_cast<std::size_t>(n_max) + 1);
    const double q = n_bar / (n_bar + 1.0);
    double w = 1.0;
    for (auto& v : d.p) {
        v = w;
        w *= q;
    }
    d.normalize();
    return d;
}

PopulationDistribution PopulationDistribution::fock(int n, int n_max) {
    if (n < 0 || n > n_max) throw InvalidParameter("n", "must lie in [0, n_max]");
    PopulationDistribution d;
    d.p.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    d.p[static_cast<std::size_t>(n)] = 1.0;
    return d;
}

std::vector<PopulationDistribution> evolve_birth_death(const RateCoefficients& coeffs,
                                                       double eta,
                                                       const PopulationDistribution& p0,
                                                       std::span<const double> t_grid,
                                                       const EvolveOptions& opts) {
    if (coeffs.a_plus < 0.0 || coeffs.a_minus < 0.0)
        throw InvalidParameter("coeffs", "rate coefficients must be >= 0");
    if (t_grid.empty()) throw InvalidParameter("t_grid", "must not be empty");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1])
            throw InvalidParameter("t_grid", "must be strictly increasing");
    if (std::abs(p0.total() - 1.0) > 1e-9)
        throw InvalidParameter("p0", "initial distribution must be normalized");

    const double rp = eta * eta * coeffs.a_plus;
    const double rm = eta * eta * coeffs.a_minus;

    for (int attempt = 0;; ++attempt) {
        const int n_levels = (p0.n_max() + 1) << attempt;
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n_levels);
        for (int n = 0; n <= p0.n_max(); ++n) y[n] = p0.p[static_cast<std::size_t>(n)];

        auto rhs = [&](double, const Eigen::VectorXd& v, Eigen::VectorXd& dv) {
            const int m = static_cast<int>(v.size());
            for (int n = 0; n < m; ++n) {
                double d = -(rm * n) * v[n];
                if (n + 1 < m) d += rm * (n + 1) * v[n + 1] - rp * (n + 1) * v[n];
                if (n > 0) d += rp * n * v[n - 1];
                dv[n] = d;
            }
        };

        std::vector<PopulationDistribution> out;
        out.reserve(t_grid.size());
        Rk45Options ode;
        ode.rtol = opts.rtol;
        ode.atol = opts.atol;
        double t = 0.0;
        bool tail_violated = false;
        for (double t_target : t_grid) {
            rk45_advance(rhs, t, y, t_target, ode);
            PopulationDistribution d;
            d.p.assign(y.data(), y.data() + y.size());
            if (d.tail_mass() >= opts.tail_tol) {
                tail_violated = true;
                break;
            }
            out.push_back(std::move(d));
        }
        if (!tail_violated) return out;
        if (attempt >= opts.max_doublings)
            throw TruncationError(
                "population reached the truncation boundary; increase n_max (tail "
                "tolerance " +
                std::to_string(opts.tail_tol) + " violated at " +
                std::to_string(n_levels - 1) + " levels)");
    }
}

std::vector<PopulationDistribution> evolve_populations(const LambdaParams& p,
                                                       const PopulationDistribution& p0,
                                                       std::span<const double> t_grid,
                                                       const EvolveOptions& opts) {
    return evolve_birth_death(rate_coefficients(p), p.eta, p0, t_grid, opts);
}

PopulationDistribution steady_state_distribution(const RateCoefficients& coeffs,
                                                 int n_max) {
    if (!(coeffs.a_minus > coeffs.a_plus))
        throw DivergenceError("no normalizable steady state: a_minus <= a_plus");
    if (n_max < 0) throw InvalidParameter("n_max", "must be >= 0");
    const double q = coeffs.a_plus / coeffs.a_minus;
    PopulationDistribution d;
    d.p.resize(static_cast<std::size_t>(n_max) + 1);
    double w = 1.0;
    for (auto& v : d.p) {
        v = w;
        w *= q;
    }
    d.normalize();
    return d;
}

PopulationDistribution steady_state_distribution(const LambdaParams& p, int n_max) {
    return steady_state_distribution(rate_coefficients(p), n_max);
}

RateCoefficients sc_rate_coefficients(const LambdaParams& p, double gamma_sc,
                                      double omega_sc, double phi, double alpha) {
    if (!(gamma_sc > 0.0)) throw InvalidParameter("gamma_sc", "must be > 0");
    const double c = std::cos(phi);
    if (std::abs(c) <= 1e-12)
        throw DivergenceError("cos(phi) ~ 0: beam orthogonal to the motional axis");
    const RateCoefficients base = rate_coefficients(p);
    const double carrier = (omega_sc * omega_sc / gamma_sc) * (alpha / (c * c)) *
                           gamma_sc * gamma_sc /
                           (gamma_sc * gamma_sc + 4.0 * p.nu * p.nu);
    return {base.a_plus + carrier, base.a_minus + carrier};
}

ScMatched sc_matched(const LambdaParams& p) {
    require_common_detuning(p);
    if (!(p.delta_g > 0.0))
        throw InvalidParameter("delta_g", "matched comparison needs delta > 0");
    ScMatched m;
    m.gamma_sc = p.gamma * p.nu / p.delta_g;  // narrow-resonance width gamma*nu/delta
    m.omega_sc = m.gamma_sc * p.omega_g / std::sqrt(p.gamma * m.gamma_sc);
    return m;
}

double eit_vs_sc_ratio(double alpha, double phi) {
    const double c = std::cos(phi);
    if (std::abs(c) <= 1e-12)
        throw DivergenceError("cos(phi) ~ 0: beam orthogonal to the motional axis");
    return 1.0 / (1.0 + 4.0 * alpha / (c * c));
}

}  // namespace eitcool
