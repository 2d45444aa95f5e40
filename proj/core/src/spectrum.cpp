#include "eitcool/spectrum.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace eitcool {

namespace {

using Eigen::Matrix3cd;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Vec9 = Eigen::Matrix<double, 9, 1>;

constexpr int G = 0, R = 1, E = 2;
const std::complex<double> kI(0.0, 1.0);

// Right-hand side of the optical Bloch equations for the internal state.
Matrix3cd liouville_apply(const LambdaParams& p, double delta_g, const Matrix3cd& rho) {
    Matrix3cd h = Matrix3cd::Zero();
    h(E, E) = -delta_g;
    h(R, R) = -(delta_g - p.delta_r);
    h(E, G) = p.omega_g / 2.0;
    h(G, E) = p.omega_g / 2.0;
    h(E, R) = p.omega_r / 2.0;
    h(R, E) = p.omega_r / 2.0;

    Matrix3cd out = -kI * (h * rho - rho * h);
    const std::complex<double> pee = rho(E, E);
    for (auto [c, rate] : {std::pair{G, p.gamma_g}, std::pair{R, p.gamma_r}}) {
        out(c, c) += rate * pee;
        out.row(E) -= 0.5 * rate * rho.row(E);
        out.col(E) -= 0.5 * rate * rho.col(E);
    }
    return out;
}

// Real coordinates: populations, then Re/Im of rho_ge, rho_re, rho_gr.
Vec9 coords(const Matrix3cd& rho) {
    Vec9 c;
    c << rho(G, G).real(), rho(R, R).real(), rho(E, E).real(), rho(G, E).real(),
        rho(G, E).imag(), rho(R, E).real(), rho(R, E).imag(), rho(G, R).real(),
        rho(G, R).imag();
    return c;
}

Matrix3cd basis_matrix(int k) {
    Matrix3cd b = Matrix3cd::Zero();
    switch (k) {
        case 0: b(G, G) = 1.0; break;
        case 1: b(R, R) = 1.0; break;
        case 2: b(E, E) = 1.0; break;
        case 3: b(G, E) = 1.0; b(E, G) = 1.0; break;
        case 4: b(G, E) = kI;  b(E, G) = -kI; break;
        case 5: b(R, E) = 1.0; b(E, R) = 1.0; break;
        case 6: b(R, E) = kI;  b(E, R) = -kI; break;
        case 7: b(G, R) = 1.0; b(R, G) = 1.0; break;
        case 8: b(G, R) = kI;  b(R, G) = -kI; break;
    }
    return b;
}

Mat9 bloch_matrix(const LambdaParams& p, double delta_g) {
    Mat9 m;
    for (int k = 0; k < 9; ++k) m.col(k) = coords(liouville_apply(p, delta_g, basis_matrix(k)));
    return m;
}

SpectrumPoint pack(const LambdaParams& p, double delta_g, const Vec9& x, bool degenerate) {
    SpectrumPoint pt;
    pt.delta_g = delta_g;
    pt.rho_gg = x[0];
    pt.rho_rr = x[1];
    pt.rho_ee = x[2];
    pt.scatter_rate = p.gamma * x[2];
    pt.degenerate = degenerate;
    return pt;
}

// Two-level reduction used when |r> is fully decoupled (omega_r == 0 and
// gamma_r == 0); the three-level solve is singular there. The g-e sector is
// closed, so its equations are the corresponding subblock of the full matrix.
SpectrumPoint two_level_steady_state(const LambdaParams& p, double delta_g) {
    const Mat9 m9 = bloch_matrix(p, delta_g);
    const int idx[4] = {0, 2, 3, 4};  // rho_gg, rho_ee, Re(rho_ge), Im(rho_ge)
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = m9(idx[i], idx[j]);
    m.row(0) << 1.0, 1.0, 0.0, 0.0;  // trace replaces the redundant row
    Eigen::Vector4d b(1.0, 0.0, 0.0, 0.0);
    Eigen::Vector4d x = m.partialPivLu().solve(b);
    Vec9 full = Vec9::Zero();
    for (int i = 0; i < 4; ++i) full[idx[i]] = x[i];
    return pack(p, delta_g, full, false);
}

}  // namespace

SpectrumPoint bloch_steady_state(const LambdaParams& p,
                                 std::optional<double> delta_g_override) {
    if (p.gamma_g <= 0.0 && p.gamma_r <= 0.0)
        throw InvalidParameter("gamma_g", "at least one decay channel must be > 0");
    if (p.omega_g <= 0.0 && p.omega_r <= 0.0)
        throw InvalidParameter("omega_g", "at least one Rabi frequency must be > 0");

    const double delta_g = delta_g_override.value_or(p.delta_g);
    if (p.omega_r == 0.0 && p.gamma_r == 0.0) return two_level_steady_state(p, delta_g);

    if (p.omega_g == 0.0 && p.gamma_g == 0.0) {
        // |g> fully decoupled: |g><g| and the driven r-e sector each carry a
        // stationary state. Report the dark state with the degeneracy flag.
        Vec9 dark = Vec9::Zero();
        dark[0] = 1.0;
        return pack(p, delta_g, dark, true);
    }

    const Mat9 m0 = bloch_matrix(p, delta_g);
    Mat9 m = m0;
    m.row(2).setZero();
    m(2, 0) = m(2, 1) = m(2, 2) = 1.0;  // trace constraint
    Vec9 b = Vec9::Zero();
    b[2] = 1.0;
    Vec9 x = m.partialPivLu().solve(b);

    const double residual = (m0 * x).cwiseAbs().maxCoeff();
    const bool bad = !x.allFinite() || residual > 1e-8 * std::max(1.0, x.cwiseAbs().maxCoeff());
    if (bad) {
        // Singular beyond the trace degeneracy: report the dark state of the
        // two-photon-resonant manifold (reduces to |g> when omega_g == 0).
        const double norm = std::hypot(p.omega_g, p.omega_r);
        Vec9 dark = Vec9::Zero();
        const double cg = p.omega_r / norm, cr = -p.omega_g / norm;
        dark[0] = cg * cg;
        dark[1] = cr * cr;
        dark[7] = cg * cr;
        return pack(p, delta_g, dark, true);
    }
    return pack(p, delta_g, x, false);
}

std::vector<SpectrumPoint> spectrum_scan(const LambdaParams& p, double lo, double hi,
                                         int n_points) {
    if (n_points < 2) throw InvalidParameter("n_points", "must be >= 2");
    if (hi < lo) throw InvalidParameter("delta_g_range", "upper bound below lower bound");
    std::vector<SpectrumPoint> out(static_cast<std::size_t>(n_points));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_points; ++i) {
        const double d = lo + (hi - lo) * static_cast<double>(i) / (n_points - 1);
        out[static_cast<std::size_t>(i)] = bloch_steady_state(p, d);
    }
    return out;
}

SidebandWeights sideband_weights(const LambdaParams& p) {
    if (std::abs(p.delta_g - p.delta_r) > 1e-12 * std::max(1.0, std::abs(p.delta_r)))
        throw InvalidParameter("delta_g", "sideband weights require delta_g == delta_r");

    const auto rate_at = [&](double d) { return bloch_steady_state(p, d).scatter_rate; };

    // Locate the narrow-peak maximum: coarse scan around the dressed-state
    // position, then golden-section refinement in the best bracket.
    const DressedStateInfo ds = dressed_states(p);
    const double center = ds.narrow_position;
    const double half_width = std::max(5.0 * ds.narrow_width, 0.5 * ds.delta_shift);
    const int n_coarse = 256;
    double best_x = center, best_f = -1.0;
    for (int i = 0; i <= n_coarse; ++i) {
        const double x = center - half_width + 2.0 * half_width * i / n_coarse;
        const double f = rate_at(x);
        if (f > best_f) {
            best_f = f;
            best_x = x;
        }
    }
    const double step = 2.0 * half_width / n_coarse;
    double a = best_x - step, bnd = best_x + step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = bnd - inv_phi * (bnd - a);
    double d = a + inv_phi * (bnd - a);
    double fc = rate_at(c), fd = rate_at(d);
    for (int it = 0; it < 60 && bnd - a > 1e-12 * std::max(1.0, std::abs(bnd)); ++it) {
        if (fc > fd) {
            bnd = d;
            d = c;
            fd = fc;
            c = bnd - inv_phi * (bnd - a);
            fc = rate_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (bnd - a);
            fd = rate_at(d);
        }
    }
    const double peak = std::max({best_f, fc, fd});

    SidebandWeights w;
    w.narrow_peak_rate = peak;
    w.carrier = rate_at(p.delta_g) / peak;
    w.red = rate_at(p.delta_g + p.nu) / peak;
    w.blue = rate_at(p.delta_g - p.nu) / peak;
    return w;
}

}  // namespace eitcool
