#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "eitcool/quantum.hpp"

namespace eitcool {

namespace {

// Best (a, b) for model a + b*exp(-w t) at fixed w, and the resulting sum of
// squared residuals. Linear in (a, b), solved through the normal equations.
struct LinearFit {
    double a = 0.0;
    double b = 0.0;
    double sse = std::numeric_limits<double>::infinity();
    bool ok = false;
};

LinearFit linear_at(double w, std::span<const double> t, std::span<const double> y) {
    const std::size_t m = t.size();
    double s1 = static_cast<double>(m), se = 0.0, see = 0.0, sy = 0.0, sye = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = std::exp(-w * t[i]);
        se += e;
        see += e * e;
        sy += y[i];
        sye += y[i] * e;
    }
    LinearFit f;
    const double det = s1 * see - se * se;
    if (std::abs(det) < 1e-12 * s1 * std::max(see, 1e-300)) return f;
    f.a = (sy * see - sye * se) / det;
    f.b = (s1 * sye - se * sy) / det;
    f.sse = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = y[i] - (f.a + f.b * std::exp(-w * t[i]));
        f.sse += r * r;
    }
    f.ok = true;
    return f;
}

}  // namespace

FitResult fit_cooling(std::span<const double> t, std::span<const double> n_mean) {
    if (t.size() != n_mean.size())
        throw InvalidParameter("n_mean", "length mismatch with t");
    if (t.size() < 5) throw InvalidParameter("t", "need at least 5 samples");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] <= t[i - 1]) throw InvalidParameter("t", "must be strictly increasing");

    const std::size_t m = t.size();
    const double span = t[m - 1] - t[0];
    double mean = 0.0;
    for (double v : n_mean) mean += v;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double v : n_mean) var += (v - mean) * (v - mean);
    const double data_scale = std::max({std::abs(mean), std::sqrt(var / m), 1e-300});

    // Constant data short-circuit: the w = 0 branch of the model.
    FitResult res;
    if (std::sqrt(var / m) <= 1e-12 * std::max(1.0, std::abs(mean))) {
        res.w = 0.0;
        res.n_s = mean;
        res.n0 = mean;
        res.residual = std::sqrt(var / m);
        res.converged = true;
        return res;
    }

    // Coarse logarithmic scan over decay rates, then golden-section
    // refinement of the best bracket.
    const double w_lo = 1e-3 / span;
    double dt_min = span;
    for (std::size_t i = 1; i < m; ++i) dt_min = std::min(dt_min, t[i] - t[i - 1]);
    const double w_hi = 20.0 / dt_min;
    const int n_scan = 240;
    double best_w = w_lo, best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n_scan; ++i) {
        const double w = w_lo * std::pow(w_hi / w_lo, static_cast<double>(i) / n_scan);
        const LinearFit f = linear_at(w, t, n_mean);
        if (f.ok && f.sse < best_sse) {
            best_sse = f.sse;
            best_w = w;
        }
    }
    const double ratio = std::pow(w_hi / w_lo, 1.0 / n_scan);
    double a = best_w / ratio, b = best_w * ratio;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = linear_at(c, t, n_mean).sse, fd = linear_at(d, t, n_mean).sse;
    for (int it = 0; it < 200 && (b - a) > 1e-13 * b; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = linear_at(c, t, n_mean).sse;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = linear_at(d, t, n_mean).sse;
        }
    }
    const double w_fit = 0.5 * (a + b);
    const LinearFit lf = linear_at(w_fit, t, n_mean);

    res.w = w_fit;
    res.n_s = lf.a;
    res.n0 = lf.a + lf.b;
    res.residual = std::sqrt(lf.sse / static_cast<double>(m));

    // Degenerate amplitude: data are effectively constant after all.
    if (std::abs(lf.b) <= 1e-10 * std::max(1.0, data_scale)) {
        res.w = 0.0;
        res.n_s = mean;
        res.n0 = mean;
        res.converged = true;
        return res;
    }
    // Unreliable when the window covers too little decay or the residual is
    // a large fraction of the data variation.
    const bool enough_efoldings = w_fit * span >= 2.0;
    const bool residual_ok = res.residual <= 0.25 * std::sqrt(var / m) + 1e-9 * data_scale;
    res.converged = enough_efoldings && residual_ok;
    return res;
}

}  // namespace eitcool
