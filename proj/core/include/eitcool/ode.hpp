// ode.hpp — Adaptive embedded Runge-Kutta integrator (Dormand-Prince 5(4))
// for dense Eigen states (real or complex vectors and matrices).

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eitcool {

struct Rk45Options {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_initial = 0.0;  // 0: choose automatically
    double h_max = 0.0;      // 0: unrestricted
    long max_steps = 100'000'000;
};

// Advances y in place from t to t_end. Rhs: void(double t, const State&, State& dydt).
template <class State, class Rhs>
void rk45_advance(Rhs&& rhs, double& t, State& y, double t_end,
                  const Rk45Options& opts = {}) {
    if (t_end == t) return;
    const double dir = t_end > t ? 1.0 : -1.0;

    State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y;
    State y_new = y, y_stage = y, err = y;

    rhs(t, y, k1);

    auto err_norm = [&](const State& e, const State& y0, const State& y1) {
        const auto scale =
            opts.atol + opts.rtol * y0.array().abs().max(y1.array().abs());
        return std::sqrt((e.array().abs() / scale).square().sum() /
                         static_cast<double>(e.size()));
    };

    double h = opts.h_initial;
    if (h <= 0.0) {
        const double d0 = std::sqrt(y.array().abs().square().sum());
        const double d1 = std::sqrt(k1.array().abs().square().sum());
        h = (d1 > 1e-300) ? 0.01 * std::max(d0, 1.0) / d1 : 1e-3;
        h = std::min(h, std::abs(t_end - t));
    }
    if (opts.h_max > 0.0) h = std::min(h, opts.h_max);

    for (long step = 0; step < opts.max_steps; ++step) {
        if (dir * (t_end - t) <= 0.0) return;
        h = std::min(h, std::abs(t_end - t));
        const double hs = dir * h;

        y_stage = y + hs * (1.0 / 5.0) * k1;
        rhs(t + hs / 5.0, y_stage, k2);
        y_stage = y + hs * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2);
        rhs(t + 3.0 * hs / 10.0, y_stage, k3);
        y_stage = y + hs * ((44.0 / 45.0) * k1 - (56.0 / 15.0) * k2 + (32.0 / 9.0) * k3);
        rhs(t + 4.0 * hs / 5.0, y_stage, k4);
        y_stage = y + hs * ((19372.0 / 6561.0) * k1 - (25360.0 / 2187.0) * k2 +
                            (64448.0 / 6561.0) * k3 - (212.0 / 729.0) * k4);
        rhs(t + 8.0 * hs / 9.0, y_stage, k5);
        y_stage = y + hs * ((9017.0 / 3168.0) * k1 - (355.0 / 33.0) * k2 +
                            (46732.0 / 5247.0) * k3 + (49.0 / 176.0) * k4 -
                            (5103.0 / 18656.0) * k5);
        rhs(t + hs, y_stage, k6);
        y_new = y + hs * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 +
                          (125.0 / 192.0) * k4 - (2187.0 / 6784.0) * k5 +
                          (11.0 / 84.0) * k6);
        rhs(t + hs, y_new, k7);
        err = hs * ((71.0 / 57600.0) * k1 - (71.0 / 16695.0) * k3 +
                    (71.0 / 1920.0) * k4 - (17253.0 / 339200.0) * k5 +
                    (22.0 / 525.0) * k6 - (1.0 / 40.0) * k7);

        const double e = err_norm(err, y, y_new);
        if (e <= 1.0) {
            t += hs;
            y.swap(y_new);
            k1.swap(k7);  // first-same-as-last
        }
        double factor = 0.9 * std::pow(std::max(e, 1e-10), -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
        if (opts.h_max > 0.0) h = std::min(h, opts.h_max);
        if (!(h > 1e-14 * std::max(1.0, std::abs(t))))
            throw std::runtime_error("rk45: step size underflow");
    }
    throw std::runtime_error("rk45: step budget exhausted");
}

}  // namespace eitcool
