#pragma once

// Embedded Dormand-Prince 5(4) stepping for the third-order scalar ODEs of
// the inner problems, written as first-order systems y = (H, H', H'').

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>

#include "thinfilm/errors.hpp"

namespace thinfilm::ode {

using State = std::array<double, 3>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-13;
    double initial_step = 0.0;  // 0: pick from the interval length
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 5'000'000;
};

struct Outcome {
    double x = 0.0;
    State y{};
    bool stopped = false;  // observer requested a stop
    long steps = 0;
};

// Integrates y' = f(x, y) from x0 towards x1 (x1 > x0). `observe(x, y)` is
// called after every accepted step and may return false to stop early.
template <class Rhs, class Observer>
Outcome integrate(Rhs&& f, double x0, State y0, double x1, Observer&& observe,
                  const Options& opt = {}) {
    // Dormand-Prince tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto axpy = [](const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
        State r = y;
        for (auto [w, k] : terms)
            for (int i = 0; i < 3; ++i)
                r[i] += h * w * (*k)[i];
        return r;
    };
    auto finite = [](const State& s) {
        return std::isfinite(s[0]) && std::isfinite(s[1]) && std::isfinite(s[2]);
    };

    Outcome out{x0, y0, false, 0};
    double x = x0;
    State y = y0;
    double h = opt.initial_step > 0.0 ? opt.initial_step : 1e-3 * (x1 - x0);
    const double h_floor = 64.0 * std::numeric_limits<double>::epsilon();
    State k1 = f(x, y);

    while (x < x1) {
        if (out.steps >= opt.max_steps)
            throw IntegrationError("ode: step budget exhausted");
        h = std::min({h, x1 - x, opt.max_step});
        if (h <= h_floor * std::max(std::abs(x), std::numeric_limits<double>::min()))
            throw IntegrationError("ode: step size underflow at x = " + std::to_string(x));

        const State k2 = f(x + c2 * h, axpy(y, h, {{a21, &k1}}));
        const State k3 = f(x + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const State k4 = f(x + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 = f(x + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 = f(x + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State yn = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State k7 = f(x + h, yn);

        double err = 0.0;
        bool ok = finite(yn) && finite(k7);
        if (ok) {
            for (int i = 0; i < 3; ++i) {
                const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                       e6 * k6[i] + e7 * k7[i]);
                const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
                err = std::max(err, std::abs(ei) / sc);
            }
        }
        if (!ok || err > 1.0) {
            h *= ok ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
            continue;
        }
        x += h;
        y = yn;
        k1 = k7;
        ++out.steps;
        out.x = x;
        out.y = y;
        if (!observe(x, y)) {
            out.stopped = true;
            return out;
        }
        h *= err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    }
    return out;
}

}  // namespace thinfilm::ode
