#pragma once

// Parameters, lubrication scalings and the closed-form contact-line laws.
// Everything here is a pure function over validated inputs.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "thinfilm/errors.hpp"

namespace thinfilm {

enum class Wetting { complete, partial };

// Mobility m(h) = h^3 + eps^(3-n) h^n with contact slope theta at the
// contact point. eps = 0 is the no-slip model and must be asked for.
struct SlipParameters {
    double n = 2.0;
    double epsilon = 1e-3;
    double theta = 1.0;
    bool no_slip = false;

    Wetting wetting() const { return theta == 0.0 ? Wetting::complete : Wetting::partial; }

    void validate() const {
        if (!(n > 0.0 && n <= 3.0))
            throw DomainError("mobility exponent n must lie in (0,3], got " + std::to_string(n));
        if (!(epsilon >= 0.0))
            throw DomainError("slip ratio epsilon must be >= 0");
        if (epsilon == 0.0 && !no_slip)
            throw DomainError("epsilon = 0 requires the no-slip model");
        if (!(theta >= 0.0))
            throw DomainError("contact slope theta must be >= 0");
    }
};

inline double mobility(double h, const SlipParameters& p) {
    if (h < 0.0)
        throw DomainError("mobility: negative height");
    const double h3 = h * h * h;
    if (p.epsilon == 0.0)
        return h3;
    return h3 + std::pow(p.epsilon, 3.0 - p.n) * std::pow(h, p.n);
}

inline double mobility_derivative(double h, const SlipParameters& p) {
    if (h < 0.0)
        throw DomainError("mobility_derivative: negative height");
    if (p.epsilon == 0.0)
        return 3.0 * h * h;
    if (h == 0.0 && p.n < 1.0)
        throw DomainError("mobility_derivative: singular at h = 0 for n < 1");
    const double slip = h == 0.0 ? (p.n == 1.0 ? 1.0 : 0.0) : std::pow(h, p.n - 1.0);
    return 3.0 * h * h + p.n * std::pow(p.epsilon, 3.0 - p.n) * slip;
}

struct PhysicalScales {
    double gamma_LG = 1.0;
    double gamma_SL = 0.0;
    double gamma_SG = 0.5;
    double mu = 1.0;
    double sy = 0.01;
    double sx = 0.1;

    double delta() const { return sy / sx; }
    double sp() const { return gamma_LG * delta(); }
    double st() const { return gamma_LG * delta() / mu; }
};

struct LubricationScales {
    double delta;
    double sp;
    double st;
};

inline LubricationScales lubrication_scales(double gamma_LG, double mu, double sy, double sx) {
    if (!(gamma_LG > 0.0 && mu > 0.0 && sy > 0.0 && sx > 0.0))
        throw DomainError("lubrication_scales: all inputs must be positive");
    const double delta = sy / sx;
    return {delta, gamma_LG * delta, gamma_LG * delta / mu};
}

// Young's law, cos(Theta) = (gamma_SG - gamma_SL) / gamma_LG.
inline double young_angle(const PhysicalScales& s) {
    if (!(s.gamma_LG > 0.0 && s.mu > 0.0 && s.sy > 0.0 && s.sy <= s.sx))
        throw DomainError("young_angle: invalid physical scales");
    const double c = (s.gamma_SG - s.gamma_SL) / s.gamma_LG;
    if (!(c > -1.0 && c < 1.0))
        throw RegimeError("young_angle: no partial wetting, cos(Theta) = " + std::to_string(c));
    return std::acos(c);
}

inline void require_slip_regime(double epsilon, const char* who) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw RegimeError(std::string(who) + ": epsilon must lie in (0,1)");
}

// Partial wetting: sdot = theta^2 (theta - gamma) / ln(1/eps).
inline double cox_voinov_speed(double theta, double gamma_outer, double epsilon) {
    if (!(theta > 0.0))
        throw DomainError("cox_voinov_speed: theta must be positive");
    require_slip_regime(epsilon, "cox_voinov_speed");
    return theta * theta * (theta - gamma_outer) / std::log(1.0 / epsilon);
}

// Complete wetting: sdot = -gamma^3 / (3 ln(1/eps)).
inline double tanner_speed(double gamma_outer, double epsilon) {
    if (!(gamma_outer >= 0.0))
        throw DomainError("tanner_speed: gamma must be non-negative");
    require_slip_regime(epsilon, "tanner_speed");
    return -gamma_outer * gamma_outer * gamma_outer / (3.0 * std::log(1.0 / epsilon));
}

// Receding speed of the logarithmically corrected profile, 3 sdot = gamma^3.
inline double typeb_speed(double gamma) {
    if (!(gamma > 0.0))
        throw DomainError("typeb_speed: gamma must be positive");
    return gamma * gamma * gamma / 3.0;
}

// Contact slope that puts the slip problem in the receding regime with outer
// coefficient gamma: theta_eps = gamma (-ln eps)^(1/3).
inline double typeb_contact_slope(double gamma, double epsilon) {
    require_slip_regime(epsilon, "typeb_contact_slope");
    return gamma * std::cbrt(-std::log(epsilon));
}

// h = (3 sdot)^(1/3) xi (ln 1/xi)^(1/3), valid only for 0 < xi < 1.
inline double typeb_profile(double xi, double sdot) {
    if (!(xi > 0.0 && xi < 1.0))
        throw DomainError("typeb_profile: xi must lie in (0,1)");
    if (!(sdot > 0.0))
        throw DomainError("typeb_profile: sdot must be positive");
    return std::cbrt(3.0 * sdot) * xi * std::cbrt(std::log(1.0 / xi));
}

// Initial profile sampled on increasing nodes, linear in between.
struct SampledProfile {
    std::vector<double> x;
    std::vector<double> h;
};

struct TypeCState {
    double m = 0.0;
    double s = 0.0;
    SampledProfile h0;
};

namespace detail {

// Integral of the piecewise-linear interpolant from x.front() to b.
inline double cumulative_linear(const SampledProfile& p, double b) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < p.x.size(); ++i) {
        const double x0 = p.x[i], x1 = p.x[i + 1];
        if (b <= x0)
            break;
        const double hi = std::min(b, x1);
        const double slope = (p.h[i + 1] - p.h[i]) / (x1 - x0);
        const double hb = p.h[i] + slope * (hi - x0);
        acc += 0.5 * (p.h[i] + hb) * (hi - x0);
    }
    return acc;
}

}  // namespace detail

// Boundary mass m(tau) = integral of h0 from s(0) to s(tau) along a
// nondecreasing contact path.
inline std::vector<double> typec_mass(const SampledProfile& h0, std::span<const double> s_path) {
    if (h0.x.size() < 2 || h0.x.size() != h0.h.size())
        throw DomainError("typec_mass: profile needs matching x/h samples");
    for (double v : h0.h)
        if (v < 0.0)
            throw DomainError("typec_mass: negative initial height");
    std::vector<double> m;
    if (s_path.empty())
        return m;
    for (std::size_t k = 1; k < s_path.size(); ++k)
        if (s_path[k] < s_path[k - 1])
            throw DomainError("typec_mass: contact path must be nondecreasing");
    if (s_path.front() < h0.x.front() || s_path.back() > h0.x.back())
        throw DomainError("typec_mass: contact path leaves the sampled profile");
    const double base = detail::cumulative_linear(h0, s_path.front());
    m.reserve(s_path.size());
    for (double s : s_path)
        m.push_back(detail::cumulative_linear(h0, s) - base);
    return m;
}

}  // namespace thinfilm
