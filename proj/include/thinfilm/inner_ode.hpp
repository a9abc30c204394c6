#pragma once

// Boundary-layer problems near the contact point: the improper integrals of
// the first-order slip correction, the partial-wetting inner ODE, shooting for
// the complete-wetting separatrix, local expansions and asymptotic bases.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "thinfilm/errors.hpp"
#include "thinfilm/jet.hpp"
#include "thinfilm/model.hpp"
#include "thinfilm/ode.hpp"
#include "thinfilm/quadrature.hpp"

namespace thinfilm {

enum class Classification { none, separatrix, touchdown, quadratic_growth };

inline const char* to_string(Classification c) {
    switch (c) {
    case Classification::separatrix: return "separatrix";
    case Classification::touchdown: return "touchdown";
    case Classification::quadratic_growth: return "quadratic-growth";
    default: return "none";
    }
}

struct InnerSolution {
    std::vector<double> y;   // inner coordinate, y[0] > 0
    std::vector<double> H;
    std::vector<double> H1;  // first derivative
    std::vector<double> H2;  // second derivative
    double sdot = 0.0;
    double shoot_param = 0.0;
    Classification classification = Classification::none;

    void push(double x, const ode::State& s) {
        y.push_back(x);
        H.push_back(s[0]);
        H1.push_back(s[1]);
        H2.push_back(s[2]);
    }
};

// ---------------------------------------------------------------------------
// Improper integrals

namespace detail {

// 1 / (z^2 + g^(n-3) z^(n-1))
struct SlipKernel {
    double n, c;
    SlipKernel(double n_, double g) : n(n_), c(std::pow(g, n_ - 3.0)) {}
    double operator()(double z) const { return 1.0 / (z * z + c * std::pow(z, n - 1.0)); }
    // z^k f(z) for k = 1, 2, written so tiny z cannot overflow to 1/0.
    double moment(double z, int k) const {
        const double r = std::pow(z, 3.0 - n);
        return std::pow(z, k - n + 1.0) / (r + c);
    }

    // Integral over [Z, inf) after z = Z/u, which maps it to a smooth
    // integrand on (0, 1].
    double tail(double Z) const {
        auto g = [&](double u) { return 1.0 / (Z + c * std::pow(Z, n - 2.0) * std::pow(u, 3.0 - n)); };
        return quad::integrate_singular(g, 0.0, 1.0);
    }
};

inline void require_positive(double v, const char* what) {
    if (!(v > 0.0))
        throw DomainError(std::string(what) + " must be positive");
}

}  // namespace detail

// Q(y) = integral_y^inf dz / (z^2 + gamma^(n-3) z^(n-1)).
inline double q_gamma(double y, double gamma, double n) {
    detail::require_positive(y, "q_gamma: y");
    detail::require_positive(gamma, "q_gamma: gamma");
    if (n > 3.0)
        throw ConvergenceError("q_gamma: integral diverges for n > 3");
    if (!(n > 0.0))
        throw DomainError("q_gamma: n must be positive");
    if (n == 3.0)
        return 0.5 / y;
    const detail::SlipKernel f(n, gamma);
    const double Z = std::max(1e6, 1e4 * y);
    return quad::integrate_log(f, y, Z) + f.tail(Z);
}

// First-order correction to the wedge in the partial-wetting inner region,
//   H1(y) = |sdot| int_0^y int_0^y1 int_y2^inf dy3 / (theta^2 y3^2 + theta^(n-1) y3^(n-1)).
// Exchanging the order of integration leaves a single integral:
//   H1 = (|sdot|/theta^2) [ int_0^y f(z) (y z - z^2/2) dz + (y^2/2) Q(y) ].
struct H1Value {
    double value, d1, d2;
};

inline H1Value h1_correction_derivs(double y, double theta, double sdot, double n) {
    detail::require_positive(y, "h1_correction: y");
    detail::require_positive(theta, "h1_correction: theta");
    if (!(n > 1.0 && n < 3.0))
        throw ConvergenceError("h1_correction: requires 1 < n < 3");
    if (sdot == 0.0)
        return {0.0, 0.0, 0.0};
    const double scale = std::abs(sdot) / (theta * theta);
    const detail::SlipKernel f(n, theta);
    const double Q = q_gamma(y, theta, n);
    const double I1 = quad::integrate_singular([&](double z) { return f.moment(z, 1); }, 0.0, y);
    const double I2 = quad::integrate_singular([&](double z) { return f.moment(z, 2); }, 0.0, y);
    return {scale * (y * I1 - 0.5 * I2 + 0.5 * y * y * Q), scale * (I1 + y * Q), scale * Q};
}

inline double h1_correction(double y, double theta, double sdot, double n) {
    return h1_correction_derivs(y, theta, sdot, n).value;
}

// ---------------------------------------------------------------------------
// Partial wetting: -sdot + (H^2 + H^(n-1)) H''' = 0, H(0) = 0, H'(0) = theta.
//
// H and H' at y0 come from the first-order correction H1. H''(y0) is shot
// for: the equation has a quadratic mode that any O(sdot^2) error in the
// seed would excite, so H'' is bisected between certain touchdown and
// certain quadratic growth, starting from the H1 estimate.

struct InnerOptions {
    double y_classify = 1e12;  // horizon for classifying trial shots
    ode::Options ode{1e-11, 1e-14};
};

namespace detail {

inline Classification classify_partial(const SlipParameters& p, double sdot, double y0, ode::State s0,
                                       double y_end, const ode::Options& opt, InnerSolution* keep) {
    const double n = p.n;
    auto rhs = [&](double, const ode::State& s) -> ode::State {
        const double H = s[0];
        return {s[1], s[2], sdot / (H * H + std::pow(std::abs(H), n - 1.0))};
    };
    Classification c = Classification::separatrix;
    if (keep)
        keep->push(y0, s0);
    auto observe = [&](double x, const ode::State& s) {
        const double H = s[0], H1 = s[1], H2 = s[2];
        if (!(H > 0.0)) {
            c = Classification::touchdown;
            return false;
        }
        if (keep) {
            keep->push(x, s);
            return true;
        }
        // |H'''| <= |sdot| / H^2 and H >= H + H' u while convex, so H'' can
        // change by at most |sdot| / (H H') over the rest of the line.
        const double budget = H1 > 0.0 ? std::abs(sdot) / (H * H1) : INFINITY;
        if (sdot < 0.0) {
            if (H2 < 0.0)
                c = Classification::touchdown;
            else if (H2 > budget)
                c = Classification::quadratic_growth;
        } else {
            if (H2 > 0.0 && H1 > 0.0)
                c = Classification::quadratic_growth;
            else if (H2 <= 0.0 && H1 < 0.0)
                c = Classification::touchdown;
        }
        return c == Classification::separatrix;
    };
    try {
        ode::integrate(rhs, y0, s0, y_end, observe, opt);
    } catch (const IntegrationError&) {
        if (keep)
            throw;
        c = Classification::touchdown;
    }
    return c;
}

}  // namespace detail

inline InnerSolution integrate_inner_partial(const SlipParameters& p, double sdot, double y0, double ymax,
                                             const InnerOptions& opt = {}) {
    detail::require_positive(p.theta, "integrate_inner_partial: theta");
    if (!(y0 > 0.0 && ymax > y0))
        throw DomainError("integrate_inner_partial: need 0 < y0 < ymax");

    // The correction carries the sign of -sdot.
    const double sigma = sdot < 0.0 ? 1.0 : -1.0;
    const H1Value seed = h1_correction_derivs(y0, p.theta, sdot, p.n);
    ode::State s0{p.theta * y0 + sigma * seed.value, p.theta + sigma * seed.d1, sigma * seed.d2};

    if (sdot != 0.0) {
        auto classify = [&](double h2) {
            ode::State s = s0;
            s[2] = h2;
            return detail::classify_partial(p, sdot, y0, s, std::max(ymax, opt.y_classify), opt.ode, nullptr);
        };
        const double c0 = s0[2];
        const double d0 = std::max(std::abs(c0), 1e-12);
        double lo = c0, hi = c0;
        for (double d = 1e-3 * d0; classify(lo) != Classification::touchdown; d *= 2.0) {
            if (d > 1e6 * d0)
                throw NoSeparatrixError("integrate_inner_partial: no touchdown below the seed");
            lo = c0 - d;
        }
        for (double d = 1e-3 * d0; classify(hi) != Classification::quadratic_growth; d *= 2.0) {
            if (d > 1e6 * d0)
                throw NoSeparatrixError("integrate_inner_partial: no growth above the seed");
            hi = c0 + d;
        }
        for (;;) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            (classify(mid) == Classification::touchdown ? lo : hi) = mid;
        }
        s0[2] = 0.5 * (lo + hi);
    }

    InnerSolution sol;
    sol.sdot = sdot;
    sol.shoot_param = s0[2];
    const Classification c = detail::classify_partial(p, sdot, y0, s0, ymax, opt.ode, &sol);
    sol.classification = c == Classification::touchdown ? c : Classification::separatrix;
    return sol;
}

// ---------------------------------------------------------------------------
// Complete wetting: 1 + (H^2 + H) H''' = 0 in the normalized variable eta,
// with near-field expansion H = a eta^(3/2) + b eta^3 + K eta^beta1.

struct CompleteWettingSeries {
    static double leading() { return std::sqrt(8.0 / 3.0); }
    static double particular() { return 8.0 / 45.0; }
    // Roots of beta (beta-1) (beta-2) = 3/8 other than 1/2.
    static double beta1() { return 1.25 + 0.25 * std::sqrt(13.0); }
    static double beta2() { return 1.25 - 0.25 * std::sqrt(13.0); }

    // H and its first three derivatives at eta for shooting constant K.
    static std::array<double, 4> eval(double eta, double K) {
        const auto x = Jet<3>::variable(eta);
        const Jet<3> H = leading() * pow(x, 1.5) + particular() * pow(x, 3.0) + K * pow(x, beta1());
        return {H.d(0), H.d(1), H.d(2), H.d(3)};
    }

    // Size of the height error committed by the truncated series: the ODE
    // residual integrated three times over [0, eta].
    static double seed_error(double eta, double K) {
        const auto v = eval(eta, K);
        const double H = v[0];
        const double residual = v[3] + 1.0 / (H * H + H);
        return std::abs(residual) * eta * eta * eta / 6.0;
    }
};

struct ShootOptions {
    double eta0 = 1e-3;
    double eta_max = 1e4;
    double tol = 1e-10;  // final bracket width in K
    // Shots are classified on a longer horizon than the reported solution, so
    // that near-separatrix trials still resolve.
    double eta_classify = 1e12;
    ode::Options ode{1e-11, 1e-14};
};

struct ShootResult {
    InnerSolution solution;
    double K0 = 0.0;
    double beta1 = CompleteWettingSeries::beta1();
    double eta_reached = 0.0;
    double far_field_ratio = 0.0;  // H / (eta (ln eta)^(1/3)) at eta_reached
    double seed_error = 0.0;       // relative to H(eta0)
    int bisections = 0;
};

namespace detail {

// Touchdown is certain once H'' < 0 (H''' < 0 keeps it so); growth is certain
// once H'' exceeds the largest possible future decrease, bounded by the
// integral of 1/(H^2+H) along the tangent line: ln(1 + 1/H) / H'.
inline Classification classify_shot(double K, const ShootOptions& o, InnerSolution* keep) {
    const double eta_end = keep ? o.eta_max : std::max(o.eta_max, o.eta_classify);
    const auto v = CompleteWettingSeries::eval(o.eta0, K);
    ode::State s0{v[0], v[1], v[2]};
    if (!(s0[0] > 0.0))
        return Classification::touchdown;
    auto rhs = [](double, const ode::State& s) -> ode::State {
        const double H = s[0];
        return {s[1], s[2], -1.0 / (H * H + H)};
    };
    Classification c = Classification::separatrix;
    if (keep) {
        *keep = InnerSolution{};
        keep->shoot_param = K;
        keep->push(o.eta0, s0);
    }
    auto observe = [&](double x, const ode::State& s) {
        if (s[0] < 1e-12 || s[2] < 0.0) {
            c = Classification::touchdown;
            return !keep ? false : s[0] > 1e-12;
        }
        if (s[1] > 0.0 && s[2] > std::log1p(1.0 / s[0]) / s[1]) {
            c = Classification::quadratic_growth;
            if (!keep)
                return false;
        }
        if (keep)
            keep->push(x, s);
        return true;
    };
    try {
        ode::integrate(rhs, o.eta0, s0, eta_end, observe, o.ode);
    } catch (const IntegrationError&) {
        // Singular approach to H = 0.
        c = Classification::touchdown;
    }
    if (keep)
        keep->classification = c;
    return c;
}

}  // namespace detail

inline ShootResult complete_wetting_shoot(const ShootOptions& o = {}) {
    if (!(o.eta0 > 0.0 && o.eta0 < 1.0 && o.eta_max > 1.0 && o.tol > 0.0))
        throw DomainError("complete_wetting_shoot: need 0 < eta0 < 1 < eta_max and tol > 0");

    std::vector<double> scan;
    for (int j = 2; j >= -6; --j)
        scan.push_back(-std::pow(10.0, j));
    for (int j = -6; j <= 2; ++j)
        scan.push_back(std::pow(10.0, j));

    double lo = 0.0, hi = 0.0;
    bool found = false;
    Classification prev = detail::classify_shot(scan.front(), o, nullptr);
    for (std::size_t i = 1; i < scan.size() && !found; ++i) {
        const Classification c = detail::classify_shot(scan[i], o, nullptr);
        if (prev == Classification::touchdown && c != Classification::touchdown) {
            lo = scan[i - 1];
            hi = scan[i];
            found = true;
        }
        prev = c;
    }
    if (!found)
        throw NoSeparatrixError("complete_wetting_shoot: no sign change over the K scan");

    ShootResult r;
    while (hi - lo > o.tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
            break;
        const Classification c = detail::classify_shot(mid, o, nullptr);
        if (c == Classification::touchdown)
            lo = mid;
        else if (c == Classification::quadratic_growth)
            hi = mid;
        else {
            lo = hi = mid;
        }
        ++r.bisections;
    }
    r.K0 = 0.5 * (lo + hi);

    const double H0 = CompleteWettingSeries::eval(o.eta0, r.K0)[0];
    r.seed_error = CompleteWettingSeries::seed_error(o.eta0, r.K0) / H0;
    if (r.seed_error > 0.01)
        throw SeedError("complete_wetting_shoot: series seed inaccurate at eta0 = " + std::to_string(o.eta0));

    detail::classify_shot(r.K0, o, &r.solution);
    r.solution.sdot = -1.0;
    r.solution.classification = Classification::separatrix;
    const double eta = r.solution.y.back();
    r.eta_reached = eta;
    r.far_field_ratio = eta > 1.0 ? r.solution.H.back() / (eta * std::cbrt(std::log(eta))) : 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// Local expansion of the correction phi to the wedge gamma xi near the contact
// point; phi2_seed is the free coefficient phi''(0) needed when n < 2.

inline double local_phi(double n, double gamma, double sdot, double xi, std::optional<double> phi2_seed = {}) {
    if (!(n > 0.0 && n < 3.0))
        throw RegimeError("local_phi: expansion only covers 0 < n < 3");
    detail::require_positive(gamma, "local_phi: gamma");
    detail::require_positive(xi, "local_phi: xi");
    if (n > 2.0)
        return std::pow(gamma, 1.0 - n) * sdot * std::pow(xi, 4.0 - n) / ((4.0 - n) * (3.0 - n) * (2.0 - n));
    if (n == 2.0)
        return 0.5 * sdot / gamma * xi * xi * std::log(xi);
    if (!phi2_seed)
        throw DomainError("local_phi: n < 2 needs the second-derivative seed");
    return 0.5 * *phi2_seed * xi * xi;
}

// ---------------------------------------------------------------------------
// Travelling-wave profile ODE. Two right-hand sides are offered:
//   flux:    m(h) h''' = sign * xi   (once-integrated constant forcing)
//   profile: m(h) h''' = sign * h    (steady profile in the moving frame,
//                                     sign * sdot scaled to 1)

enum class WaveForcing { flux, profile };

struct WaveResult {
    InnerSolution solution;
    double max_invariant_error = 0.0;  // |m(h) h''' - forcing| over accepted steps
};

inline WaveResult travelling_wave(const SlipParameters& p, int sign, double xi_start, double xi_end,
                                  std::array<double, 3> seeds, WaveForcing forcing = WaveForcing::flux,
                                  const ode::Options& opt = {}) {
    if (sign != 1 && sign != -1)
        throw DomainError("travelling_wave: sign must be +1 or -1");
    if (!(xi_start > 0.0 && xi_end > 0.0) || xi_start == xi_end)
        throw DomainError("travelling_wave: need distinct positive span ends");
    if (!(seeds[0] > 0.0))
        throw DomainError("travelling_wave: seed height must be positive");
    // Integrate in t = dir * xi so the integrator always runs forward.
    const double dir = xi_end > xi_start ? 1.0 : -1.0;
    auto force = [&](double xi, double h) { return sign * (forcing == WaveForcing::flux ? xi : h); };
    auto rhs = [&](double t, const ode::State& s) -> ode::State {
        const double xi = dir * t;
        const double h = s[0];
        if (!(h > 0.0))
            return {NAN, NAN, NAN};
        const double h3 = force(xi, h) / mobility(h, p);
        return {s[1], s[2], dir * dir * dir * h3};
    };
    // d/dt = dir d/dxi
    ode::State s0{seeds[0], dir * seeds[1], seeds[2]};

    WaveResult r;
    auto record = [&](double t, const ode::State& s) {
        r.solution.y.push_back(dir * t);
        r.solution.H.push_back(s[0]);
        r.solution.H1.push_back(dir * s[1]);
        r.solution.H2.push_back(s[2]);
    };
    record(dir * xi_start, s0);
    auto observe = [&](double t, const ode::State& s) {
        if (!(s[0] > 0.0)) {
            r.solution.classification = Classification::touchdown;
            return false;
        }
        record(t, s);
        const double xi = dir * t;
        const double h3 = dir * rhs(t, s)[2];
        r.max_invariant_error = std::max(r.max_invariant_error, std::abs(mobility(s[0], p) * h3 - force(xi, s[0])));
        return true;
    };
    try {
        ode::integrate(rhs, dir * xi_start, s0, dir * xi_end, observe, opt);
    } catch (const IntegrationError&) {
        r.solution.classification = Classification::touchdown;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Asymptotic bases near the contact point. Each entry is a log-power
// function u = coef * xi^p * (-ln xi)^q.

enum class BasisRegime { type_a_laplace, type_b_linearized, local_phi };

struct BasisEntry {
    std::string description;
    double coef, p, q;

    template <int N>
    Jet<N> eval(double xi) const {
        const auto x = Jet<N>::variable(xi);
        Jet<N> u(coef);
        if (p != 0.0)
            u = u * pow(x, p);
        if (q == 1.0)
            u = u * -log(x);
        else if (q != 0.0)
            u = u * pow(-log(x), q);
        return u;
    }
};

struct AsymptoticBasis {
    BasisRegime regime;
    std::vector<BasisEntry> entries;
};

inline BasisRegime parse_basis_regime(const std::string& s) {
    if (s == "type-a" || s == "type-a-laplace")
        return BasisRegime::type_a_laplace;
    if (s == "type-b" || s == "type-b-linearized")
        return BasisRegime::type_b_linearized;
    if (s == "local-phi")
        return BasisRegime::local_phi;
    throw DomainError("unknown basis regime '" + s + "' (type-a, type-b, local-phi)");
}

// For local-phi the catalog depends on n: the wedge and the leading
// correction branch.
inline AsymptoticBasis asymptotic_basis(BasisRegime regime, double n = 2.0) {
    AsymptoticBasis b{regime, {}};
    switch (regime) {
    case BasisRegime::type_a_laplace:
        b.entries = {{"ln x", -1.0, 0.0, 1.0}, {"1", 1.0, 0.0, 0.0}, {"x", 1.0, 1.0, 0.0}, {"x^2", 1.0, 2.0, 0.0}};
        break;
    case BasisRegime::type_b_linearized:
        b.entries = {{"(-ln xi)^(1/3)", 1.0, 0.0, 1.0 / 3.0},
                     {"1", 1.0, 0.0, 0.0},
                     {"xi (-ln xi)^(-2/3)", 1.0, 1.0, -2.0 / 3.0},
                     {"xi^2 (-ln xi)^(1/3)", 1.0, 2.0, 1.0 / 3.0}};
        break;
    case BasisRegime::local_phi:
        if (!(n > 0.0 && n < 3.0))
            throw RegimeError("asymptotic_basis: local-phi needs 0 < n < 3");
        b.entries.push_back({"xi", 1.0, 1.0, 0.0});
        if (n > 2.0)
            b.entries.push_back({"xi^(4-n)", 1.0, 4.0 - n, 0.0});
        else if (n == 2.0)
            b.entries.push_back({"xi^2 ln xi", -1.0, 2.0, 1.0});
        else
            b.entries.push_back({"xi^2", 1.0, 2.0, 0.0});
        break;
    }
    return b;
}

// (x^3 u''')' evaluated exactly through the jet.
inline double type_a_operator(const BasisEntry& e, double x) {
    const auto u = e.eval<4>(x);
    return 3.0 * x * x * u.d(3) + x * x * x * u.d(4);
}

// gamma (xi^3 (-ln xi) u''' + (2/3) u)' split into its two parts, so the
// caller can compare the residual against the size of each.
struct TypeBTerms {
    double diffusive, transport;
    double residual() const { return diffusive + transport; }
};

inline TypeBTerms type_b_operator(const BasisEntry& e, double xi, double gamma = 1.0) {
    if (!(xi > 0.0 && xi < 1.0))
        throw DomainError("type_b_operator: xi must lie in (0,1)");
    const auto u = e.eval<4>(xi);
    const double L = -std::log(xi);
    // d/dxi [xi^3 L] = 3 xi^2 L - xi^2
    const double diffusive = (3.0 * xi * xi * L - xi * xi) * u.d(3) + xi * xi * xi * L * u.d(4);
    return {gamma * diffusive, gamma * (2.0 / 3.0) * u.d(1)};
}

}  // namespace thinfilm
