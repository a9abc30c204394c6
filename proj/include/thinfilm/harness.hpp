#pragma once

// Families of runs and quadrature checks against the asymptotic laws:
// epsilon sweeps for the contact-line speed, log-law fits, the type-(b)
// profile comparison, the energy cancellation near the contact point and the
// pinning experiment without slip.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "thinfilm/jet.hpp"
#include "thinfilm/model.hpp"
#include "thinfilm/pde_solver.hpp"
#include "thinfilm/quadrature.hpp"

namespace thinfilm {

enum class Law { cox_voinov, tanner, typeb };

inline const char* to_string(Law law) {
    switch (law) {
    case Law::cox_voinov: return "cox_voinov";
    case Law::tanner: return "tanner";
    default: return "typeb";
    }
}

inline Law parse_law(const std::string& s) {
    if (s == "cox_voinov")
        return Law::cox_voinov;
    if (s == "tanner")
        return Law::tanner;
    if (s == "typeb")
        return Law::typeb;
    throw ConfigError("law", "unknown law '" + s + "' (valid: cox_voinov, tanner, typeb)");
}

struct SweepRecord {
    Law law = Law::cox_voinov;
    double epsilon = 0.0;
    double theta = 0.0;
    double gamma_fit = std::numeric_limits<double>::quiet_NaN();
    double sdot_measured = std::numeric_limits<double>::quiet_NaN();
    double sdot_predicted = std::numeric_limits<double>::quiet_NaN();
    double relative_error = std::numeric_limits<double>::quiet_NaN();
    double sdot_prelimit = std::numeric_limits<double>::quiet_NaN();  // type (b) only
    double profile_deviation = std::numeric_limits<double>::quiet_NaN();  // type (b) only
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

struct SweepOptions {
    double t_end = 0.0;         // 0 picks 20 (cox_voinov, tanner) or 5 (typeb)
    double discard = 0.2;       // leading fraction of the run excluded from the speed fit
    double typeb_gamma = 1.0;   // theta_eps = gamma (-ln eps)^(1/3)
    int threads = 1;
};

// Reasonable base configurations for each law. Domains are long enough that
// the slope window reaches its nominal end min(0.1 L, 1).
inline SolverConfig default_sweep_base(Law law) {
    SolverConfig c;
    c.frame = Frame::moving;
    c.p.n = 2.0;
    c.far_field = FarField::wedge_match;
    c.dt0 = 1e-7;
    c.dt_max = 0.05;
    c.grid.graded = true;
    switch (law) {
    case Law::cox_voinov:
        c.p.theta = 2.0;
        c.far_gamma = 1.0;
        c.grid.L = 10.0;
        c.grid.N = 2560;
        break;
    case Law::tanner:
        c.p.theta = 0.0;
        c.far_gamma = 1.0;
        c.grid.L = 10.0;
        c.grid.N = 2560;
        break;
    case Law::typeb:
        c.p.theta = 1.0;  // replaced per epsilon
        c.far_gamma = 0.0;
        c.grid.L = 1.0;
        c.grid.N = 256;
        c.dt_max = 0.01;
        c.initial.kind = "typeb_cutoff";
        break;
    }
    return c;
}

inline SolverConfig sweep_member_config(Law law, SolverConfig base, double epsilon, const SweepOptions& o) {
    base.p.epsilon = epsilon;
    base.p.no_slip = false;
    base.frame = Frame::moving;
    base.grid.graded = true;
    base.grid.first = 0.25 * epsilon;
    if (law == Law::tanner)
        base.p.theta = 0.0;
    if (law == Law::typeb) {
        base.p.theta = typeb_contact_slope(o.typeb_gamma, epsilon);
        base.initial.kind = "typeb_cutoff";
        base.initial.params["xc"] = base.grid.L;
    }
    return base;
}

// Slope window [a, b] for the outer fit. The nominal start 10 sqrt(eps)
// max(1, theta) is pulled in to b/4 when it would collide with b.
inline std::pair<double, double> outer_slope_window(double epsilon, double theta, double L) {
    const double b = default_slope_window_end(L);
    const double a = std::min(default_slope_window_start(epsilon, theta), 0.25 * b);
    return {a, b};
}

// Window of the type-(b) comparison: [10 Delta_eps, 0.1] with
// Delta_eps = eps (-ln eps)^(-1/3).
inline std::pair<double, double> typeb_window(double epsilon) {
    require_slip_regime(epsilon, "typeb_window");
    return {10.0 * epsilon / std::cbrt(-std::log(epsilon)), 0.1};
}

// Max relative deviation of h from typeb_profile(xi, sdot) on the window.
inline double typeb_profile_check(const std::vector<double>& xi, const std::vector<double>& h, double sdot,
                                  double epsilon) {
    const auto [a, b] = typeb_window(epsilon);
    double dev = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < xi.size(); ++i)
        if (xi[i] >= a && xi[i] <= b) {
            const double ref = typeb_profile(xi[i], sdot);
            dev = std::max(dev, std::abs(h[i] - ref) / ref);
            ++n;
        }
    if (n == 0)
        throw DomainError("typeb_profile_check: matching window holds no nodes at this resolution");
    return dev;
}

// Coefficient g of h ~ g xi (ln 1/xi)^(1/3), least squares on the window.
inline double typeb_coefficient_fit(const std::vector<double>& xi, const std::vector<double>& h, double epsilon) {
    const auto [a, b] = typeb_window(epsilon);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i)
        if (xi[i] >= a && xi[i] <= b) {
            const double phi = xi[i] * std::cbrt(std::log(1.0 / xi[i]));
            num += phi * h[i];
            den += phi * phi;
        }
    if (den == 0.0)
        throw DomainError("typeb_coefficient_fit: window holds no nodes");
    return num / den;
}

// One member of a sweep. Failures are recorded in `status`, never thrown.
inline SweepRecord run_sweep_member(Law law, const SolverConfig& base, double epsilon, const SweepOptions& o) {
    SweepRecord r;
    r.law = law;
    r.epsilon = epsilon;
    try {
        const SolverConfig cfg = sweep_member_config(law, base, epsilon, o);
        r.theta = cfg.p.theta;
        const double t_end = o.t_end > 0.0 ? o.t_end : (law == Law::typeb ? 5.0 : 20.0);
        const Trajectory tr = simulate(cfg, t_end);
        const SpeedFit sp = extract_contact_speed(tr, o.discard * t_end, t_end);
        r.sdot_measured = sp.sdot;
        const std::vector<double>& h = tr.states.back().h;
        const std::vector<double>& xi = tr.grid.x;
        switch (law) {
        case Law::cox_voinov: {
            const auto [a, b] = outer_slope_window(epsilon, cfg.p.theta, cfg.grid.L);
            r.gamma_fit = measure_outer_slope(xi, h, a, b);
            r.sdot_predicted = cox_voinov_speed(cfg.p.theta, r.gamma_fit, epsilon);
            break;
        }
        case Law::tanner: {
            const auto [a, b] = outer_slope_window(epsilon, cfg.p.theta, cfg.grid.L);
            r.gamma_fit = measure_outer_slope(xi, h, a, b);
            r.sdot_predicted = tanner_speed(r.gamma_fit, epsilon);
            break;
        }
        case Law::typeb: {
            r.gamma_fit = typeb_coefficient_fit(xi, h, epsilon);
            r.sdot_predicted = typeb_speed(r.gamma_fit);
            const double th = cfg.p.theta;
            r.sdot_prelimit = th * th * th / (3.0 * std::log(1.0 / epsilon));
            if (r.sdot_measured > 0.0)
                r.profile_deviation = typeb_profile_check(xi, h, r.sdot_measured, epsilon);
            break;
        }
        }
        if (r.sdot_predicted != 0.0)
            r.relative_error = std::abs(r.sdot_measured - r.sdot_predicted) / std::abs(r.sdot_predicted);
    } catch (const std::exception& e) {
        r.status = std::string("failed: ") + e.what();
    }
    return r;
}

// Runs every epsilon (optionally on several threads) and returns the records
// sorted by decreasing epsilon. Results do not depend on the thread count.
inline std::vector<SweepRecord> sweep_epsilon(Law law, const SolverConfig& base, const std::vector<double>& eps_list,
                                              const SweepOptions& o = {}) {
    if (eps_list.empty())
        throw DomainError("sweep_epsilon: empty epsilon list");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0 && eps_list[i] < 0.1))
            throw DomainError("sweep_epsilon: every epsilon must lie in (0, 0.1)");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw DomainError("sweep_epsilon: epsilon list must be strictly decreasing");
    }
    std::vector<SweepRecord> out(eps_list.size());
    const int nthreads = std::max(1, std::min<int>(o.threads, int(eps_list.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < eps_list.size();)
            out[i] = run_sweep_member(law, base, eps_list[i], o);
    };
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < nthreads; ++k)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    std::sort(out.begin(), out.end(), [](const SweepRecord& a, const SweepRecord& b) { return a.epsilon > b.epsilon; });
    return out;
}

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
    double eps_min = 0.0, eps_max = 0.0;
    bool flat = false;  // no measurable dependence on 1/ln(1/eps)
};

// sdot_measured = slope / ln(1/eps) + intercept over the valid records.
inline FitResult fit_log_law(const std::vector<SweepRecord>& records) {
    std::vector<double> x, y;
    FitResult f;
    f.eps_min = std::numeric_limits<double>::infinity();
    for (const auto& r : records)
        if (r.ok() && std::isfinite(r.sdot_measured)) {
            x.push_back(1.0 / std::log(1.0 / r.epsilon));
            y.push_back(r.sdot_measured);
            f.eps_min = std::min(f.eps_min, r.epsilon);
            f.eps_max = std::max(f.eps_max, r.epsilon);
        }
    if (x.size() < 3)
        throw DomainError("fit_log_law: need at least three valid records");
    const LineFit lf = least_squares(x, y);
    f.slope = lf.slope;
    f.intercept = lf.intercept;
    f.r_squared = lf.r_squared;
    f.n_points = lf.n;
    const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
    double ymax = 0.0;
    for (double v : y)
        ymax = std::max(ymax, std::abs(v));
    f.flat = std::abs(f.slope) * (*xmax - *xmin) <= 1e-6 * std::max(ymax, 1e-300);
    return f;
}

// ---------------------------------------------------------------------------
// Quadrature checks

struct LogIntegral {
    double numeric, closed_form;
};

// int_delta^(1/2) dxi / (xi (ln 1/xi)^(1/3)) against
// (3/2) [(ln 1/delta)^(2/3) - (ln 2)^(2/3)].
inline LogIntegral log_integral_identity(double delta) {
    if (!(delta > 0.0 && delta <= 0.5))
        throw DomainError("log_integral_identity: delta must lie in (0, 1/2]");
    const double closed = 1.5 * (std::pow(std::log(1.0 / delta), 2.0 / 3.0) - std::pow(std::log(2.0), 2.0 / 3.0));
    const double num =
        quad::integrate_log([](double x) { return 1.0 / (x * std::cbrt(std::log(1.0 / x))); }, delta, 0.5);
    return {num, closed};
}

// Type-(b) profile (3 sdot)^(1/3) xi (ln 1/xi)^(1/3) times the smooth cutoff
// exp(1 - 1/(1 - (xi/c)^2)), which vanishes with all derivatives at xi = c.
struct CutoffProfile {
    double sdot;
    double cutoff = 0.5;

    Jet<3> operator()(double xi) const {
        const auto x = Jet<3>::variable(xi);
        const double u = 1.0 - (xi / cutoff) * (xi / cutoff);
        if (u < 1e-3 || sdot == 0.0)
            return Jet<3>(0.0);
        const Jet<3> base = std::cbrt(3.0 * sdot) * x * pow(-log(x), 1.0 / 3.0);
        const Jet<3> w = 1.0 - (x / cutoff) * (x / cutoff);
        return base * exp(1.0 - 1.0 / w);
    }
};

struct CancellationRow {
    double delta, term1, term2, difference, leading;
};

// term1 = (sdot/2) h'(delta)^2 and term2 = int_delta^cutoff h^3 h'''^2; both
// grow like (1/6)(3 sdot)^(5/3) |ln delta|^(2/3) while their difference stays
// bounded.
inline std::vector<CancellationRow> energy_cancellation_check(double sdot, const std::vector<double>& deltas) {
    if (!(sdot >= 0.0))
        throw DomainError("energy_cancellation_check: sdot must be non-negative");
    const CutoffProfile P{sdot};
    std::vector<CancellationRow> rows;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double d = deltas[i];
        if (!(d > 0.0 && d < 0.1))
            throw DomainError("energy_cancellation_check: delta must lie in (0, 0.1)");
        if (i > 0 && !(d < deltas[i - 1]))
            throw DomainError("energy_cancellation_check: deltas must be decreasing");
        const double slope = P(d).d(1);
        const double term1 = 0.5 * sdot * slope * slope;
        const double term2 = quad::integrate_log(
            [&](double x) {
                const auto j = P(x);
                const double h = j.d(0), h3 = j.d(3);
                return h * h * h * h3 * h3;
            },
            d, P.cutoff);
        const double leading = std::pow(3.0 * sdot, 5.0 / 3.0) / 6.0 * std::pow(std::log(1.0 / d), 2.0 / 3.0);
        rows.push_back({d, term1, term2, term1 - term2, leading});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Pinning without slip

struct DriftResult {
    double drift = 0.0;  // max |s(t) - s(0)|
    double cell = 0.0;   // uniform cell size L / N
    double t_end = 0.0;
    double s0 = 0.0;
};

inline double max_drift(const Trajectory& tr) {
    double d = 0.0;
    for (const auto& x : tr.diagnostics)
        d = std::max(d, std::abs(x.s - tr.diagnostics.front().s));
    return d;
}

// Fixed frame, n = 3, eps = 0, wedge of slope gamma from s0 = 1 with a bump
// further out; the contact line is tracked by the level set h = gamma dx / 2.
inline SolverConfig nomove_config(double gamma, int N = 1024, double L = 4.0) {
    SolverConfig c;
    c.frame = Frame::fixed;
    c.p.n = 3.0;
    c.p.epsilon = 0.0;
    c.p.no_slip = true;
    c.p.theta = gamma;
    c.face_average = FaceAverage::geometric;
    c.grid.N = N;
    c.grid.L = L;
    c.initial.kind = "wedge_bump";
    c.initial.params = {{"gamma", gamma}, {"s0", 1.0}, {"amp", 0.2 * gamma}, {"center", 1.0}, {"width", 0.3}};
    c.wall_slope_left = 0.0;
    c.wall_slope_right = gamma;
    c.contact_threshold = 0.5 * gamma * L / N;
    c.dt0 = 1e-6;
    c.dt_max = 1e-2;
    return c;
}

inline DriftResult nomove_check(const SolverConfig& cfg, double t_end = 1.0) {
    DriftResult r;
    r.cell = cfg.grid.L / cfg.grid.N;
    r.t_end = t_end;
    const Trajectory tr = simulate(cfg, t_end);
    r.s0 = tr.diagnostics.front().s;
    r.drift = max_drift(tr);
    return r;
}

// Contrast with slip: moving frame, n = 2, theta = 2 gamma, run for ln(1/eps).
inline SolverConfig slip_contrast_config(double gamma, double epsilon = 1e-3, int N = 1024, double L = 4.0) {
    SolverConfig c;
    c.frame = Frame::moving;
    c.p.n = 2.0;
    c.p.epsilon = epsilon;
    c.p.theta = 2.0 * gamma;
    c.far_field = FarField::wedge_match;
    c.far_gamma = gamma;
    c.grid.N = N;
    c.grid.L = L;
    c.grid.graded = true;
    c.dt0 = 1e-7;
    c.dt_max = 0.05;
    return c;
}

}  // namespace thinfilm
