#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "thinfilm/harness.hpp"

using namespace thinfilm;

namespace {

std::vector<SweepRecord> synthetic(double slope, double intercept, double noise = 0.0) {
    std::mt19937 rng(3);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<SweepRecord> out;
    for (double e : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
        SweepRecord r;
        r.epsilon = e;
        r.sdot_measured = slope / std::log(1.0 / e) + intercept + noise * nd(rng);
        out.push_back(r);
    }
    return out;
}

}  // namespace

TEST(FitLogLaw, RecoversExactLaw) {
    const auto f = fit_log_law(synthetic(2.0, 0.0));
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.intercept, 0.0, 1e-13);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
    EXPECT_EQ(f.n_points, 5u);
    EXPECT_DOUBLE_EQ(f.eps_min, 1e-4);
    EXPECT_DOUBLE_EQ(f.eps_max, 1e-2);
    EXPECT_FALSE(f.flat);
}

TEST(FitLogLaw, NoiseAndFailures) {
    auto rs = synthetic(-1.0 / 3.0, 0.01, 1e-4);
    const auto f = fit_log_law(rs);
    EXPECT_NEAR(f.slope, -1.0 / 3.0, 0.02);
    EXPECT_GT(f.r_squared, 0.95);
    rs[0].status = "failed: diverged";
    rs[1].sdot_measured = NAN;
    EXPECT_EQ(fit_log_law(rs).n_points, 3u);
    rs[2].status = "failed: diverged";
    EXPECT_THROW(fit_log_law(rs), DomainError);
}

TEST(FitLogLaw, FlatData) {
    const auto f = fit_log_law(synthetic(0.0, 0.25));
    EXPECT_TRUE(f.flat);
    EXPECT_NEAR(f.intercept, 0.25, 1e-14);
}

TEST(Laws, ParseAndPrint) {
    for (Law l : {Law::cox_voinov, Law::tanner, Law::typeb})
        EXPECT_EQ(parse_law(to_string(l)), l);
    EXPECT_THROW(parse_law("voinov"), ConfigError);
}

TEST(SweepEpsilon, RejectsBadLadders) {
    const auto base = default_sweep_base(Law::tanner);
    EXPECT_THROW(sweep_epsilon(Law::tanner, base, {}), DomainError);
    EXPECT_THROW(sweep_epsilon(Law::tanner, base, {1e-3, 1e-2}), DomainError);
    EXPECT_THROW(sweep_epsilon(Law::tanner, base, {0.5}), DomainError);
}

TEST(SweepEpsilon, SmallSweepIsThreadIndependent) {
    SolverConfig base = default_sweep_base(Law::cox_voinov);
    base.grid.L = 2.0;
    base.grid.N = 128;
    SweepOptions o;
    o.t_end = 0.5;
    const std::vector<double> eps{3e-2, 1e-2};
    const auto a = sweep_epsilon(Law::cox_voinov, base, eps, o);
    o.threads = 2;
    const auto b = sweep_epsilon(Law::cox_voinov, base, eps, o);
    ASSERT_EQ(a.size(), 2u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_TRUE(a[i].ok()) << a[i].status;
        EXPECT_EQ(a[i].epsilon, eps[i]);
        EXPECT_EQ(a[i].sdot_measured, b[i].sdot_measured);
        EXPECT_EQ(a[i].gamma_fit, b[i].gamma_fit);
        // theta = 2 > gamma: the contact line advances.
        EXPECT_GT(a[i].sdot_measured, 0.0);
        EXPECT_GT(a[i].sdot_predicted, 0.0);
    }
}

TEST(SweepMember, FailuresAreRecorded) {
    SolverConfig base = default_sweep_base(Law::cox_voinov);
    base.grid.N = 4;  // invalid
    const auto r = run_sweep_member(Law::cox_voinov, base, 1e-2, {});
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.status.rfind("failed: ", 0), 0u);
}

TEST(SlopeWindow, ClampedInsideDomain) {
    const auto [a, b] = outer_slope_window(1e-2, 2.0, 10.0);
    EXPECT_DOUBLE_EQ(b, 1.0);
    EXPECT_DOUBLE_EQ(a, 0.25);
    const auto [c, d] = outer_slope_window(1e-4, 2.0, 10.0);
    EXPECT_NEAR(c, 0.2, 1e-15);
    EXPECT_DOUBLE_EQ(d, 1.0);
}

TEST(TypeBProfileCheck, AnalyticProfileGivesZero) {
    const double eps = 1e-4, sdot = 1.0 / 3.0;
    std::vector<double> xi, h;
    for (double x = 1e-5; x < 0.2; x *= 1.05) {
        xi.push_back(x);
        h.push_back(typeb_profile(x, sdot));
    }
    EXPECT_LT(typeb_profile_check(xi, h, sdot, eps), 1e-15);
    EXPECT_NEAR(typeb_coefficient_fit(xi, h, eps), 1.0, 1e-12);
    // A pure wedge deviates by the log factor.
    std::vector<double> w;
    for (double x : xi)
        w.push_back(2.0 * x);
    EXPECT_GT(typeb_profile_check(xi, w, sdot, eps), 0.05);
    // A grid that misses the window is an error, not a pass.
    EXPECT_THROW(typeb_profile_check({0.5, 0.6}, {1.0, 1.0}, sdot, eps), DomainError);
}

TEST(TypeBWindow, Bounds) {
    const auto [a, b] = typeb_window(1e-4);
    EXPECT_NEAR(a, 10.0 * 1e-4 / std::cbrt(std::log(1e4)), 1e-18);
    EXPECT_DOUBLE_EQ(b, 0.1);
    EXPECT_THROW(typeb_window(1.5), RegimeError);
}

TEST(LogIntegral, ClosedForm) {
    const auto r = log_integral_identity(std::exp(-8.0));
    EXPECT_NEAR(r.closed_form, 1.5 * (4.0 - std::pow(std::log(2.0), 2.0 / 3.0)), 1e-14);
    EXPECT_NEAR(r.numeric / r.closed_form, 1.0, 1e-10);
    EXPECT_NEAR(r.closed_form, 4.8251, 1e-4);
    for (double d : {1e-3, 1e-10, 1e-30}) {
        const auto s = log_integral_identity(d);
        EXPECT_NEAR(s.numeric / s.closed_form, 1.0, 1e-10) << d;
    }
    EXPECT_THROW(log_integral_identity(0.7), DomainError);
}

TEST(Cancellation, ZeroSpeedAndProfileDerivatives) {
    for (const auto& row : energy_cancellation_check(0.0, {1e-2, 1e-4})) {
        EXPECT_EQ(row.term1, 0.0);
        EXPECT_EQ(row.term2, 0.0);
        EXPECT_EQ(row.leading, 0.0);
    }
    // The cutoff profile's jet against central differences.
    const CutoffProfile P{1.0 / 3.0};
    for (double x : {1e-3, 0.05, 0.3}) {
        const double d = 1e-3 * x;
        auto f = [&](double t) { return P(t).d(0); };
        const double fd1 = (f(x + d) - f(x - d)) / (2 * d);
        const double fd3 = (f(x + 2 * d) - 2 * f(x + d) + 2 * f(x - d) - f(x - 2 * d)) / (2 * d * d * d);
        EXPECT_NEAR(P(x).d(1) / fd1, 1.0, 1e-5);
        EXPECT_NEAR(P(x).d(3) / fd3, 1.0, 1e-3);
    }
    EXPECT_EQ(P(0.5).d(0), 0.0);
}

TEST(Cancellation, SlopeTermLeadingOrder) {
    // term1 = (sdot/2) h'(delta)^2 approaches the leading term from below.
    const auto rows = energy_cancellation_check(1.0 / 3.0, {1e-4, 1e-6, 1e-8});
    double prev = 0.0;
    for (const auto& r : rows) {
        const double ratio = r.term1 / r.leading;
        EXPECT_GT(ratio, prev);
        EXPECT_LT(ratio, 1.0);
        prev = ratio;
    }
    EXPECT_THROW(energy_cancellation_check(1.0, {1e-4, 1e-3}), DomainError);
    EXPECT_THROW(energy_cancellation_check(-1.0, {1e-4}), DomainError);
}

TEST(NoMove, ConfigShape) {
    const auto c = nomove_config(1.0);
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.frame, Frame::fixed);
    EXPECT_EQ(c.p.n, 3.0);
    EXPECT_TRUE(c.p.no_slip);
    const auto s = slip_contrast_config(1.0);
    EXPECT_EQ(s.p.theta, 2.0);
    EXPECT_NO_THROW(s.validate());
}
