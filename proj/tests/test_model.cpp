#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "thinfilm/model.hpp"

using namespace thinfilm;

namespace {

SlipParameters params(double n, double eps, bool no_slip = false) {
    SlipParameters p;
    p.n = n;
    p.epsilon = eps;
    p.no_slip = no_slip;
    return p;
}

}  // namespace

TEST(Mobility, Examples) {
    EXPECT_EQ(mobility(0.0, params(2, 0.5)), 0.0);
    EXPECT_EQ(mobility(0.0, params(1.5, 1e-3)), 0.0);
    EXPECT_DOUBLE_EQ(mobility(1.0, params(2, 0.0, true)), 1.0);
    EXPECT_DOUBLE_EQ(mobility(2.0, params(2, 0.5)), 10.0);
    EXPECT_THROW(mobility(-1e-3, params(2, 0.5)), DomainError);
}

TEST(Mobility, NoSlipIsCubic) {
    for (double h : {1e-3, 0.3, 1.0, 7.0})
        EXPECT_NEAR(mobility(h, params(2.2, 0.0, true)), h * h * h, 1e-15 * h * h * h);
}

TEST(Mobility, NonNegativeAndIncreasing) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> un(0.05, 3.0), ue(-6.0, 0.0), uh(0.0, 5.0);
    for (int k = 0; k < 500; ++k) {
        const auto p = params(un(rng), std::pow(10.0, ue(rng)));
        const double a = uh(rng), b = a + 1e-3 + uh(rng);
        EXPECT_GE(mobility(a, p), 0.0);
        EXPECT_LT(mobility(a, p), mobility(b, p));
    }
}

TEST(MobilityDerivative, Examples) {
    EXPECT_DOUBLE_EQ(mobility_derivative(1.0, params(2, 0.0, true)), 3.0);
    EXPECT_DOUBLE_EQ(mobility_derivative(1.0, params(2, 1.0)), 5.0);
    EXPECT_THROW(mobility_derivative(0.0, params(0.5, 1e-2)), DomainError);
}

TEST(MobilityDerivative, MatchesCentralDifference) {
    for (double n : {0.5, 1.0, 2.0, 2.7})
        for (double h : {0.1, 1.0, 10.0}) {
            const auto p = params(n, 0.1);
            const double d = 1e-5 * h;
            const double fd = (mobility(h + d, p) - mobility(h - d, p)) / (2 * d);
            EXPECT_NEAR(mobility_derivative(h, p), fd, 1e-8 * std::abs(fd)) << "n=" << n << " h=" << h;
        }
}

TEST(SlipParameters, Validation) {
    EXPECT_THROW(params(3.5, 1e-3).validate(), DomainError);
    EXPECT_THROW(params(0.0, 1e-3).validate(), DomainError);
    EXPECT_THROW(params(2, 0.0).validate(), DomainError);
    EXPECT_NO_THROW(params(2, 0.0, true).validate());
    EXPECT_NO_THROW(params(3, 1e-3).validate());
    SlipParameters p;
    p.theta = 0.0;
    EXPECT_EQ(p.wetting(), Wetting::complete);
    p.theta = 0.5;
    EXPECT_EQ(p.wetting(), Wetting::partial);
    p.theta = -1.0;
    EXPECT_THROW(p.validate(), DomainError);
}

TEST(YoungAngle, Examples) {
    PhysicalScales s;
    s.gamma_LG = 2.0;
    s.gamma_SL = 0.0;
    s.gamma_SG = 1.0;
    EXPECT_NEAR(young_angle(s), std::numbers::pi / 3, 1e-14);
    s.gamma_SG = s.gamma_SL = 0.3;
    EXPECT_NEAR(young_angle(s), std::numbers::pi / 2, 1e-14);
    s.gamma_SL = 0.0;
    s.gamma_SG = 2.0 * (1.0 - 1e-12);
    EXPECT_GT(young_angle(s), 0.0);
    EXPECT_LT(young_angle(s), 1e-5);
    s.gamma_SG = 2.0;
    EXPECT_THROW(young_angle(s), RegimeError);
}

TEST(YoungAngle, InvertsCosine) {
    for (double th = 0.01; th < std::numbers::pi; th += 0.05) {
        PhysicalScales s;
        s.gamma_LG = 1.0;
        s.gamma_SL = 0.2;
        s.gamma_SG = 0.2 + std::cos(th);
        EXPECT_NEAR(young_angle(s), th, 1e-12);
    }
}

TEST(LubricationScales, Examples) {
    auto a = lubrication_scales(1, 1, 0.01, 0.1);
    EXPECT_DOUBLE_EQ(a.delta, 0.1);
    EXPECT_DOUBLE_EQ(a.sp, 0.1);
    EXPECT_DOUBLE_EQ(a.st, 0.1);
    auto b = lubrication_scales(2, 4, 0.01, 0.1);
    EXPECT_DOUBLE_EQ(b.delta, 0.1);
    EXPECT_DOUBLE_EQ(b.sp, 0.2);
    EXPECT_DOUBLE_EQ(b.st, 0.05);
    EXPECT_DOUBLE_EQ(lubrication_scales(3, 1, 0.5, 0.5).delta, 1.0);
    EXPECT_THROW(lubrication_scales(0, 1, 1, 1), DomainError);
    EXPECT_THROW(lubrication_scales(1, 1, -1, 1), DomainError);
}

TEST(SpeedLaws, CoxVoinov) {
    EXPECT_EQ(cox_voinov_speed(1, 1, 1e-3), 0.0);
    EXPECT_NEAR(cox_voinov_speed(1, 0, std::exp(-10.0)), 0.1, 1e-15);
    EXPECT_NEAR(cox_voinov_speed(2, 1, std::exp(-20.0)), 0.2, 1e-15);
    EXPECT_THROW(cox_voinov_speed(1, 1, 1.0), RegimeError);
    EXPECT_THROW(cox_voinov_speed(0, 1, 1e-3), DomainError);
    for (double th : {0.1, 0.7, 2.0, 5.0})
        for (double e : {1e-1, 1e-4, 1e-9})
            EXPECT_EQ(cox_voinov_speed(th, th, e), 0.0);
    EXPECT_GT(cox_voinov_speed(2, 1, 1e-3), 0.0);
    EXPECT_LT(cox_voinov_speed(1, 2, 1e-3), 0.0);
}

TEST(SpeedLaws, Tanner) {
    EXPECT_NEAR(tanner_speed(1, std::exp(-3.0)), -1.0 / 9.0, 1e-15);
    EXPECT_EQ(tanner_speed(0, 1e-3), 0.0);
    EXPECT_NEAR(tanner_speed(3, std::exp(-27.0)), -1.0 / 3.0, 1e-15);
    EXPECT_THROW(tanner_speed(1, 0.0), RegimeError);
    for (double g : {0.1, 1.0, 4.0})
        EXPECT_LT(tanner_speed(g, 1e-4), 0.0);
}

TEST(SpeedLaws, TypeB) {
    EXPECT_DOUBLE_EQ(typeb_speed(1.0), 1.0 / 3.0);
    EXPECT_NEAR(typeb_speed(std::cbrt(3.0)), 1.0, 1e-15);
    EXPECT_THROW(typeb_speed(0.0), DomainError);
    for (double g : {0.1, 1.0, 4.0})
        EXPECT_GT(typeb_speed(g), 0.0);
    EXPECT_NEAR(typeb_contact_slope(1.0, std::exp(-8.0)), 2.0, 1e-15);
}

TEST(TypeBProfile, Examples) {
    const double xi = std::exp(-8.0);
    EXPECT_NEAR(typeb_profile(xi, 1.0 / 3.0), 2.0 * xi, 1e-15);
    EXPECT_NEAR(typeb_profile(xi, 1.0 / 3.0), 6.7093e-4, 1e-8);
    EXPECT_THROW(typeb_profile(1.0, 1.0 / 3.0), DomainError);
    EXPECT_THROW(typeb_profile(0.0, 1.0 / 3.0), DomainError);
    EXPECT_THROW(typeb_profile(0.5, 0.0), DomainError);
    double prev = 0.0;
    for (double x = 1e-2; x > 1e-12; x /= 10) {
        const double slope = typeb_profile(x, 1.0 / 3.0) / x;
        EXPECT_GT(slope, prev);
        prev = slope;
    }
}

TEST(TypeBProfile, ThirdDerivativeByFiniteDifference) {
    // For h = x L^(1/3), L = ln(1/x): h''' = ((1/3) L^(-2/3) - (10/27) L^(-8/3)) / x^2.
    const double xi = std::exp(-8.0), d = 1e-2 * xi, L = 8.0;
    auto f = [](double x) { return typeb_profile(x, 1.0 / 3.0); };
    const double fd = (f(xi + 2 * d) - 2 * f(xi + d) + 2 * f(xi - d) - f(xi - 2 * d)) / (2 * d * d * d);
    const double exact = (std::pow(L, -2.0 / 3.0) / 3.0 - 10.0 / 27.0 * std::pow(L, -8.0 / 3.0)) / (xi * xi);
    EXPECT_NEAR(fd / exact, 1.0, 1e-3);
    EXPECT_NEAR(fd / (std::exp(16.0) / 12.0), 1.0, 0.02);
}

TEST(TypeCMass, Examples) {
    SampledProfile ones{{0.0, 0.5, 1.0, 2.0}, {1.0, 1.0, 1.0, 1.0}};
    std::vector<double> path{0.0, 0.25, 1.0, 1.5};
    auto m = typec_mass(ones, path);
    for (std::size_t k = 0; k < path.size(); ++k)
        EXPECT_NEAR(m[k], path[k], 1e-15);

    std::vector<double> still{0.3, 0.3, 0.3};
    for (double v : typec_mass(ones, still))
        EXPECT_EQ(v, 0.0);

    SampledProfile lin;
    for (int i = 0; i <= 1000; ++i) {
        lin.x.push_back(i * 2e-3);
        lin.h.push_back(i * 2e-3);
    }
    std::vector<double> tau{0.0, 1.0};
    EXPECT_NEAR(typec_mass(lin, tau)[1], 0.5, 1e-6);

    std::vector<double> back{0.5, 0.4};
    EXPECT_THROW(typec_mass(ones, back), DomainError);
}

TEST(TypeCMass, MonotoneAndAdditive) {
    SampledProfile p;
    for (int i = 0; i <= 200; ++i) {
        const double x = i * 0.01;
        p.x.push_back(x);
        p.h.push_back(1.0 + std::sin(3 * x) * std::sin(3 * x));
    }
    std::vector<double> path;
    for (int k = 0; k <= 50; ++k)
        path.push_back(0.2 + 0.03 * k);
    const auto m = typec_mass(p, path);
    for (std::size_t k = 1; k < m.size(); ++k)
        EXPECT_GE(m[k], m[k - 1]);
    // Mass over [a, c] equals mass over [a, b] plus mass over [b, c].
    std::vector<double> ab{0.2, 0.9}, bc{0.9, 1.7}, ac{0.2, 1.7};
    EXPECT_NEAR(typec_mass(p, ab)[1] + typec_mass(p, bc)[1], typec_mass(p, ac)[1], 1e-13);
}
