#pragma once

// Adaptive quadrature front-end. Backed by Boost's adaptive Gauss-Kronrod;
// the log-variable form is used for integrands spread over many decades.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace thinfilm::quad {

struct Options {
    double rel_tol = 1e-13;
    unsigned max_depth = 15;
};

template <class F>
double integrate(F&& f, double a, double b, Options opt = {}) {
    if (a == b)
        return 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double err = 0.0;
    return GK::integrate(f, a, b, opt.max_depth, opt.rel_tol, &err);
}

// For integrands with an integrable endpoint singularity. f is never
// evaluated at the endpoints themselves.
template <class F>
double integrate_singular(F&& f, double a, double b, Options opt = {}) {
    if (a == b)
        return 0.0;
    // Building the abscissa tables is expensive; one per thread.
    static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
    return ts.integrate(f, a, b, opt.rel_tol);
}

// Integral of f over [a,b], 0 < a <= b, evaluated in u = ln x. The interval
// is split per decade so each panel sees a mildly varying integrand.
template <class F>
double integrate_log(F&& f, double a, double b, Options opt = {}) {
    if (!(a > 0.0 && b >= a))
        throw std::domain_error("integrate_log: need 0 < a <= b");
    if (a == b)
        return 0.0;
    const double ua = std::log(a), ub = std::log(b);
    auto g = [&](double u) {
        const double x = std::exp(u);
        return f(x) * x;
    };
    const int panels = std::max(1, int(std::ceil((ub - ua) / std::log(10.0))));
    const double w = (ub - ua) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k)
        sum += integrate(g, ua + k * w, k + 1 == panels ? ub : ua + (k + 1) * w, opt);
    return sum;
}

}  // namespace thinfilm::quad
