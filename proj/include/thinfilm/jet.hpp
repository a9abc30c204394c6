#pragma once

// Truncated Taylor series arithmetic. A Jet<N> carries the normalized
// coefficients c[k] = f^(k)(x0) / k! of a function at one point, so composing
// elementary operations on jets gives exact derivatives up to order N.

#include <array>
#include <cmath>

namespace thinfilm {

template <int N>
struct Jet {
    static_assert(N >= 0);
    std::array<double, N + 1> c{};

    Jet() = default;
    Jet(double v) { c[0] = v; }  // NOLINT: constants promote implicitly

    // The independent variable at x0.
    static Jet variable(double x0) {
        Jet j(x0);
        if constexpr (N >= 1)
            j.c[1] = 1.0;
        return j;
    }

    double value() const { return c[0]; }

    // k-th derivative.
    double d(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i)
            f *= i;
        return c[k] * f;
    }
};

template <int N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) {
    for (int k = 0; k <= N; ++k)
        a.c[k] += b.c[k];
    return a;
}

template <int N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) {
    for (int k = 0; k <= N; ++k)
        a.c[k] -= b.c[k];
    return a;
}

template <int N>
Jet<N> operator-(Jet<N> a) {
    for (auto& v : a.c)
        v = -v;
    return a;
}

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> r(0.0);
    for (int k = 0; k <= N; ++k)
        for (int i = 0; i <= k; ++i)
            r.c[k] += a.c[i] * b.c[k - i];
    return r;
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> r(0.0);
    for (int k = 0; k <= N; ++k) {
        double s = a.c[k];
        for (int i = 1; i <= k; ++i)
            s -= b.c[i] * r.c[k - i];
        r.c[k] = s / b.c[0];
    }
    return r;
}

template <int N> Jet<N> operator+(Jet<N> a, double b) { a.c[0] += b; return a; }
template <int N> Jet<N> operator+(double b, Jet<N> a) { a.c[0] += b; return a; }
template <int N> Jet<N> operator-(Jet<N> a, double b) { a.c[0] -= b; return a; }
template <int N> Jet<N> operator-(double b, const Jet<N>& a) { return Jet<N>(b) - a; }
template <int N> Jet<N> operator*(Jet<N> a, double b) { for (auto& v : a.c) v *= b; return a; }
template <int N> Jet<N> operator*(double b, Jet<N> a) { return a * b; }
template <int N> Jet<N> operator/(Jet<N> a, double b) { for (auto& v : a.c) v /= b; return a; }
template <int N> Jet<N> operator/(double b, const Jet<N>& a) { return Jet<N>(b) / a; }

template <int N>
Jet<N> exp(const Jet<N>& a) {
    Jet<N> r(0.0);
    r.c[0] = std::exp(a.c[0]);
    for (int k = 1; k <= N; ++k) {
        double s = 0.0;
        for (int i = 1; i <= k; ++i)
            s += i * a.c[i] * r.c[k - i];
        r.c[k] = s / k;
    }
    return r;
}

template <int N>
Jet<N> log(const Jet<N>& a) {
    Jet<N> r(0.0);
    r.c[0] = std::log(a.c[0]);
    for (int k = 1; k <= N; ++k) {
        double s = k * a.c[k];
        for (int i = 1; i < k; ++i)
            s -= i * r.c[i] * a.c[k - i];
        r.c[k] = s / (k * a.c[0]);
    }
    return r;
}

// a^p for a positive base value and real exponent.
template <int N>
Jet<N> pow(const Jet<N>& a, double p) {
    Jet<N> r(0.0);
    r.c[0] = std::pow(a.c[0], p);
    for (int k = 1; k <= N; ++k) {
        double s = 0.0;
        for (int i = 1; i <= k; ++i)
            s += (p * i - (k - i)) * a.c[i] * r.c[k - i];
        r.c[k] = s / (k * a.c[0]);
    }
    return r;
}

}  // namespace thinfilm
