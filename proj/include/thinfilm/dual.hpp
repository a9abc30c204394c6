#pragma once

// Forward-mode dual numbers with a fixed number of partials. Used to build
// exact Jacobian rows of the discrete residual from the same code that
// evaluates it.

#include <array>
#include <cmath>

namespace thinfilm {

template <int K>
struct Dual {
    double v = 0.0;
    std::array<double, K> d{};

    Dual() = default;
    Dual(double value) : v(value) {}  // NOLINT: constants promote implicitly
    static Dual seed(double value, int k) {
        Dual r(value);
        r.d[k] = 1.0;
        return r;
    }
};

template <int K>
Dual<K> operator+(Dual<K> a, const Dual<K>& b) {
    a.v += b.v;
    for (int k = 0; k < K; ++k)
        a.d[k] += b.d[k];
    return a;
}
template <int K>
Dual<K> operator-(Dual<K> a, const Dual<K>& b) {
    a.v -= b.v;
    for (int k = 0; k < K; ++k)
        a.d[k] -= b.d[k];
    return a;
}
template <int K>
Dual<K> operator-(Dual<K> a) {
    a.v = -a.v;
    for (auto& x : a.d)
        x = -x;
    return a;
}
template <int K>
Dual<K> operator*(const Dual<K>& a, const Dual<K>& b) {
    Dual<K> r(a.v * b.v);
    for (int k = 0; k < K; ++k)
        r.d[k] = a.d[k] * b.v + a.v * b.d[k];
    return r;
}
template <int K>
Dual<K> operator/(const Dual<K>& a, const Dual<K>& b) {
    Dual<K> r(a.v / b.v);
    for (int k = 0; k < K; ++k)
        r.d[k] = (a.d[k] - r.v * b.d[k]) / b.v;
    return r;
}
template <int K> Dual<K> operator+(Dual<K> a, double b) { a.v += b; return a; }
template <int K> Dual<K> operator+(double b, Dual<K> a) { a.v += b; return a; }
template <int K> Dual<K> operator-(Dual<K> a, double b) { a.v -= b; return a; }
template <int K> Dual<K> operator-(double b, const Dual<K>& a) { return Dual<K>(b) - a; }
template <int K> Dual<K> operator*(Dual<K> a, double b) { a.v *= b; for (auto& x : a.d) x *= b; return a; }
template <int K> Dual<K> operator*(double b, Dual<K> a) { return a * b; }
template <int K> Dual<K> operator/(Dual<K> a, double b) { a.v /= b; for (auto& x : a.d) x /= b; return a; }

template <int K>
Dual<K> abs(Dual<K> a) {
    return a.v < 0.0 ? -a : a;
}

// a^p for a >= 0. The derivative is taken as 0 at a = 0, which is exact for
// p > 1 and the one-sided convention used for the mobility otherwise.
template <int K>
Dual<K> pow(const Dual<K>& a, double p) {
    Dual<K> r(std::pow(a.v, p));
    const double dp = a.v == 0.0 ? 0.0 : p * std::pow(a.v, p - 1.0);
    for (int k = 0; k < K; ++k)
        r.d[k] = dp * a.d[k];
    return r;
}

template <int K>
Dual<K> sqrt(const Dual<K>& a) {
    Dual<K> r(std::sqrt(a.v));
    const double dp = a.v == 0.0 ? 0.0 : 0.5 / r.v;
    for (int k = 0; k < K; ++k)
        r.d[k] = dp * a.d[k];
    return r;
}

inline double value_of(double x) { return x; }
template <int K>
double value_of(const Dual<K>& x) {
    return x.v;
}

}  // namespace thinfilm
