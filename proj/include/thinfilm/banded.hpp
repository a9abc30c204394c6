#pragma once

// Banded linear algebra for the implicit steps. Factorization is LAPACK's
// partial-pivoting band LU (dgbsv); the border for one extra unknown is
// eliminated here.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <lapacke.h>

namespace thinfilm {

class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku) : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), ab_(std::size_t(ld_) * n, 0.0) {}

    int size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    void clear() { std::fill(ab_.begin(), ab_.end(), 0.0); }

    double& operator()(int i, int j) {
        if (j - i > ku_ || i - j > kl_ || i < 0 || j < 0 || i >= n_ || j >= n_)
            throw std::out_of_range("BandedMatrix: entry outside the band");
        return ab_[std::size_t(kl_ + ku_ + i - j) + std::size_t(j) * ld_];
    }
    double operator()(int i, int j) const { return const_cast<BandedMatrix&>(*this)(i, j); }

    // y = A x
    std::vector<double> multiply(const std::vector<double>& x) const {
        std::vector<double> y(n_, 0.0);
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
                y[i] += (*this)(i, j) * x[j];
        return y;
    }

    // Solves A X = B in place for `nrhs` column-major right-hand sides. The
    // matrix is consumed by the factorization. Returns false if singular.
    bool solve_inplace(std::vector<double>& b, int nrhs) {
        std::vector<lapack_int> ipiv(n_);
        const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, n_, kl_, ku_, nrhs, ab_.data(), ld_, ipiv.data(),
                                              b.data(), n_);
        return info == 0;
    }

private:
    int n_, kl_, ku_, ld_;
    std::vector<double> ab_;
};

// Solves the bordered system
//   [ A  b ] [x]   [r]
//   [ c' d ] [z] = [q]
// with A banded. Returns false if A or the Schur complement is singular.
inline bool solve_bordered(BandedMatrix A, const std::vector<double>& b, const std::vector<double>& c, double d,
                           const std::vector<double>& r, double q, std::vector<double>& x, double& z) {
    const int n = A.size();
    std::vector<double> rhs(std::size_t(2) * n);
    std::copy(r.begin(), r.end(), rhs.begin());
    std::copy(b.begin(), b.end(), rhs.begin() + n);
    if (!A.solve_inplace(rhs, 2))
        return false;
    double cx = 0.0, cy = 0.0;
    for (int i = 0; i < n; ++i) {
        cx += c[i] * rhs[i];
        cy += c[i] * rhs[n + i];
    }
    const double schur = d - cy;
    if (schur == 0.0 || !std::isfinite(schur))
        return false;
    z = (q - cx) / schur;
    x.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        x[i] = rhs[i] - z * rhs[n + i];
    return true;
}

}  // namespace thinfilm
