#pragma once

// Node layout on [0, L]: nodes x[0] = 0 < ... < x[N] = L, plus one ghost node
// beyond each end at the mirrored spacing.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "thinfilm/errors.hpp"

namespace thinfilm {

struct Grid {
    std::vector<double> x;  // N + 1 physical nodes

    int N() const { return int(x.size()) - 1; }
    double L() const { return x.back(); }

    // Spacing to the left of node j, j = 0..N+1 (j = 0 and N + 1 are the ghost gaps).
    double gap(int j) const {
        if (j <= 0)
            return x[1] - x[0];
        if (j > N())
            return x[N()] - x[N() - 1];
        return x[j] - x[j - 1];
    }

    double dx_min() const {
        double d = gap(1);
        for (int j = 2; j <= N(); ++j)
            d = std::min(d, gap(j));
        return d;
    }
    double dx_max() const {
        double d = gap(1);
        for (int j = 2; j <= N(); ++j)
            d = std::max(d, gap(j));
        return d;
    }
    bool uniform() const { return dx_max() - dx_min() <= 1e-12 * dx_max(); }

    static Grid make_uniform(int N, double L) {
        if (N < 16)
            throw DomainError("grid: need at least 16 cells, got " + std::to_string(N));
        if (!(L > 0.0))
            throw DomainError("grid: length must be positive");
        Grid g;
        g.x.resize(N + 1);
        for (int i = 0; i <= N; ++i)
            g.x[i] = L * double(i) / N;
        return g;
    }

    // Geometric grading from spacing `first` at the origin by `ratio` per cell,
    // capped at the uniform spacing L / N_far.
    static Grid make_graded(double L, int N_far, double first, double ratio) {
        if (N_far < 16)
            throw DomainError("grid: need at least 16 cells, got " + std::to_string(N_far));
        if (!(L > 0.0 && first > 0.0))
            throw DomainError("grid: length and first spacing must be positive");
        if (!(ratio >= 1.0 && ratio <= 1.05))
            throw DomainError("grid: grading ratio must lie in [1, 1.05]");
        const double cap = L / N_far;
        if (first >= cap)
            return make_uniform(N_far, L);
        Grid g;
        g.x.push_back(0.0);
        double d = first;
        while (g.x.back() + d < L - 0.5 * std::min(d * ratio, cap)) {
            g.x.push_back(g.x.back() + d);
            d = std::min(d * ratio, cap);
        }
        g.x.push_back(L);
        return g;
    }
};

}  // namespace thinfilm
