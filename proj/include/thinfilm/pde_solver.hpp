#pragma once

// Implicit finite-volume solver for h_t + (m(h) h_xxx)_x = 0.
//
// Moving frame: xi = x - s(t) puts the contact point at xi = 0 and the speed
// sdot becomes an unknown, h_t + (m h_xxx - sdot h)_xi = 0 on [0, L].
// Fixed frame: the same operator on [0, L] with slope and zero-flux
// conditions at both walls; contact lines are wherever h vanishes.
//
// Unknowns are the node values h_0..h_N plus one ghost value at each end.
// Slopes live on faces, the Laplacian on nodes and the third derivative on
// faces again (difference of nodal Laplacians), so summation by parts gives
// the discrete energy identity exactly up to the O(dt) backward Euler term.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "thinfilm/banded.hpp"
#include "thinfilm/dual.hpp"
#include "thinfilm/errors.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/model.hpp"

namespace thinfilm {

enum class Frame { moving, fixed };
enum class FarField { zero_curvature, wedge_match };
enum class FaceAverage { arithmetic, geometric };

struct GridSpec {
    int N = 1024;
    double L = 4.0;
    bool graded = false;
    double first = 0.0;  // first spacing when graded; 0 picks epsilon / 4
    double ratio = 1.05;

    Grid build(double epsilon) const {
        if (!graded)
            return Grid::make_uniform(N, L);
        const double d0 = first > 0.0 ? first : (epsilon > 0.0 ? 0.25 * epsilon : L / N);
        return Grid::make_graded(L, N, d0, ratio);
    }
};

// Named initial data with numeric parameters; missing keys take defaults.
struct InitialProfile {
    std::string kind = "wedge";
    std::map<std::string, double> params;

    double get(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
};

struct SolverConfig {
    SlipParameters p;
    GridSpec grid;
    double dt0 = 1e-4;
    double dt_min = 1e-12;
    double dt_max = 1e-2;
    double newton_tol = 1e-10;
    int newton_max_iter = 12;
    Frame frame = Frame::moving;
    FarField far_field = FarField::zero_curvature;
    double far_gamma = 1.0;  // slope imposed by the wedge-match far field
    FaceAverage face_average = FaceAverage::arithmetic;
    double wall_slope_left = 0.0;  // fixed frame
    double wall_slope_right = 0.0;
    double contact_threshold = 1e-3;  // fixed frame: level set that tracks the contact line
    InitialProfile initial;
    int snapshot_every = 0;  // 0 keeps only the first and last state

    void validate() const {
        p.validate();
        if (grid.N < 16)
            throw ConfigError("grid.N", "must be at least 16");
        if (!(grid.L > 0.0))
            throw ConfigError("grid.L", "must be positive");
        if (!(grid.ratio >= 1.0 && grid.ratio <= 1.05))
            throw ConfigError("grid.ratio", "must lie in [1, 1.05]");
        if (!(dt_min > 0.0))
            throw ConfigError("time.dt_min", "must be positive");
        if (!(dt_min <= dt_max))
            throw ConfigError("time.dt_min", "dt_min must not exceed dt_max");
        if (!(dt_min <= dt0 && dt0 <= dt_max))
            throw ConfigError("time.dt0", "must lie in [dt_min, dt_max]");
        if (!(newton_tol > 0.0))
            throw ConfigError("newton.tol", "must be positive");
        if (newton_max_iter < 1)
            throw ConfigError("newton.max_iter", "must be at least 1");
        if (frame == Frame::moving && p.theta == 0.0 && p.epsilon == 0.0)
            throw ConfigError("model.epsilon", "complete wetting in the moving frame needs slip");
    }
};

struct State {
    std::vector<double> h;  // nodes 0..N
    double ghost_left = 0.0;
    double ghost_right = 0.0;
    double s = 0.0;
    double t = 0.0;
    double sdot = 0.0;
};

struct Diagnostics {
    double t = 0.0;
    double s = 0.0;
    double sdot = 0.0;
    double energy = 0.0;
    double dissipation = 0.0;
    double mass = 0.0;
    double energy_residual = 0.0;
    double far_flux = 0.0;
};

struct StepResult {
    bool accepted = false;
    State next;
    int iterations = 0;
    std::string reason;  // why a step was rejected
};

struct Trajectory {
    std::vector<State> states;
    std::vector<Diagnostics> diagnostics;
    SolverConfig config;
    Grid grid;
    int rejected_steps = 0;
};

// Hard failure of the adaptive driver; carries everything computed so far.
struct SimulationAborted : SolverFailure {
    SimulationAborted(const std::string& what, Trajectory partial_)
        : SolverFailure(what), partial(std::move(partial_)) {}
    Trajectory partial;
};

// ---------------------------------------------------------------------------
// Initial data

inline std::vector<double> initial_heights(const SolverConfig& cfg, const Grid& g) {
    const InitialProfile& ip = cfg.initial;
    const bool moving = cfg.frame == Frame::moving;
    const double s0 = moving ? 0.0 : ip.get("s0", 0.0);
    const int N = g.N();
    std::vector<double> h(N + 1, 0.0);

    // Wedge of slope gamma whose contact slope is blended to theta over a
    // length ell; theta defaults to gamma in the fixed frame.
    auto wedge = [&](double xi, double gamma, double theta, double ell) {
        if (xi <= 0.0)
            return 0.0;
        return gamma * xi + (theta - gamma) * ell * (1.0 - std::exp(-xi / ell));
    };

    if (ip.kind == "wedge" || ip.kind == "wedge_bump") {
        const double gamma = ip.get("gamma", cfg.far_field == FarField::wedge_match ? cfg.far_gamma : 1.0);
        const double theta = moving ? cfg.p.theta : ip.get("theta", gamma);
        const double ell = ip.get("ell", 0.1);
        const double amp = ip.kind == "wedge_bump" ? ip.get("amp", 0.2) : 0.0;
        const double c = ip.get("center", 1.0);
        const double w = ip.get("width", 0.3);
        // Zero contact slope: the complete-wetting contact region grows like
        // xi^(3/2), here over a length ell0 of a few slip lengths.
        const double ell0 = ip.get("ell0", 10.0 * std::max(cfg.p.epsilon, 1e-4));
        for (int i = 0; i <= N; ++i) {
            const double xi = g.x[i] - s0;
            double v = theta == 0.0 && xi > 0.0 ? gamma * xi * std::sqrt(xi / (xi + ell0))
                                                : wedge(xi, gamma, theta, ell);
            if (xi > 0.0 && amp != 0.0)
                v += amp * (xi / c) * (xi / c) * std::exp(-((xi - c) / w) * ((xi - c) / w));
            h[i] = v;
        }
    } else if (ip.kind == "typeb_cutoff") {
        // (3 sdot)^(1/3) xi ln(xc / (xi + d))^(1/3), with d chosen so the
        // contact slope equals theta, frozen at its maximum beyond the peak.
        const double sdot = ip.get("sdot", 1.0 / 3.0);
        const double xc = ip.get("xc", g.L());
        const double theta = cfg.p.theta;
        if (!(theta > 0.0 && sdot > 0.0))
            throw ConfigError("initial.sdot", "typeb_cutoff needs theta > 0 and sdot > 0");
        const double d = xc * std::exp(-theta * theta * theta / (3.0 * sdot));
        double peak = 0.0;
        for (int i = 0; i <= N; ++i) {
            const double xi = g.x[i] - s0;
            double v = 0.0;
            if (xi > 0.0) {
                const double lg = std::log(xc / (xi + d));
                v = lg > 0.0 ? std::cbrt(3.0 * sdot) * xi * std::cbrt(lg) : 0.0;
            }
            peak = std::max(peak, v);
            h[i] = peak;
        }
    } else if (ip.kind == "cap") {
        // theta xi (1 - xi / (2 L)): contact slope theta, flat at the far end.
        const double theta = moving ? cfg.p.theta : ip.get("theta", 1.0);
        const double L = g.L() - s0;
        for (int i = 0; i <= N; ++i) {
            const double xi = g.x[i] - s0;
            h[i] = xi > 0.0 ? theta * xi * (1.0 - xi / (2.0 * L)) : 0.0;
        }
    } else if (ip.kind == "film") {
        // Positive film mean + amp cos(k pi x / L), slope-free at both walls.
        const double mean = ip.get("mean", 1.0);
        const double amp = ip.get("amp", 0.3);
        const double k = ip.get("mode", 1.0);
        for (int i = 0; i <= N; ++i)
            h[i] = mean + amp * std::cos(k * std::numbers::pi * g.x[i] / g.L());
    } else {
        throw ConfigError("initial.kind", "unknown initial profile '" + ip.kind +
                                              "' (wedge, wedge_bump, typeb_cutoff, cap, film)");
    }
    for (double& v : h)
        v = std::max(v, 0.0);
    if (moving)
        h[0] = 0.0;
    return h;
}

// ---------------------------------------------------------------------------
// Discrete operators over an indexable sequence of node values. `node(i)` is
// valid for i in [-1, N+1]; indices -1 and N+1 are the ghosts.

template <class T, class NodeFn>
struct Stencil {
    const Grid& g;
    NodeFn node;

    T slope(int j) const { return (node(j) - node(j - 1)) / g.gap(j); }  // face left of node j
    double volume(int i) const { return 0.5 * (g.gap(i) + g.gap(i + 1)); }
    T laplacian(int i) const { return (slope(i + 1) - slope(i)) / volume(i); }
    T third(int j) const { return (laplacian(j) - laplacian(j - 1)) / g.gap(j); }
};

template <class T>
T mobility_ext(const T& h, double c_slip, double n, bool slip) {
    using std::abs, std::pow;
    const T a = abs(h);
    T m = a * a * a;
    if (slip)
        m = m + c_slip * pow(a, n);
    return m;
}

class Solver {
public:
    static constexpr int kBand = 3;
    static constexpr int kPartials = 2 * kBand + 2;  // window columns + sdot

    explicit Solver(SolverConfig cfg) : cfg_(std::move(cfg)) {
        cfg_.validate();
        grid_ = cfg_.grid.build(cfg_.p.epsilon);
        slip_ = cfg_.p.epsilon > 0.0;
        c_slip_ = slip_ ? std::pow(cfg_.p.epsilon, 3.0 - cfg_.p.n) : 0.0;
    }

    const SolverConfig& config() const { return cfg_; }
    const Grid& grid() const { return grid_; }
    int unknowns() const { return grid_.N() + 3; }
    bool moving() const { return cfg_.frame == Frame::moving; }

    State initial_state() const {
        State st;
        st.h = initial_heights(cfg_, grid_);
        const int N = grid_.N();
        const double d0 = grid_.gap(1), dN = grid_.gap(N);
        const double left_slope = moving() ? cfg_.p.theta : cfg_.wall_slope_left;
        st.ghost_left = st.h[1] - 2.0 * d0 * left_slope;
        if (!moving() || cfg_.far_field == FarField::wedge_match) {
            const double right_slope = moving() ? cfg_.far_gamma : cfg_.wall_slope_right;
            st.ghost_right = st.h[N - 1] + 2.0 * dN * right_slope;
        } else {
            st.ghost_right = 2.0 * st.h[N] - st.h[N - 1];
        }
        st.s = moving() ? 0.0 : contact_position(st.h);
        return st;
    }

    // Fixed frame: first crossing of the threshold level set from the left.
    double contact_position(const std::vector<double>& h) const {
        const double thr = cfg_.contact_threshold;
        if (h[0] >= thr)
            return grid_.x[0];
        for (int i = 1; i <= grid_.N(); ++i)
            if (h[i] >= thr) {
                const double w = (thr - h[i - 1]) / (h[i] - h[i - 1]);
                return grid_.x[i - 1] + w * (grid_.x[i] - grid_.x[i - 1]);
            }
        return grid_.L();
    }

    // Residual of matrix row r. `u(k)` returns unknown k (0 = left ghost,
    // k = i + 1 node i, N + 2 = right ghost); `old` holds the previous nodes.
    template <class T, class U>
    T row(int r, const U& u, const T& sdot, const std::vector<double>& old, double dt) const {
        const int N = grid_.N();
        auto node = [&](int i) -> T { return u(i + 1); };
        const Stencil<T, decltype(node)> st{grid_, node};
        auto face_mob = [&](int j) -> T {
            const T ma = mobility_ext(node(j - 1), c_slip_, cfg_.p.n, slip_);
            const T mb = mobility_ext(node(j), c_slip_, cfg_.p.n, slip_);
            if (cfg_.face_average == FaceAverage::arithmetic)
                return 0.5 * (ma + mb);
            using std::sqrt;
            const T prod = ma * mb;
            return value_of(prod) > 0.0 ? sqrt(prod) : T(0.0);
        };
        auto flux = [&](int j) -> T {
            T f = face_mob(j) * st.third(j);
            if (moving())
                f = f - sdot * 0.5 * (node(j - 1) + node(j));
            return f;
        };

        if (moving()) {
            if (r == 0)
                return flux(1);
            if (r == 1)
                return node(0);
            if (r <= N) {
                const int i = r - 1;
                return st.volume(i) * (node(i) - old[i]) / dt + flux(i + 1) - flux(i);
            }
            if (r == N + 1)
                return st.laplacian(N);
            if (cfg_.far_field == FarField::zero_curvature)
                return st.laplacian(N - 1);
            return (node(N + 1) - node(N - 1)) / (2.0 * grid_.gap(N)) - cfg_.far_gamma;
        }
        if (r == 0)
            return (node(1) - node(-1)) / (2.0 * grid_.gap(1)) - cfg_.wall_slope_left;
        if (r == 1)
            return 0.5 * grid_.gap(1) * (node(0) - old[0]) / dt + flux(1);
        if (r <= N) {
            const int i = r - 1;
            return st.volume(i) * (node(i) - old[i]) / dt + flux(i + 1) - flux(i);
        }
        if (r == N + 1)
            return 0.5 * grid_.gap(N) * (node(N) - old[N]) / dt - flux(N);
        return (node(N + 1) - node(N - 1)) / (2.0 * grid_.gap(N)) - cfg_.wall_slope_right;
    }

    // Moving frame: contact slope condition, the border row closing sdot.
    double contact_slope_residual(const std::vector<double>& x) const {
        return (x[2] - x[0]) / (2.0 * grid_.gap(1)) - cfg_.p.theta;
    }

    // Residual vector and banded Jacobian at unknowns x, speed z.
    void assemble(const std::vector<double>& x, double z, const std::vector<double>& old, double dt,
                  std::vector<double>& R, BandedMatrix& A, std::vector<double>& dz) const {
        using D = Dual<kPartials>;
        const int M = unknowns();
        R.assign(M, 0.0);
        dz.assign(M, 0.0);
        A.clear();
        for (int r = 0; r < M; ++r) {
            const int w0 = std::max(0, r - kBand);
            const int w1 = std::min(M - 1, r + kBand);
            auto u = [&](int k) -> D {
                if (k < w0 || k > w1)
                    throw std::logic_error("residual row reads outside its band");
                return D::seed(x[k], k - w0);
            };
            const D sd = D::seed(z, kPartials - 1);
            const D res = row<D>(r, u, sd, old, dt);
            R[r] = res.v;
            for (int k = w0; k <= w1; ++k)
                if (res.d[k - w0] != 0.0)
                    A(r, k) = res.d[k - w0];
            dz[r] = res.d[kPartials - 1];
        }
    }

    StepResult step(const State& s0, double dt) const {
        StepResult out;
        const int N = grid_.N();
        const int M = unknowns();
        std::vector<double> x(M);
        x[0] = s0.ghost_left;
        for (int i = 0; i <= N; ++i)
            x[i + 1] = s0.h[i];
        x[M - 1] = s0.ghost_right;
        double z = moving() ? s0.sdot : 0.0;

        std::vector<double> R, dz, c(M, 0.0), dx;
        if (moving()) {
            c[0] = -1.0 / (2.0 * grid_.gap(1));
            c[2] = 1.0 / (2.0 * grid_.gap(1));
        }
        BandedMatrix A(M, kBand, kBand);
        bool converged = false;
        for (int it = 1; it <= cfg_.newton_max_iter && !converged; ++it) {
            out.iterations = it;
            assemble(x, z, s0.h, dt, R, A, dz);
            double step_z = 0.0;
            std::vector<double> rhs(R.size());
            for (int k = 0; k < M; ++k)
                rhs[k] = -R[k];
            if (moving()) {
                if (!solve_bordered(A, dz, c, 0.0, rhs, -contact_slope_residual(x), dx, step_z)) {
                    out.reason = "singular Newton system";
                    return out;
                }
            } else {
                if (!A.solve_inplace(rhs, 1)) {
                    out.reason = "singular Newton system";
                    return out;
                }
                dx = std::move(rhs);
            }
            double hmax = 0.0, dmax = 0.0;
            for (int k = 0; k < M; ++k) {
                x[k] += dx[k];
                hmax = std::max(hmax, std::abs(x[k]));
                dmax = std::max(dmax, std::abs(dx[k]));
            }
            z += step_z;
            if (!std::isfinite(hmax) || !std::isfinite(z)) {
                out.reason = "non-finite Newton iterate";
                return out;
            }
            converged = dmax <= cfg_.newton_tol * std::max(1.0, hmax) &&
                        std::abs(step_z) <= cfg_.newton_tol * std::max(1.0, std::abs(z));
        }
        if (!converged) {
            out.reason = "Newton did not converge";
            return out;
        }
        State& nx = out.next;
        nx.h.assign(x.begin() + 1, x.begin() + 1 + N + 1);
        nx.ghost_left = x[0];
        nx.ghost_right = x[M - 1];
        if (moving())
            nx.h[0] = 0.0;  // the contact row holds this up to rounding
        for (int i = 0; i <= N; ++i)
            if (nx.h[i] < 0.0) {
                out.reason = "negative height at node " + std::to_string(i);
                return out;
            }
        nx.t = s0.t + dt;
        nx.sdot = z;
        nx.s = moving() ? s0.s + dt * z : contact_position(nx.h);
        out.accepted = true;
        return out;
    }

    // ----- diagnostics ------------------------------------------------------

    template <class F>
    auto with_stencil(const State& st, F&& f) const {
        const int N = grid_.N();
        auto node = [&](int i) -> double {
            if (i < 0)
                return st.ghost_left;
            if (i > N)
                return st.ghost_right;
            return st.h[i];
        };
        const Stencil<double, decltype(node)> s{grid_, node};
        return f(s);
    }

    double face_mobility(const State& st, int j) const {
        const double ma = mobility_ext(st.h[j - 1], c_slip_, cfg_.p.n, slip_);
        const double mb = mobility_ext(st.h[j], c_slip_, cfg_.p.n, slip_);
        if (cfg_.face_average == FaceAverage::arithmetic)
            return 0.5 * (ma + mb);
        return ma * mb > 0.0 ? std::sqrt(ma * mb) : 0.0;
    }

    // 1/2 sum over faces of gap * slope^2, plus theta^2/2 over the wetted
    // length and, in the fixed frame, the work of the wall slope conditions.
    double energy(const State& st) const {
        const int N = grid_.N();
        return with_stencil(st, [&](const auto& s) {
            double e = 0.0, wet = 0.0;
            for (int j = 1; j <= N; ++j) {
                const double gj = s.slope(j);
                e += 0.5 * grid_.gap(j) * gj * gj;
                if (moving() || (st.h[j - 1] > 0.0 && st.h[j] > 0.0))
                    wet += grid_.gap(j);
            }
            e += 0.5 * cfg_.p.theta * cfg_.p.theta * wet;
            if (!moving())
                e += cfg_.wall_slope_left * st.h[0] - cfg_.wall_slope_right * st.h[N];
            return e;
        });
    }

    double dissipation(const State& st) const {
        const int N = grid_.N();
        return with_stencil(st, [&](const auto& s) {
            double d = 0.0;
            for (int j = 1; j <= N; ++j) {
                const double t3 = s.third(j);
                d += grid_.gap(j) * face_mobility(st, j) * t3 * t3;
            }
            return d;
        });
    }

    // Trapezoid weights: half cells at both ends. In the fixed frame this is
    // the exactly conserved discrete mass.
    double mass(const State& st) const {
        const int N = grid_.N();
        double m = 0.5 * grid_.gap(1) * st.h[0] + 0.5 * grid_.gap(N) * st.h[N];
        for (int i = 1; i < N; ++i)
            m += 0.5 * (grid_.gap(i) + grid_.gap(i + 1)) * st.h[i];
        return m;
    }

    // Flux leaving through the far end (moving frame) or right wall (zero).
    double far_flux(const State& st) const {
        if (!moving())
            return 0.0;
        const int N = grid_.N();
        return with_stencil(st, [&](const auto& s) {
            return face_mobility(st, N) * s.third(N) - st.sdot * 0.5 * (st.h[N - 1] + st.h[N]);
        });
    }

    // Energy exchanged through the boundaries over one step ending in `next`.
    // Contact: sdot/2 * slope^2 at the contact face. Far end (moving frame):
    // slope * h_t + h_xx * m h_xxx - sdot/2 * slope^2.
    double boundary_power(const State& prev, const State& next, double dt) const {
        if (!moving())
            return 0.0;
        const int N = grid_.N();
        return with_stencil(next, [&](const auto& s) {
            const double g1 = s.slope(1), gN = s.slope(N);
            const double contact = 0.5 * next.sdot * g1 * g1;
            const double far = gN * (next.h[N] - prev.h[N]) / dt +
                               s.laplacian(N - 1) * face_mobility(next, N) * s.third(N) -
                               0.5 * next.sdot * gN * gN;
            return contact + far;
        });
    }

    Diagnostics diagnose(const State& st) const {
        Diagnostics d;
        d.t = st.t;
        d.s = st.s;
        d.sdot = st.sdot;
        d.energy = energy(st);
        d.dissipation = dissipation(st);
        d.mass = mass(st);
        d.far_flux = far_flux(st);
        return d;
    }

    Diagnostics diagnose(const State& prev, const State& next) const {
        Diagnostics d = diagnose(next);
        const double dt = next.t - prev.t;
        const double e_prev = energy(prev);
        d.energy_residual =
            std::abs((d.energy - e_prev) / dt + d.dissipation - boundary_power(prev, next, dt));
        return d;
    }

private:
    SolverConfig cfg_;
    Grid grid_;
    bool slip_ = true;
    double c_slip_ = 0.0;
};

// ---------------------------------------------------------------------------
// Adaptive driver: halve dt on rejection, grow by 1.2 after five accepted
// steps in a row, stay within [dt_min, dt_max].

inline Trajectory simulate(const SolverConfig& cfg, double t_end, State* start = nullptr) {
    const Solver solver(cfg);
    Trajectory tr;
    tr.config = cfg;
    tr.grid = solver.grid();
    State st = start ? *start : solver.initial_state();
    tr.states.push_back(st);
    tr.diagnostics.push_back(solver.diagnose(st));
    if (!(t_end >= st.t))
        throw DomainError("simulate: t_end precedes the initial time");

    double dt = cfg.dt0;
    int streak = 0;
    long accepted = 0;
    const double t_tol = 1e-12 * std::max(1.0, std::abs(t_end));
    while (t_end - st.t > t_tol) {
        const double h = std::min(dt, t_end - st.t);
        StepResult r = solver.step(st, h);
        if (!r.accepted) {
            ++tr.rejected_steps;
            streak = 0;
            dt = 0.5 * h;
            if (dt < cfg.dt_min) {
                if (tr.states.back().t != st.t)
                    tr.states.push_back(st);
                throw SimulationAborted("time step fell below dt_min at t = " + std::to_string(st.t) + " (" +
                                            r.reason + ")",
                                        std::move(tr));
            }
            continue;
        }
        tr.diagnostics.push_back(solver.diagnose(st, r.next));
        st = std::move(r.next);
        ++accepted;
        if (cfg.snapshot_every > 0 && accepted % cfg.snapshot_every == 0)
            tr.states.push_back(st);
        if (++streak >= 5) {
            dt = std::min(1.2 * dt, cfg.dt_max);
            streak = 0;
        }
        dt = std::max(dt, cfg.dt_min);
    }
    if (tr.states.back().t != st.t)
        tr.states.push_back(st);
    return tr;
}

// ---------------------------------------------------------------------------
// Post-processing

struct EnergyBalance {
    std::vector<double> residual;
    double max = 0.0;
    double mean = 0.0;
};

inline EnergyBalance check_energy_balance(const std::vector<Diagnostics>& diag) {
    if (diag.size() < 2)
        throw DomainError("check_energy_balance: need at least two states");
    EnergyBalance b;
    for (std::size_t k = 1; k < diag.size(); ++k) {
        const double r = diag[k].energy_residual;
        b.residual.push_back(r);
        b.max = std::max(b.max, r);
        b.mean += r;
    }
    b.mean /= double(b.residual.size());
    return b;
}

inline EnergyBalance check_energy_balance(const Trajectory& tr) { return check_energy_balance(tr.diagnostics); }

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw DomainError("least_squares: need matching samples, at least two");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw DomainError("least_squares: degenerate design");
    LineFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - f.intercept - f.slope * x[i];
        sse += e * e;
    }
    f.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    f.stderr_slope = n > 2 ? std::sqrt(sse / double(n - 2) / sxx) : 0.0;
    return f;
}

struct SpeedFit {
    double sdot = 0.0;
    double stderr = 0.0;
};

// Least-squares slope of s(t) over the diagnostics with t in [t0, t1].
inline SpeedFit extract_contact_speed(const std::vector<Diagnostics>& diag, double t0, double t1) {
    std::vector<double> t, s;
    for (const auto& d : diag)
        if (d.t >= t0 && d.t <= t1) {
            t.push_back(d.t);
            s.push_back(d.s);
        }
    if (t.size() < 8)
        throw DomainError("extract_contact_speed: fewer than 8 samples in the window");
    const LineFit f = least_squares(t, s);
    return {f.slope, f.stderr_slope};
}

inline SpeedFit extract_contact_speed(const Trajectory& tr, double t0, double t1) {
    return extract_contact_speed(tr.diagnostics, t0, t1);
}

// Slope of h through the origin fitted on xi in [a, b].
inline double measure_outer_slope(const std::vector<double>& xi, const std::vector<double>& h, double a, double b) {
    if (!(0.0 < a && a < b))
        throw DomainError("measure_outer_slope: need 0 < a < b");
    if (xi.empty() || b > xi.back() || a < xi.front())
        throw DomainError("measure_outer_slope: window outside the grid");
    double sxy = 0.0, sxx = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < xi.size(); ++i)
        if (xi[i] >= a && xi[i] <= b) {
            sxy += xi[i] * h[i];
            sxx += xi[i] * xi[i];
            ++n;
        }
    if (n < 2)
        throw DomainError("measure_outer_slope: window holds fewer than two nodes");
    return sxy / sxx;
}

inline double default_slope_window_start(double epsilon, double theta) {
    return 10.0 * std::sqrt(epsilon) * std::max(1.0, theta);
}
inline double default_slope_window_end(double L) { return std::min(0.1 * L, 1.0); }

}  // namespace thinfilm
