// thinfilm: runs, sweeps, inner ODE solves and checks from the command line.
//
// Exit codes: 0 ok, 2 usage or config error, 3 solver failure, 4 check failed.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "thinfilm.hpp"

namespace fs = std::filesystem;
using namespace thinfilm;

namespace {

enum Exit { ok = 0, usage = 2, solver = 3, check_failed = 4 };

struct Globals {
    std::string config;
    std::string out;
    bool quiet = false;
    int threads = 1;
};

// Collects the files a command writes so the manifest can list them.
struct Output {
    fs::path dir;
    std::vector<std::string> files;
    nlohmann::json results = nlohmann::json::object();

    void write(const std::string& name, const std::string& text) {
        io::write_text(dir / name, text);
        files.push_back(name);
    }
};

fs::path output_dir(const Globals& g, const std::string& command) {
    if (!g.out.empty())
        return g.out;
    if (const char* env = std::getenv("THINFILM_OUT"))
        return fs::path(env) / command;
    return fs::path("thinfilm_out") / command;
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> v;
    std::stringstream ss(s);
    for (std::string f; std::getline(ss, f, ',');) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(f, &used));
            if (used != f.size())
                throw std::invalid_argument(f);
        } catch (const std::exception&) {
            throw ConfigError(key, "not a number: '" + f + "'");
        }
    }
    if (v.empty())
        throw ConfigError(key, "empty list");
    return v;
}

class Command {
public:
    Command(const Globals& g, std::string name) : g_(g), name_(std::move(name)) {}

    // Runs `body` and maps exceptions to exit codes; always writes a manifest
    // once the output directory exists.
    template <class F>
    int operator()(F&& body) {
        const auto t0 = std::chrono::steady_clock::now();
        int status = ok;
        try {
            out_.dir = output_dir(g_, name_);
            fs::create_directories(out_.dir);
            status = body(out_);
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            status = usage;
        } catch (const DomainError& e) {
            std::cerr << "invalid input: " << e.what() << "\n";
            status = usage;
        } catch (const RegimeError& e) {
            std::cerr << "invalid input: " << e.what() << "\n";
            status = usage;
        } catch (const SimulationAborted& e) {
            std::cerr << "solver failure: " << e.what() << "\n";
            status = solver;
        } catch (const std::exception& e) {
            std::cerr << "failure: " << e.what() << "\n";
            status = solver;
        }
        if (!out_.dir.empty() && fs::exists(out_.dir)) {
            io::Manifest m;
            m.command = name_;
            m.config_path = g_.config;
            m.out_dir = out_.dir;
            m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            m.exit_status = status;
            m.files = out_.files;
            m.extra = out_.results;
            try {
                io::write_manifest(m);
            } catch (const std::exception& e) {
                std::cerr << "cannot write manifest: " << e.what() << "\n";
            }
        }
        return status;
    }

private:
    const Globals& g_;
    std::string name_;
    Output out_;
};

RunConfig load_or_default(const Globals& g) {
    return g.config.empty() ? RunConfig{} : load_config(g.config);
}

void say(const Globals& g, const std::string& s) {
    if (!g.quiet)
        std::cout << s << "\n";
}

std::string inner_csv(const InnerSolution& s, const char* var) {
    std::string t = fmt::format("# schema thinfilm-inner/1\n{0},H,H_1,H_2\n", var);
    for (std::size_t i = 0; i < s.y.size(); ++i)
        t += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", s.y[i], s.H[i], s.H1[i], s.H2[i]);
    return t;
}

std::string verdict(bool pass) { return pass ? "pass" : "FAIL"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thin-film contact-line solver and asymptotics checks"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "YAML or JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "output directory (default $THINFILM_OUT/<command>)");
    app.add_flag("--quiet", g.quiet, "no summary on stdout");
    app.add_option("--threads", g.threads, "parallel sweep members")->check(CLI::PositiveNumber);

    int code = ok;

    // run ---------------------------------------------------------------
    auto* run = app.add_subcommand("run", "simulate one configuration");
    std::optional<double> run_t_end;
    run->add_option("--t-end", run_t_end, "override time.t_end");
    run->callback([&] {
        code = Command(g, "run")([&](Output& out) {
            RunConfig rc = load_or_default(g);
            if (run_t_end)
                rc.t_end = *run_t_end;
            Trajectory tr;
            int status = ok;
            try {
                tr = simulate(rc.solver, rc.t_end);
            } catch (const SimulationAborted& e) {
                std::cerr << "solver failure: " << e.what() << " (partial output kept)\n";
                tr = e.partial;
                status = solver;
            }
            out.write("profile.csv", io::profile_csv(tr));
            out.write("diagnostics.csv", io::diagnostics_csv(tr.diagnostics));
            const auto& d = tr.diagnostics.back();
            out.results = {{"t", d.t}, {"s", d.s}, {"sdot", d.sdot}, {"energy", d.energy}, {"mass", d.mass},
                           {"rejected_steps", tr.rejected_steps}};
            say(g, fmt::format("t = {:.6g}  s = {:.10g}  sdot = {:.6g}  energy = {:.10g}  mass = {:.12g}", d.t, d.s,
                               d.sdot, d.energy, d.mass));
            return status;
        });
    });

    // sweep -------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "epsilon sweep against a speed law");
    std::string law_name, eps_text;
    std::optional<double> sweep_t_end;
    sweep->add_option("--law", law_name, "cox_voinov, tanner or typeb");
    sweep->add_option("--eps", eps_text, "comma list, strictly decreasing");
    sweep->add_option("--t-end", sweep_t_end, "run length per member");
    sweep->callback([&] {
        code = Command(g, "sweep")([&](Output& out) {
            std::optional<RunConfig> rc;
            if (!g.config.empty())
                rc = load_config(g.config);
            if (law_name.empty() && rc)
                law_name = rc->sweep.law;
            if (law_name.empty())
                throw ConfigError("law", "missing (valid: cox_voinov, tanner, typeb)");
            const Law law = parse_law(law_name);
            std::vector<double> eps;
            if (sweep->count("--eps"))
                eps = parse_list(eps_text, "eps");
            else if (rc && !rc->sweep.eps.empty())
                eps = rc->sweep.eps;
            else
                eps = {1e-2, 1e-3, 1e-4};
            SweepOptions o = rc ? rc->sweep.options : SweepOptions{};
            if (sweep_t_end)
                o.t_end = *sweep_t_end;
            o.threads = g.threads;
            const SolverConfig base = rc ? rc->solver : default_sweep_base(law);
            const auto records = sweep_epsilon(law, base, eps, o);
            out.write("sweep.csv", io::sweep_csv(records));
            std::size_t good = 0;
            for (const auto& r : records) {
                good += r.ok();
                say(g, fmt::format("eps = {:.3g}  sdot = {:.6g}  predicted = {:.6g}  rel.err = {:.3g}  {}", r.epsilon,
                                   r.sdot_measured, r.sdot_predicted, r.relative_error, r.status));
            }
            nlohmann::json fit;
            try {
                fit = io::fit_json(law, fit_log_law(records));
            } catch (const DomainError& e) {
                fit = {{"schema", io::fit_schema}, {"law", to_string(law)}, {"error", e.what()}};
            }
            out.write("fit.json", fit.dump(2) + "\n");
            out.results = {{"records", records.size()}, {"failed", records.size() - good}};
            return good == 0 ? solver : ok;
        });
    });

    // ode ---------------------------------------------------------------
    auto* ode_cmd = app.add_subcommand("ode", "inner-region ODE problems");
    ode_cmd->require_subcommand(1);

    auto* shoot = ode_cmd->add_subcommand("shoot", "complete-wetting separatrix");
    ShootOptions so;
    shoot->add_option("--eta0", so.eta0);
    shoot->add_option("--eta-max", so.eta_max);
    shoot->add_option("--tol", so.tol);
    shoot->callback([&] {
        code = Command(g, "ode-shoot")([&](Output& out) {
            const ShootResult r = complete_wetting_shoot(so);
            nlohmann::json j = {{"K0", r.K0},
                                {"beta1", r.beta1},
                                {"eta0", so.eta0},
                                {"eta_reached", r.eta_reached},
                                {"far_field_ratio", r.far_field_ratio},
                                {"ratio_to_cbrt3", r.far_field_ratio / std::cbrt(3.0)},
                                {"seed_error", r.seed_error},
                                {"bisections", r.bisections}};
            out.write("shoot.json", j.dump(2) + "\n");
            out.write("separatrix.csv", inner_csv(r.solution, "eta"));
            out.results = j;
            say(g, fmt::format("K0 = {:.10g}  H/(eta (ln eta)^(1/3)) / 3^(1/3) = {:.6g}", r.K0,
                               r.far_field_ratio / std::cbrt(3.0)));
            say(g, j.dump(2));
            return ok;
        });
    });

    auto* inner = ode_cmd->add_subcommand("inner", "partial-wetting inner profile");
    SlipParameters ip;
    double inner_sdot = -0.1, y0 = 1e-3, ymax = 1e3;
    inner->add_option("--n", ip.n);
    inner->add_option("--theta", ip.theta);
    inner->add_option("--sdot", inner_sdot);
    inner->add_option("--y0", y0);
    inner->add_option("--y-max", ymax);
    inner->callback([&] {
        code = Command(g, "ode-inner")([&](Output& out) {
            const InnerSolution s = integrate_inner_partial(ip, inner_sdot, y0, ymax);
            out.write("inner.csv", inner_csv(s, "y"));
            out.results = {{"y_end", s.y.back()}, {"H_end", s.H.back()}, {"slope_end", s.H1.back()}};
            say(g, fmt::format("H({:.6g}) = {:.10g}  H'({:.6g}) = {:.10g}", s.y.back(), s.H.back(), s.y.back(),
                               s.H1.back()));
            return ok;
        });
    });

    auto* phi = ode_cmd->add_subcommand("phi", "local expansion of the wedge correction");
    double phi_n = 2.0, phi_gamma = 1.0, phi_sdot = 1.0, phi_xi = 0.01;
    std::optional<double> phi2;
    phi->add_option("--n", phi_n);
    phi->add_option("--gamma", phi_gamma);
    phi->add_option("--sdot", phi_sdot);
    phi->add_option("--xi", phi_xi);
    phi->add_option("--phi2", phi2, "phi''(0), required for n < 2");
    phi->callback([&] {
        code = Command(g, "ode-phi")([&](Output& out) {
            const double v = local_phi(phi_n, phi_gamma, phi_sdot, phi_xi, phi2);
            out.results = {{"phi", v}};
            std::cout << fmt::format("{:.17g}", v) << "\n";
            return ok;
        });
    });

    auto* basis = ode_cmd->add_subcommand("basis", "asymptotic basis catalog");
    std::string regime = "type-a";
    double basis_n = 2.0;
    basis->add_option("--regime", regime, "type-a, type-b or local-phi");
    basis->add_option("--n", basis_n);
    basis->callback([&] {
        code = Command(g, "ode-basis")([&](Output& out) {
            const AsymptoticBasis b = asymptotic_basis(parse_basis_regime(regime), basis_n);
            nlohmann::json j = {{"regime", regime}, {"entries", nlohmann::json::array()}};
            for (const auto& e : b.entries)
                j["entries"].push_back({{"description", e.description}, {"coef", e.coef}, {"power", e.p},
                                        {"log_power", e.q}});
            out.write("basis.json", j.dump(2) + "\n");
            out.results = {{"count", b.entries.size()}};
            if (!g.quiet)
                std::cout << j.dump(2) << "\n";
            return ok;
        });
    });

    auto* qg = ode_cmd->add_subcommand("qgamma", "improper slip integral Q_gamma(y)");
    double qg_y = 1.0, qg_gamma = 1.0, qg_n = 2.0;
    qg->add_option("--y", qg_y);
    qg->add_option("--gamma", qg_gamma);
    qg->add_option("--n", qg_n);
    qg->callback([&] {
        code = Command(g, "ode-qgamma")([&](Output& out) {
            const double v = q_gamma(qg_y, qg_gamma, qg_n);
            out.results = {{"q_gamma", v}};
            std::cout << fmt::format("{:.17g}", v) << "\n";
            return ok;
        });
    });

    auto* wave = ode_cmd->add_subcommand("wave", "travelling-wave profile ODE");
    SlipParameters wp{2.0, 0.0, 1.0, true};
    int wave_sign = 1;
    double xi_start = 1e-2, xi_end = 1.0, wh = 1e-2, whp = 1.0, whpp = 0.0;
    std::string forcing = "flux";
    wave->add_option("--n", wp.n);
    wave->add_option("--epsilon", wp.epsilon);
    wave->add_option("--sign", wave_sign);
    wave->add_option("--xi-start", xi_start);
    wave->add_option("--xi-end", xi_end);
    wave->add_option("--h0", wh, "seed height");
    wave->add_option("--h1", whp, "seed slope");
    wave->add_option("--h2", whpp, "seed second derivative");
    wave->add_option("--forcing", forcing, "flux or profile");
    wave->callback([&] {
        code = Command(g, "ode-wave")([&](Output& out) {
            wp.no_slip = wp.epsilon == 0.0;
            if (forcing != "flux" && forcing != "profile")
                throw ConfigError("forcing", "unknown value '" + forcing + "' (valid: flux, profile)");
            const WaveResult r = travelling_wave(wp, wave_sign, xi_start, xi_end, {wh, whp, whpp},
                                                 forcing == "flux" ? WaveForcing::flux : WaveForcing::profile);
            out.write("wave.csv", inner_csv(r.solution, "xi"));
            out.results = {{"xi_end", r.solution.y.back()},
                           {"classification", to_string(r.solution.classification)},
                           {"max_invariant_error", r.max_invariant_error}};
            say(g, fmt::format("reached xi = {:.6g} ({})  max invariant error {:.3g}", r.solution.y.back(),
                               to_string(r.solution.classification), r.max_invariant_error));
            return ok;
        });
    });

    // check -------------------------------------------------------------
    auto* check = app.add_subcommand("check", "quadrature and solver checks");
    check->require_subcommand(1);

    auto* energy = check->add_subcommand("energy", "energy identity of a stored run");
    std::string traj;
    double energy_tol = 1e-8;
    energy->add_option("--traj", traj, "diagnostics CSV")->required();
    energy->add_option("--tol", energy_tol);
    energy->callback([&] {
        code = Command(g, "check-energy")([&](Output& out) {
            std::vector<Diagnostics> d;
            try {
                d = io::read_diagnostics_csv(traj);
            } catch (const std::exception& e) {
                throw ConfigError("traj", e.what());
            }
            const EnergyBalance b = check_energy_balance(d);
            const bool pass = b.max <= energy_tol;
            out.results = {{"max_residual", b.max}, {"mean_residual", b.mean}, {"tol", energy_tol}, {"pass", pass}};
            say(g, fmt::format("max residual {:.3e}  mean {:.3e}  tol {:.1e}  {}", b.max, b.mean, energy_tol,
                               verdict(pass)));
            return pass ? ok : check_failed;
        });
    });

    auto* logint = check->add_subcommand("log-integral", "int dxi / (xi (ln 1/xi)^(1/3)) against its closed form");
    double delta = std::exp(-8.0);
    logint->add_option("--delta", delta);
    logint->callback([&] {
        code = Command(g, "check-log-integral")([&](Output& out) {
            const LogIntegral r = log_integral_identity(delta);
            const double rel = r.closed_form == 0.0 ? std::abs(r.numeric)
                                                    : std::abs(r.numeric - r.closed_form) / std::abs(r.closed_form);
            const bool pass = rel < 1e-8;
            out.results = {{"numeric", r.numeric}, {"closed_form", r.closed_form}, {"relative_error", rel},
                           {"pass", pass}};
            say(g, fmt::format("numeric {:.15g}  closed form {:.15g}  rel {:.2e}  {}", r.numeric, r.closed_form, rel,
                               verdict(pass)));
            return pass ? ok : check_failed;
        });
    });

    auto* canc = check->add_subcommand("cancellation", "log^(2/3) cancellation on the cutoff profile");
    double canc_sdot = 1.0 / 3.0;
    std::string canc_deltas = "1e-4,1e-6,1e-8";
    canc->add_option("--sdot", canc_sdot);
    canc->add_option("--delta", canc_deltas, "comma list, decreasing");
    canc->callback([&] {
        code = Command(g, "check-cancellation")([&](Output& out) {
            const auto rows = energy_cancellation_check(canc_sdot, parse_list(canc_deltas, "delta"));
            std::string csv = "# schema thinfilm-cancellation/1\ndelta,term1,term2,difference,leading\n";
            say(g, "      delta        term1        term2   difference      leading");
            for (const auto& r : rows) {
                csv += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.delta, r.term1, r.term2,
                                   r.difference, r.leading);
                say(g, fmt::format("{:11.3e} {:12.6g} {:12.6g} {:12.6g} {:12.6g}", r.delta, r.term1, r.term2,
                                   r.difference, r.leading));
            }
            out.write("cancellation.csv", csv);
            // Both terms within 5% of the leading asymptote at the smallest
            // delta, and the difference bounded across the table.
            const auto& last = rows.back();
            const double r1 = last.leading > 0.0 ? last.term1 / last.leading : 1.0;
            const double r2 = last.leading > 0.0 ? last.term2 / last.leading : 1.0;
            const double mean = 0.5 * (rows.front().difference + last.difference);
            const double spread =
                mean == 0.0 ? 0.0 : std::abs(rows.front().difference - last.difference) / std::abs(mean);
            const bool p1 = std::abs(r1 - 1.0) < 0.05, p2 = std::abs(r2 - 1.0) < 0.05, p3 = spread < 0.2;
            say(g, fmt::format("term1/leading {:.4f} {}  term2/leading {:.4f} {}  difference spread {:.3g} {}", r1,
                               verdict(p1), r2, verdict(p2), spread, verdict(p3)));
            out.results = {{"term1_ratio", r1}, {"term2_ratio", r2}, {"difference_spread", spread},
                           {"pass", p1 && p2 && p3}};
            return p1 && p2 && p3 ? ok : check_failed;
        });
    });

    auto* nomove = check->add_subcommand("nomove", "contact-line pinning without slip");
    double nm_gamma = 1.0, nm_t = 1.0;
    int nm_N = 1024;
    nomove->add_option("--gamma", nm_gamma);
    nomove->add_option("--t-end", nm_t);
    nomove->add_option("--N", nm_N);
    nomove->callback([&] {
        code = Command(g, "check-nomove")([&](Output& out) {
            const DriftResult r = nomove_check(nomove_config(nm_gamma, nm_N), nm_t);
            const bool pass = r.drift < r.cell;
            out.results = {{"drift", r.drift}, {"cell", r.cell}, {"pass", pass}};
            say(g, fmt::format("drift {:.3e}  cell {:.3e}  {}", r.drift, r.cell, verdict(pass)));
            return pass ? ok : check_failed;
        });
    });

    auto* tbp = check->add_subcommand("typeb-profile", "compare a stored profile with the type-(b) asymptote");
    std::string tb_profile;
    double tb_sdot = 1.0 / 3.0, tb_eps = 1e-4, tb_tol = 0.15;
    tbp->add_option("--profile", tb_profile, "profile CSV, moving frame; the last snapshot is used")->required();
    tbp->add_option("--sdot", tb_sdot);
    tbp->add_option("--epsilon", tb_eps);
    tbp->add_option("--tol", tb_tol);
    tbp->callback([&] {
        code = Command(g, "check-typeb-profile")([&](Output& out) {
            io::Table t;
            try {
                t = io::read_numeric_csv(tb_profile, io::profile_schema);
            } catch (const std::exception& e) {
                throw ConfigError("profile", e.what());
            }
            const int ct = t.column("t"), cx = t.column("xi"), ch = t.column("h");
            if (t.rows.empty())
                throw ConfigError("profile", "no rows");
            const double t_last = t.rows.back()[ct];
            std::vector<double> xi, h;
            for (const auto& r : t.rows)
                if (r[ct] == t_last) {
                    xi.push_back(r[cx]);
                    h.push_back(r[ch]);
                }
            const double dev = typeb_profile_check(xi, h, tb_sdot, tb_eps);
            const bool pass = dev < tb_tol;
            out.results = {{"deviation", dev}, {"tol", tb_tol}, {"pass", pass}};
            say(g, fmt::format("max relative deviation {:.4g}  tol {:.3g}  {}", dev, tb_tol, verdict(pass)));
            return pass ? ok : check_failed;
        });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }
    return code;
}
