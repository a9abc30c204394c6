#pragma once

// Output files. Every CSV starts with a "# schema <name>/<version>" line,
// then the column header; values are written with 17 significant digits so a
// file round-trips to the same doubles.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "thinfilm/harness.hpp"
#include "thinfilm/pde_solver.hpp"

namespace thinfilm::io {

inline constexpr const char* profile_schema = "thinfilm-profile/1";
inline constexpr const char* diagnostics_schema = "thinfilm-diagnostics/1";
inline constexpr const char* sweep_schema = "thinfilm-sweep/1";
inline constexpr const char* fit_schema = "thinfilm-fit/1";
inline constexpr const char* manifest_schema = "thinfilm-manifest/1";
inline constexpr const char* tool_version = "0.1.0";

inline std::string num(double v) { return fmt::format("{:.17g}", v); }

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
    out << text;
    if (!out)
        throw std::runtime_error("write failed: " + p.string());
}

// Columns t,xi,h (moving frame) or t,x,h (fixed frame), one block per snapshot.
inline std::string profile_csv(const Trajectory& tr) {
    std::string s = fmt::format("# schema {}\n", profile_schema);
    s += tr.config.frame == Frame::moving ? "t,xi,h\n" : "t,x,h\n";
    for (const State& st : tr.states)
        for (std::size_t i = 0; i < st.h.size(); ++i)
            s += fmt::format("{:.17g},{:.17g},{:.17g}\n", st.t, tr.grid.x[i], st.h[i]);
    return s;
}

inline std::string diagnostics_csv(const std::vector<Diagnostics>& diag) {
    std::string s = fmt::format("# schema {}\n", diagnostics_schema);
    s += "t,s,sdot,energy,dissipation,mass,energy_residual\n";
    for (const auto& d : diag)
        s += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", d.t, d.s, d.sdot, d.energy,
                         d.dissipation, d.mass, d.energy_residual);
    return s;
}

// Failure messages lose commas and newlines so the row stays one record.
inline std::string csv_field(std::string v) {
    for (char& c : v)
        if (c == ',' || c == '\n' || c == '\r')
            c = ';';
    return v;
}

// The declared sweep columns, then the type-(b) extras.
inline std::string sweep_csv(const std::vector<SweepRecord>& rs) {
    std::string s = fmt::format("# schema {}\n", sweep_schema);
    s += "law,epsilon,theta,gamma_fit,sdot_measured,sdot_predicted,relative_error,status,sdot_prelimit,"
         "profile_deviation\n";
    for (const auto& r : rs)
        s += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},{:.17g}\n", to_string(r.law),
                         r.epsilon, r.theta, r.gamma_fit, r.sdot_measured, r.sdot_predicted, r.relative_error,
                         csv_field(r.status), r.sdot_prelimit, r.profile_deviation);
    return s;
}

inline nlohmann::json fit_json(Law law, const FitResult& f) {
    return {{"schema", fit_schema},
            {"law", to_string(law)},
            {"slope", f.slope},
            {"intercept", f.intercept},
            {"r_squared", f.r_squared},
            {"n_points", f.n_points},
            {"eps_range", {f.eps_min, f.eps_max}},
            {"flat", f.flat}};
}

// Minimal reader for the files above: skips the schema line, checks it
// against `schema`, returns the header and the numeric rows.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name)
                return int(i);
        throw std::runtime_error("missing column '" + name + "'");
    }
};

inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');)
        out.push_back(f);
    return out;
}

inline Table read_numeric_csv(const std::filesystem::path& p, const std::string& schema) {
    std::ifstream in(p);
    if (!in)
        throw std::runtime_error("cannot open " + p.string());
    std::string line;
    if (!std::getline(in, line) || line != "# schema " + schema)
        throw std::runtime_error(p.string() + ": expected schema line '# schema " + schema + "'");
    Table t;
    if (!std::getline(in, line))
        throw std::runtime_error(p.string() + ": missing header");
    t.columns = split(line);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        for (const auto& f : split(line))
            row.push_back(std::stod(f));
        if (row.size() != t.columns.size())
            throw std::runtime_error(p.string() + ": ragged row");
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline std::vector<Diagnostics> read_diagnostics_csv(const std::filesystem::path& p) {
    const Table t = read_numeric_csv(p, diagnostics_schema);
    const int ct = t.column("t"), cs = t.column("s"), cd = t.column("sdot"), ce = t.column("energy"),
              cdi = t.column("dissipation"), cm = t.column("mass"), cr = t.column("energy_residual");
    std::vector<Diagnostics> out;
    for (const auto& r : t.rows) {
        Diagnostics d;
        d.t = r[ct];
        d.s = r[cs];
        d.sdot = r[cd];
        d.energy = r[ce];
        d.dissipation = r[cdi];
        d.mass = r[cm];
        d.energy_residual = r[cr];
        out.push_back(d);
    }
    return out;
}

// Run record. Written last, through a temporary file and a rename, so a
// manifest on disk always describes a finished command.
struct Manifest {
    std::string command;
    std::string config_path;
    std::filesystem::path out_dir;
    double wall_seconds = 0.0;
    int exit_status = 0;
    std::vector<std::string> files;
    nlohmann::json extra = nlohmann::json::object();
};

inline void write_manifest(const Manifest& m) {
    nlohmann::json j = {{"schema", manifest_schema},
                        {"command", m.command},
                        {"config_path", m.config_path},
                        {"output_dir", m.out_dir.string()},
                        {"tool_version", tool_version},
                        {"wall_seconds", m.wall_seconds},
                        {"exit_status", m.exit_status},
                        {"files", m.files}};
    if (!m.extra.empty())
        j["results"] = m.extra;
    const auto tmp = m.out_dir / "manifest.json.tmp";
    write_text(tmp, j.dump(2) + "\n");
    std::filesystem::rename(tmp, m.out_dir / "manifest.json");
}

}  // namespace thinfilm::io
