#pragma once

// Run configuration files. The grammar is nested key-value YAML:
//
//   schema: thinfilm/1
//   model:   { n, epsilon, theta, no_slip }
//   grid:    { N, L, graded, first, ratio }
//   time:    { t_end, dt0, dt_min, dt_max, snapshot_every }
//   newton:  { tol, max_iter }
//   solver:  { frame, far_field, far_gamma, face_average,
//              wall_slope_left, wall_slope_right, contact_threshold }
//   initial: { kind, <numeric parameters of the generator> }
//   sweep:   { law, eps, t_end, discard, typeb_gamma }
//
// A .json file is read as the same tree. Unknown keys are errors.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "thinfilm/errors.hpp"
#include "thinfilm/harness.hpp"
#include "thinfilm/pde_solver.hpp"

namespace thinfilm {

inline constexpr const char* config_schema = "thinfilm/1";

struct SweepSection {
    std::string law;            // empty if absent
    std::vector<double> eps;
    SweepOptions options;
};

struct RunConfig {
    SolverConfig solver;
    double t_end = 1.0;
    SweepSection sweep;
};

namespace detail {

inline nlohmann::json yaml_to_json(const YAML::Node& n, const std::string& path) {
    switch (n.Type()) {
    case YAML::NodeType::Map: {
        auto j = nlohmann::json::object();
        for (const auto& kv : n) {
            const std::string k = kv.first.as<std::string>();
            j[k] = yaml_to_json(kv.second, path.empty() ? k : path + "." + k);
        }
        return j;
    }
    case YAML::NodeType::Sequence: {
        auto j = nlohmann::json::array();
        for (const auto& v : n)
            j.push_back(yaml_to_json(v, path));
        return j;
    }
    case YAML::NodeType::Scalar: {
        const std::string s = n.Scalar();
        if (n.Tag() == "!")  // quoted
            return s;
        if (s == "true" || s == "false")
            return s == "true";
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size())
                return v;
        } catch (const std::exception&) {
        }
        return s;
    }
    case YAML::NodeType::Null:
        return nullptr;
    default:
        throw ConfigError(path, "unsupported YAML node");
    }
}

class Reader {
public:
    Reader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object())
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected a mapping");
    }

    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
    bool has(const std::string& k) const { return j_.contains(k); }

    void number(const std::string& k, double& out) const {
        if (!has(k))
            return;
        if (!j_[k].is_number())
            throw ConfigError(key(k), "expected a number");
        out = j_[k].get<double>();
    }
    void integer(const std::string& k, int& out) const {
        double v = out;
        number(k, v);
        if (v != std::floor(v))
            throw ConfigError(key(k), "expected an integer");
        out = int(v);
    }
    void boolean(const std::string& k, bool& out) const {
        if (!has(k))
            return;
        if (!j_[k].is_boolean())
            throw ConfigError(key(k), "expected true or false");
        out = j_[k].get<bool>();
    }
    void string(const std::string& k, std::string& out) const {
        if (!has(k))
            return;
        if (!j_[k].is_string())
            throw ConfigError(key(k), "expected a string");
        out = j_[k].get<std::string>();
    }
    Reader child(const std::string& k) const { return Reader(j_[k], key(k)); }

    void only(std::initializer_list<const char*> allowed) const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            bool ok = false;
            for (const char* a : allowed)
                ok = ok || it.key() == a;
            if (!ok)
                throw ConfigError(key(it.key()), "unknown key");
        }
    }

    const nlohmann::json& raw() const { return j_; }

private:
    const nlohmann::json& j_;
    std::string path_;
};

template <class E>
E parse_enum(const std::string& key, const std::string& v, std::initializer_list<std::pair<const char*, E>> opts) {
    std::string names;
    for (const auto& [name, e] : opts) {
        if (v == name)
            return e;
        names += names.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError(key, "unknown value '" + v + "' (valid: " + names + ")");
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& root) {
    using detail::Reader;
    const Reader r(root, "");
    r.only({"schema", "model", "grid", "time", "newton", "solver", "initial", "sweep"});
    if (!r.has("schema"))
        throw ConfigError("schema", std::string("missing schema version (expected ") + config_schema + ")");
    std::string schema;
    r.string("schema", schema);
    if (schema != config_schema)
        throw ConfigError("schema", "unknown schema version '" + schema + "' (expected " + config_schema + ")");

    RunConfig rc;
    SolverConfig& c = rc.solver;
    if (r.has("model")) {
        const Reader m = r.child("model");
        m.only({"n", "epsilon", "theta", "no_slip"});
        m.number("n", c.p.n);
        m.number("epsilon", c.p.epsilon);
        m.number("theta", c.p.theta);
        m.boolean("no_slip", c.p.no_slip);
    }
    if (r.has("grid")) {
        const Reader g = r.child("grid");
        g.only({"N", "L", "graded", "first", "ratio"});
        g.integer("N", c.grid.N);
        g.number("L", c.grid.L);
        g.boolean("graded", c.grid.graded);
        g.number("first", c.grid.first);
        g.number("ratio", c.grid.ratio);
    }
    if (r.has("time")) {
        const Reader t = r.child("time");
        t.only({"t_end", "dt0", "dt_min", "dt_max", "snapshot_every"});
        t.number("t_end", rc.t_end);
        t.number("dt0", c.dt0);
        t.number("dt_min", c.dt_min);
        t.number("dt_max", c.dt_max);
        t.integer("snapshot_every", c.snapshot_every);
        if (!(rc.t_end >= 0.0))
            throw ConfigError("time.t_end", "must be non-negative");
    }
    if (r.has("newton")) {
        const Reader n = r.child("newton");
        n.only({"tol", "max_iter"});
        n.number("tol", c.newton_tol);
        n.integer("max_iter", c.newton_max_iter);
    }
    if (r.has("solver")) {
        const Reader s = r.child("solver");
        s.only({"frame", "far_field", "far_gamma", "face_average", "wall_slope_left", "wall_slope_right",
                "contact_threshold"});
        std::string v;
        if (s.has("frame")) {
            s.string("frame", v);
            c.frame = detail::parse_enum<Frame>("solver.frame", v, {{"moving", Frame::moving}, {"fixed", Frame::fixed}});
        }
        if (s.has("far_field")) {
            s.string("far_field", v);
            c.far_field = detail::parse_enum<FarField>(
                "solver.far_field", v,
                {{"zero_curvature", FarField::zero_curvature}, {"wedge_match", FarField::wedge_match}});
        }
        if (s.has("face_average")) {
            s.string("face_average", v);
            c.face_average = detail::parse_enum<FaceAverage>(
                "solver.face_average", v,
                {{"arithmetic", FaceAverage::arithmetic}, {"geometric", FaceAverage::geometric}});
        }
        s.number("far_gamma", c.far_gamma);
        s.number("wall_slope_left", c.wall_slope_left);
        s.number("wall_slope_right", c.wall_slope_right);
        s.number("contact_threshold", c.contact_threshold);
    }
    if (r.has("initial")) {
        const Reader ini = r.child("initial");
        ini.string("kind", c.initial.kind);
        for (auto it = ini.raw().begin(); it != ini.raw().end(); ++it) {
            if (it.key() == "kind")
                continue;
            if (!it->is_number())
                throw ConfigError(ini.key(it.key()), "initial-data parameters must be numbers");
            c.initial.params[it.key()] = it->get<double>();
        }
    }
    if (r.has("sweep")) {
        const Reader s = r.child("sweep");
        s.only({"law", "eps", "t_end", "discard", "typeb_gamma"});
        s.string("law", rc.sweep.law);
        if (!rc.sweep.law.empty())
            parse_law(rc.sweep.law);
        if (s.has("eps")) {
            if (!s.raw()["eps"].is_array())
                throw ConfigError("sweep.eps", "expected a list of numbers");
            for (const auto& v : s.raw()["eps"]) {
                if (!v.is_number())
                    throw ConfigError("sweep.eps", "expected a list of numbers");
                rc.sweep.eps.push_back(v.get<double>());
            }
        }
        s.number("t_end", rc.sweep.options.t_end);
        s.number("discard", rc.sweep.options.discard);
        s.number("typeb_gamma", rc.sweep.options.typeb_gamma);
        if (!(rc.sweep.options.discard >= 0.0 && rc.sweep.options.discard < 1.0))
            throw ConfigError("sweep.discard", "must lie in [0, 1)");
    }

    // Parameter errors from the model are reported under their config key.
    try {
        c.p.validate();
    } catch (const DomainError& e) {
        const std::string w = e.what();
        const char* k = w.find("exponent") != std::string::npos ? "model.n"
                        : w.find("theta") != std::string::npos ? "model.theta"
                                                               : "model.epsilon";
        throw ConfigError(k, w);
    }
    c.validate();
    return rc;
}

inline nlohmann::json parse_config_text(const std::string& text, bool json) {
    if (json) {
        try {
            return nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
        }
    }
    try {
        return detail::yaml_to_json(YAML::Load(text), "");
    } catch (const YAML::Exception& e) {
        throw ConfigError("<file>", std::string("invalid YAML: ") + e.what());
    }
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("<file>", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    return config_from_json(parse_config_text(ss.str(), json));
}

}  // namespace thinfilm
