#include "oscnet/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oscnet/errors.hpp"
#include "oscnet/rng.hpp"

namespace oscnet {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config field '" + path + "': " + msg);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing");
    return *it;
}

double get_double(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

double get_double_or(const json& j, const std::string& key, double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string get_string(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_double_array(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) fail(path, "expected numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

ScalarProfile parse_profile(const json& j, const std::string& path) {
    const std::string kind = get_string(j, "kind", path);
    try {
        if (kind == "constant") return ScalarProfile::constant(get_double(j, "c", path));
        if (kind == "linear") return ScalarProfile::linear(get_double(j, "a", path));
        if (kind == "table")
            return ScalarProfile::step_table(get_double_array(require(j, "breaks", path), path + ".breaks"),
                                             get_double_array(require(j, "values", path), path + ".values"));
        if (kind == "linear-table")
            return ScalarProfile::linear_table(get_double_array(require(j, "breaks", path), path + ".breaks"),
                                               get_double_array(require(j, "values", path), path + ".values"));
        if (kind == "segments") {
            const json& arr = require(j, "segments", path);
            if (!arr.is_array()) fail(path + ".segments", "expected an array");
            std::vector<ScalarProfile::Segment> segs;
            for (const auto& e : arr) {
                ScalarProfile::Segment s;
                s.lo = get_double(e, "from", path + ".segments[]");
                s.hi = get_double(e, "to", path + ".segments[]");
                s.c0 = get_double(e, "c0", path + ".segments[]");
                s.c1 = get_double_or(e, "c1", 0.0);
                segs.push_back(s);
            }
            return ScalarProfile::segments(std::move(segs));
        }
    } catch (const DomainError& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown profile kind '" + kind + "'");
}

Graphon parse_graphon(const json& j, const std::string& path) {
    const std::string kind = get_string(j, "kind", path);
    try {
        if (kind == "constant") return Graphon::constant(get_double(j, "p", path));
        if (kind == "nearest-neighbor") return Graphon::nearest_neighbor(get_double(j, "kappa", path));
        if (kind == "rank1")
            return Graphon::rank1(parse_profile(require(j, "h1", path), path + ".h1"),
                                  parse_profile(require(j, "h2", path), path + ".h2"));
        if (kind == "table") {
            const json& vals = require(j, "values", path);
            if (!vals.is_array()) fail(path + ".values", "expected an array of arrays");
            std::vector<std::vector<double>> table;
            for (const auto& row : vals) table.push_back(get_double_array(row, path + ".values[]"));
            return Graphon::piecewise_table(
                get_double_array(require(j, "x_breaks", path), path + ".x_breaks"),
                get_double_array(require(j, "y_breaks", path), path + ".y_breaks"), std::move(table));
        }
    } catch (const DomainError& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown graphon kind '" + kind + "'");
}

CouplingFunction parse_coupling(const json& j, const std::string& path) {
    const std::string kind = get_string(j, "kind", path);
    if (kind == "sine") return CouplingFunction::sine();
    if (kind == "double-sine") return CouplingFunction::double_sine();
    if (kind == "constant-one") return CouplingFunction::constant_one();
    if (kind == "scaled")
        return CouplingFunction::scaled(get_double(j, "factor", path),
                                        parse_coupling(require(j, "inner", path), path + ".inner"));
    fail(path + ".kind", "unknown coupling kind '" + kind + "'");
}

GraphLayer parse_layer(const json& j, const std::string& path, std::uint32_t id) {
    Graphon w = parse_graphon(require(j, "graphon", path), path + ".graphon");
    CouplingFunction d = parse_coupling(require(j, "coupling", path), path + ".coupling");
    const json& c = require(j, "construction", path);
    GraphLayer layer;
    try {
        if (c.is_string()) {
            const std::string name = c.get<std::string>();
            if (name == "deterministic-dense")
                layer = GraphLayer::deterministic_dense(std::move(w), d, id);
            else if (name == "random-dense")
                layer = GraphLayer::random_dense(std::move(w), d, id);
            else
                fail(path + ".construction", "unknown construction '" + name + "'");
        } else {
            const std::string name = get_string(c, "kind", path + ".construction");
            if (name == "random-sparse")
                layer = GraphLayer::random_sparse(std::move(w), d,
                                                  get_double(c, "gamma", path + ".construction"), id);
            else if (name == "deterministic-dense")
                layer = GraphLayer::deterministic_dense(std::move(w), d, id);
            else if (name == "random-dense")
                layer = GraphLayer::random_dense(std::move(w), d, id);
            else
                fail(path + ".construction", "unknown construction '" + name + "'");
        }
    } catch (const ConstructionError& e) {
        fail(path, e.what());
    }
    if (j.contains("undirected")) {
        if (!j.at("undirected").is_boolean()) fail(path + ".undirected", "expected a boolean");
        layer.undirected = j.at("undirected").get<bool>();
    }
    return layer;
}

IntrinsicTerm parse_intrinsic(const json& j, const std::string& path) {
    const std::string kind = get_string(j, "kind", path);
    if (kind == "zero") return IntrinsicTerm::zero();
    if (kind == "feedback")
        return IntrinsicTerm::feedback(get_double(j, "b", path), get_double(j, "ubar", path));
    fail(path + ".kind", "unknown intrinsic kind '" + kind + "' (callbacks are API-only)");
}

InitialSpec parse_initial(const json& j, const std::string& path) {
    InitialSpec spec;
    const std::string kind = get_string(j, "kind", path);
    if (kind == "profile") {
        spec.kind = InitialSpec::Kind::Profile;
        spec.profile = parse_profile(require(j, "profile", path), path + ".profile");
    } else if (kind == "uniform-random") {
        spec.kind = InitialSpec::Kind::UniformRandom;
        spec.lo = get_double(j, "lo", path);
        spec.hi = get_double(j, "hi", path);
        if (!(spec.hi > spec.lo)) fail(path, "hi must exceed lo");
    } else if (kind == "near-constant") {
        spec.kind = InitialSpec::Kind::NearConstant;
        spec.q = get_double(j, "q", path);
        spec.amplitude = get_double(j, "amplitude", path);
        if (!(spec.amplitude >= 0.0)) fail(path, "amplitude must be nonnegative");
    } else {
        fail(path + ".kind", "unknown initial kind '" + kind + "'");
    }
    return spec;
}

std::vector<std::pair<double, double>> parse_intervals(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of [lo, hi] pairs");
    std::vector<std::pair<double, double>> out;
    for (const auto& e : j) {
        auto pair = get_double_array(e, path);
        if (pair.size() != 2) fail(path, "each interval needs exactly two numbers");
        out.emplace_back(pair[0], pair[1]);
    }
    return out;
}

} // namespace

std::string experiment_kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Simulate: return "simulate";
        case ExperimentKind::SyncSolve: return "sync-solve";
        case ExperimentKind::Stability: return "stability";
        case ExperimentKind::Design: return "design";
        case ExperimentKind::SweepDelta: return "sweep-delta";
        case ExperimentKind::SweepBoundary: return "sweep-boundary";
        case ExperimentKind::AveragedCompare: return "averaged-compare";
        case ExperimentKind::Matrix: return "matrix";
    }
    return "?";
}

std::vector<double> InitialSpec::realize(int n, std::uint64_t seed) const {
    std::vector<double> u(static_cast<std::size_t>(n));
    switch (kind) {
        case Kind::Profile:
            return profile.cell_averages(n);
        case Kind::UniformRandom:
            for (int i = 0; i < n; ++i) u[i] = node_uniform(seed, static_cast<std::uint64_t>(i), lo, hi);
            return u;
        case Kind::NearConstant:
            for (int i = 0; i < n; ++i)
                u[i] = q + node_uniform(seed, static_cast<std::uint64_t>(i), -amplitude, amplitude);
            return u;
    }
    return u;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse " + origin + ": " + e.what());
    }

    ExperimentConfig cfg;
    const std::string kind = get_string(j, "experiment", "");
    if (kind == "simulate") cfg.kind = ExperimentKind::Simulate;
    else if (kind == "sync-solve") cfg.kind = ExperimentKind::SyncSolve;
    else if (kind == "stability") cfg.kind = ExperimentKind::Stability;
    else if (kind == "design") cfg.kind = ExperimentKind::Design;
    else if (kind == "sweep-delta") cfg.kind = ExperimentKind::SweepDelta;
    else if (kind == "sweep-boundary") cfg.kind = ExperimentKind::SweepBoundary;
    else if (kind == "averaged-compare") cfg.kind = ExperimentKind::AveragedCompare;
    else if (kind == "matrix") cfg.kind = ExperimentKind::Matrix;
    else fail("experiment", "unknown experiment kind '" + kind + "'");

    if (j.contains("name")) cfg.name = get_string(j, "name", "");

    const bool needs_system = cfg.kind != ExperimentKind::Design && cfg.kind != ExperimentKind::SweepBoundary;
    if (needs_system) {
        const json& sys = require(j, "system", "");
        const json& layers = require(sys, "layers", "system");
        if (!layers.is_array() || layers.empty()) fail("system.layers", "at least one layer required");
        std::uint32_t id = 1;
        for (const auto& l : layers) {
            cfg.layers.push_back(parse_layer(l, "system.layers[" + std::to_string(id - 1) + "]", id));
            ++id;
        }
        if (sys.contains("intrinsic"))
            cfg.intrinsic = parse_intrinsic(sys.at("intrinsic"), "system.intrinsic");
        if (sys.contains("omega")) cfg.omega = parse_profile(sys.at("omega"), "system.omega");
        if (sys.contains("initial")) cfg.initial = parse_initial(sys.at("initial"), "system.initial");
    }

    if (j.contains("n")) cfg.n = get_int(j, "n", "");
    if (j.contains("n_list")) {
        for (double v : get_double_array(j.at("n_list"), "n_list"))
            cfg.n_list.push_back(static_cast<int>(v));
        for (std::size_t k = 0; k + 1 < cfg.n_list.size(); ++k)
            if (cfg.n_list[k] >= cfg.n_list[k + 1]) fail("n_list", "must be strictly increasing");
    }
    cfg.dt = get_double_or(j, "dt", cfg.dt);
    cfg.t_end = get_double_or(j, "t_end", cfg.t_end);
    if (j.contains("sample_every")) cfg.sample_every = get_int(j, "sample_every", "");
    if (j.contains("n_mesh")) cfg.n_mesh = get_int(j, "n_mesh", "");
    cfg.tolerance = get_double_or(j, "tolerance", cfg.tolerance);
    if (j.contains("replicates")) cfg.replicates = get_int(j, "replicates", "");
    if (j.contains("report_delta_vs_sync")) cfg.report_delta_vs_sync = j.at("report_delta_vs_sync").get<bool>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) cfg.out_dir = get_string(j, "out", "");
    if (j.contains("threads")) cfg.threads = get_int(j, "threads", "");
    if (j.contains("matrix_format")) cfg.matrix_format = get_string(j, "matrix_format", "");

    if (cfg.kind == ExperimentKind::Design) {
        const json& d = require(j, "design", "");
        cfg.design.u0 = parse_profile(require(d, "u0", "design"), "design.u0");
        cfg.design.omega = parse_profile(require(d, "omega", "design"), "design.omega");
        cfg.design.omega0 = get_double_or(d, "omega0", 0.0);
        cfg.design.i_plus = parse_intervals(require(d, "i_plus", "design"), "design.i_plus");
        cfg.design.i_minus = parse_intervals(require(d, "i_minus", "design"), "design.i_minus");
    }
    if (cfg.kind == ExperimentKind::SweepBoundary && j.contains("boundary")) {
        const json& b = j.at("boundary");
        cfg.boundary.kappa_min = get_double_or(b, "kappa_min", cfg.boundary.kappa_min);
        cfg.boundary.kappa_max = get_double_or(b, "kappa_max", cfg.boundary.kappa_max);
        if (b.contains("kappa_steps")) cfg.boundary.kappa_steps = get_int(b, "kappa_steps", "boundary");
        if (b.contains("l_max")) cfg.boundary.l_max = get_int(b, "l_max", "boundary");
    }

    // basic cross-field validation
    if (cfg.kind == ExperimentKind::Simulate || cfg.kind == ExperimentKind::AveragedCompare ||
        cfg.kind == ExperimentKind::Matrix || cfg.kind == ExperimentKind::Stability) {
        if (cfg.n <= 0 && cfg.n_list.empty()) fail("n", "a positive n (or n_list) is required");
    }
    if (cfg.kind == ExperimentKind::SweepDelta || cfg.kind == ExperimentKind::AveragedCompare) {
        if (cfg.n_list.empty() && cfg.n > 0) cfg.n_list = {cfg.n};
        if (cfg.n_list.empty()) fail("n_list", "sweeps need an n_list");
    }
    if (!(cfg.dt > 0.0)) fail("dt", "must be positive");
    if (cfg.sample_every < 1) fail("sample_every", "must be >= 1");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

} // namespace oscnet
