#include "stomo/config.hpp"

#include <fstream>

#include "json_util.hpp"

namespace stomo {
namespace {

using nlohmann::json;

// Typed getter with key-path error messages.
template <class T>
T get_as(const json& j, const std::string& where, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": bad value for '" + key + "'");
    }
}

template <class T>
void maybe(const json& j, const std::string& where, const char* key, T& out) {
    if (j.contains(key)) out = get_as<T>(j, where, key);
}

std::array<int, 3> dims_from(const json& j, const std::string& where, const char* key) {
    auto v = get_as<std::vector<int>>(j, where, key);
    if (v.size() == 2) return {v[0], v[1], 1};  // 2D shorthand
    if (v.size() == 3) return {v[0], v[1], v[2]};
    throw ConfigError(where + ": '" + key + "' must have 2 or 3 entries");
}

std::array<double, 3> triple_from(const json& j, const std::string& where, const char* key,
                                  std::array<double, 3> fallback) {
    if (!j.contains(key)) return fallback;
    auto v = get_as<std::vector<double>>(j, where, key);
    if (v.size() == 1) return {v[0], v[0], v[0]};
    if (v.size() == 3) return {v[0], v[1], v[2]};
    throw ConfigError(where + ": '" + key + "' must have 1 or 3 entries");
}

PhantomSpec parse_phantom(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"kind", "dims", "voxel_size", "disks"}, where);
    PhantomSpec p;
    std::string kind = get_as<std::string>(j, where, "kind");
    if (kind == "shepplogan2d") p.kind = PhantomSpec::Kind::SheppLogan2D;
    else if (kind == "shepplogan3d") p.kind = PhantomSpec::Kind::SheppLogan3D;
    else if (kind == "disks") p.kind = PhantomSpec::Kind::Disks;
    else throw ConfigError(where + ": unknown phantom kind '" + kind + "'");
    p.dims = dims_from(j, where, "dims");
    p.voxel_size = triple_from(j, where, "voxel_size", p.voxel_size);
    if (j.contains("disks")) {
        for (const auto& dj : j.at("disks")) {
            reject_unknown_keys(dj, {"cx", "cy", "r", "value"}, where + ".disks");
            DiskSpec d;
            maybe(dj, where + ".disks", "cx", d.cx);
            maybe(dj, where + ".disks", "cy", d.cy);
            maybe(dj, where + ".disks", "r", d.r);
            maybe(dj, where + ".disks", "value", d.value);
            p.disks.push_back(d);
        }
    }
    try {
        p.validate();
    } catch (const ArgumentError& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return p;
}

NoiseSpec parse_noise(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"kind", "rel_std", "seed"}, where);
    NoiseSpec n;
    std::string kind = get_as<std::string>(j, where, "kind");
    if (kind == "none") n.kind = NoiseSpec::Kind::None;
    else if (kind == "gaussian") n.kind = NoiseSpec::Kind::Gaussian;
    else throw ConfigError(where + ": unknown noise kind '" + kind + "'");
    maybe(j, where, "rel_std", n.rel_std);
    maybe(j, where, "seed", n.seed);
    try {
        n.validate();
    } catch (const ArgumentError& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return n;
}

void parse_solver(const json& j, const std::string& where, ExperimentConfig& cfg) {
    reject_unknown_keys(j,
                        {"name", "regularizer", "alpha0", "beta", "N0", "n_max", "C",
                         "eps_ratio", "mu", "epochs", "time_budget", "max_backtracks", "seed",
                         "alpha_max", "record_full_objective", "lipschitz_estimate", "threads"},
                        where);
    maybe(j, where, "name", cfg.solver_name);
    if (cfg.solver_name != "fblisa" && cfg.solver_name != "fb" && cfg.solver_name != "proxsgd")
        throw ConfigError(where + ": unknown solver name '" + cfg.solver_name + "'");
    if (j.contains("regularizer")) {
        std::string r = get_as<std::string>(j, where, "regularizer");
        if (r == "zero") cfg.reg_kind = Regularizer::Kind::Zero;
        else if (r == "nonneg") cfg.reg_kind = Regularizer::Kind::NonNeg;
        else if (r == "l1") cfg.reg_kind = Regularizer::Kind::L1;
        else if (r == "l1nonneg") cfg.reg_kind = Regularizer::Kind::L1NonNeg;
        else throw ConfigError(where + ": unknown regularizer '" + r + "'");
    }
    SolverConfig& s = cfg.solver;
    maybe(j, where, "alpha0", s.alpha0);
    maybe(j, where, "beta", s.beta);
    maybe(j, where, "N0", s.n0);
    maybe(j, where, "n_max", s.n_max);
    maybe(j, where, "C", s.schedule_c);
    maybe(j, where, "eps_ratio", s.eps_ratio);
    maybe(j, where, "mu", s.mu);
    maybe(j, where, "epochs", s.epochs);
    if (j.contains("time_budget")) s.time_budget = get_as<double>(j, where, "time_budget");
    maybe(j, where, "max_backtracks", s.max_backtracks);
    maybe(j, where, "seed", s.seed);
    if (j.contains("alpha_max")) s.alpha_max = get_as<double>(j, where, "alpha_max");
    maybe(j, where, "record_full_objective", s.record_full_objective);
    if (j.contains("lipschitz_estimate"))
        s.lipschitz_estimate = get_as<double>(j, where, "lipschitz_estimate");
    maybe(j, where, "threads", s.threads);
}

void parse_outputs(const json& j, const std::string& where, OutputSpec& o) {
    reject_unknown_keys(
        j, {"dir", "write_phantom", "write_sinogram", "write_reconstruction", "write_trace"},
        where);
    if (j.contains("dir")) o.dir = get_as<std::string>(j, where, "dir");
    maybe(j, where, "write_phantom", o.write_phantom);
    maybe(j, where, "write_sinogram", o.write_sinogram);
    maybe(j, where, "write_reconstruction", o.write_reconstruction);
    maybe(j, where, "write_trace", o.write_trace);
}

void parse_inputs(const json& j, const std::string& where, ExperimentConfig& cfg) {
    reject_unknown_keys(j, {"sinogram", "ground_truth"}, where);
    if (j.contains("sinogram"))
        cfg.input_sinogram = std::filesystem::path(get_as<std::string>(j, where, "sinogram"));
    if (j.contains("ground_truth"))
        cfg.input_ground_truth =
            std::filesystem::path(get_as<std::string>(j, where, "ground_truth"));
}

GridSpec parse_grid(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"dims", "voxel_size"}, where);
    GridSpec g;
    g.dims = dims_from(j, where, "dims");
    g.voxel_size = triple_from(j, where, "voxel_size", g.voxel_size);
    for (int a = 0; a < 3; ++a) {
        if (g.dims[a] < 1) throw ConfigError(where + ": dims must be positive");
        if (!(g.voxel_size[a] > 0.0)) throw ConfigError(where + ": voxel_size must be positive");
    }
    return g;
}

} // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& where) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw ConfigError(where + ": top level must be an object");
    reject_unknown_keys(
        j, {"phantom", "geometry", "noise", "solver", "outputs", "checkpoints", "inputs", "grid"},
        where);

    ExperimentConfig cfg;
    try {
        if (j.contains("phantom")) cfg.phantom = parse_phantom(j.at("phantom"), where + ".phantom");
        if (j.contains("geometry"))
            cfg.geometry = geometry_from_json(j.at("geometry"), where + ".geometry");
        if (j.contains("noise")) cfg.noise = parse_noise(j.at("noise"), where + ".noise");
        if (j.contains("solver")) parse_solver(j.at("solver"), where + ".solver", cfg);
        if (j.contains("outputs")) parse_outputs(j.at("outputs"), where + ".outputs", cfg.outputs);
        if (j.contains("checkpoints")) {
            cfg.checkpoints = get_as<std::vector<double>>(j, where, "checkpoints");
            for (double c : cfg.checkpoints)
                if (!(c > 0.0))
                    throw ConfigError(where + ": checkpoints must be positive times");
        }
        if (j.contains("inputs")) parse_inputs(j.at("inputs"), where + ".inputs", cfg);
        if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"), where + ".grid");
    } catch (const json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open config: " + path.string());
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) throw IoError("read failed: " + path.string());
    return parse_config(text, path.filename().string());
}

Regularizer make_regularizer(const ExperimentConfig& cfg) {
    Regularizer r;
    r.kind = cfg.reg_kind;
    r.mu = cfg.solver.mu;
    r.validate();
    return r;
}

} // namespace stomo
