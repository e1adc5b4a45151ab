// config.cpp

#include "config.hpp"

#include <set>

namespace sqlat::cli {

namespace {

using io::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError("config " + path + ": " + what);
}

void allow_only(const json& j, const std::string& path, const std::set<std::string>& keys) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [k, v] : j.items()) {
        if (!keys.count(k)) fail(path + "." + k, "unknown field");
    }
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

long long integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long long>();
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

TargetSpec parse_target(const json& j, const std::string& path, const std::filesystem::path& base) {
    if (!j.is_object()) fail(path, "expected an object");
    if (!j.contains("kind")) fail(path + ".kind", "missing field");
    const std::string kind = text(j.at("kind"), path + ".kind");
    if (kind == "lattice") {
        allow_only(j, path, {"kind", "rows", "cols"});
        LatticeTarget t;
        if (!j.contains("rows") || !j.contains("cols")) fail(path, "lattice needs 'rows' and 'cols'");
        t.rows = static_cast<int>(integer(j.at("rows"), path + ".rows"));
        t.cols = static_cast<int>(integer(j.at("cols"), path + ".cols"));
        if (t.rows < 1 || t.cols < 1) fail(path, "rows and cols must be positive");
        return t;
    }
    if (kind == "edges") {
        allow_only(j, path, {"kind", "path", "nodes"});
        if (!j.contains("path")) fail(path + ".path", "missing field");
        EdgeListTarget t{resolve(base, text(j.at("path"), path + ".path")), std::nullopt};
        if (j.contains("nodes")) t.nodes = static_cast<Eigen::Index>(integer(j.at("nodes"), path + ".nodes"));
        return t;
    }
    if (kind == "transform") {
        allow_only(j, path, {"kind", "path"});
        if (!j.contains("path")) fail(path + ".path", "missing field");
        return TransformTarget{resolve(base, text(j.at("path"), path + ".path"))};
    }
    fail(path + ".kind", "expected 'lattice', 'edges' or 'transform', got '" + kind + "'");
}

CouplingSpec parse_couplings(const json& j, const std::string& path) {
    CouplingSpec c;
    if (j.is_number()) {
        c.uniform = j.get<double>();
    } else if (j.is_array()) {
        RVector v(static_cast<Eigen::Index>(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i) {
            v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
        }
        c.explicit_values = v;
    } else if (j.is_object()) {
        allow_only(j, path, {"equalized_mean"});
        if (!j.contains("equalized_mean")) fail(path + ".equalized_mean", "missing field");
        c.equalized_mean = number(j.at("equalized_mean"), path + ".equalized_mean");
    } else {
        fail(path, "expected a number, an array or {\"equalized_mean\": value}");
    }
    return c;
}

std::vector<PerturbationSeries> parse_perturbations(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    std::vector<PerturbationSeries> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        allow_only(j[i], p, {"kind", "epsilon", "realizations"});
        PerturbationSeries s;
        if (!j[i].contains("kind")) fail(p + ".kind", "missing field");
        try {
            s.kind = parse_perturbation_kind(text(j[i].at("kind"), p + ".kind"));
        } catch (const ValidationError& e) {
            fail(p + ".kind", e.what());
        }
        if (s.kind == PerturbationKind::none) fail(p + ".kind", "the unperturbed baseline is always included");
        s.epsilon = j[i].contains("epsilon") ? number(j[i].at("epsilon"), p + ".epsilon") : 0.0;
        if (s.epsilon < 0.0) fail(p + ".epsilon", "must be non-negative");
        s.realizations = j[i].contains("realizations") ? static_cast<int>(integer(j[i].at("realizations"), p + ".realizations")) : 20;
        if (s.realizations < 0) fail(p + ".realizations", "must be non-negative");
        out.push_back(s);
    }
    return out;
}

OptimizeSpec parse_optimize(const json& j, const std::string& path) {
    allow_only(j, path, {"sites", "initial", "mean_coupling", "restarts", "max_evaluations", "success_tol"});
    OptimizeSpec o;
    if (!j.contains("sites")) fail(path + ".sites", "missing field");
    o.sites = static_cast<Eigen::Index>(integer(j.at("sites"), path + ".sites"));
    if (o.sites < 2) fail(path + ".sites", "need at least two sites");
    if (j.contains("initial")) o.initial = parse_couplings(j.at("initial"), path + ".initial").explicit_values;
    if (j.contains("mean_coupling")) o.options.mean_coupling = number(j.at("mean_coupling"), path + ".mean_coupling");
    if (j.contains("restarts")) o.options.restarts = static_cast<int>(integer(j.at("restarts"), path + ".restarts"));
    if (j.contains("max_evaluations")) o.options.max_evaluations_per_run = integer(j.at("max_evaluations"), path + ".max_evaluations");
    if (j.contains("success_tol")) o.options.success_tol = number(j.at("success_tol"), path + ".success_tol");
    if (o.options.mean_coupling <= 0.0) fail(path + ".mean_coupling", "must be positive");
    if (o.options.restarts < 0) fail(path + ".restarts", "must be non-negative");
    return o;
}

}  // namespace

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    allow_only(j, "", {"model", "bath", "target", "couplings", "hamiltonian", "gamma", "gamma_total", "perturbations",
                       "seed", "optimize", "output"});
    ExperimentConfig c;
    c.source = base_dir;
    if (j.contains("model")) c.model = resolve(base_dir, text(j.at("model"), ".model"));
    if (j.contains("bath")) {
        allow_only(j.at("bath"), ".bath", {"kappa", "n_bar", "phase", "m_re", "m_im"});
        try {
            c.bath = io::bath_from_json(j.at("bath"), "config .bath");
        } catch (const ValidationError& e) {
            throw ValidationError(e.what());
        }
    }
    if (j.contains("target")) c.target = parse_target(j.at("target"), ".target", base_dir);
    if (j.contains("couplings")) c.couplings = parse_couplings(j.at("couplings"), ".couplings");
    if (j.contains("hamiltonian")) c.hamiltonian = io::cmatrix_from_json(j.at("hamiltonian"), "config .hamiltonian");
    if (j.contains("gamma")) {
        c.gamma = number(j.at("gamma"), ".gamma");
        if (c.gamma < 0.0) fail(".gamma", "must be non-negative");
    }
    if (j.contains("gamma_total")) {
        const json& g = j.at("gamma_total");
        if (!g.is_array()) fail(".gamma_total", "expected an array of numbers");
        std::vector<double> v;
        for (std::size_t i = 0; i < g.size(); ++i) {
            v.push_back(number(g[i], ".gamma_total[" + std::to_string(i) + "]"));
            if (v.back() < 0.0) fail(".gamma_total[" + std::to_string(i) + "]", "must be non-negative");
        }
        c.gamma_total = v;
    }
    if (j.contains("perturbations")) c.perturbations = parse_perturbations(j.at("perturbations"), ".perturbations");
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            fail(".seed", "expected a non-negative integer");
        }
        c.seed = s.get<std::uint64_t>();
    }
    if (j.contains("optimize")) c.optimize = parse_optimize(j.at("optimize"), ".optimize");
    if (j.contains("output")) c.output = resolve(base_dir, text(j.at("output"), ".output"));
    if (c.model && (c.bath || c.target || c.hamiltonian)) {
        fail(".model", "a model document replaces 'bath', 'target' and 'hamiltonian'");
    }
    if (c.target && c.hamiltonian) fail(".hamiltonian", "give either a target or an explicit Hamiltonian");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& p) {
    const io::json j = io::read_json_file(p);
    try {
        return parse_config(j, p.has_parent_path() ? p.parent_path() : std::filesystem::path("."));
    } catch (const ValidationError& e) {
        throw ValidationError(p.string() + ": " + e.what());
    }
}

}  // namespace sqlat::cli
