// io.cpp

#include "sqlattice/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#ifndef SQLATTICE_VERSION_STRING
#define SQLATTICE_VERSION_STRING "unknown"
#endif

namespace sqlat::io {

std::string version() { return SQLATTICE_VERSION_STRING; }

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError(where + ": " + what);
}

const json& member(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(where, "missing field '" + key + "'");
    return *it;
}

Eigen::Index index_field(const json& j, const std::string& key, const std::string& where) {
    const json& v = member(j, key, where);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(where + "." + key, "expected a non-negative integer");
    return static_cast<Eigen::Index>(v.get<long long>());
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

RMatrix dense_rows(const json& rows, Eigen::Index r, Eigen::Index c, const std::string& where) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != r) {
        fail(where, "expected " + std::to_string(r) + " rows");
    }
    RMatrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        const std::string rw = where + "[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) {
            fail(rw, "expected " + std::to_string(c) + " entries");
        }
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = number(row[static_cast<std::size_t>(k)], rw);
    }
    return m;
}

json rows_of(const RMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

json to_json(const CMatrix& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", rows_of(m.real())}, {"im", rows_of(m.imag())}};
}

json to_json(const RMatrix& m) { return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows_of(m)}}; }

CMatrix cmatrix_from_json(const json& j, const std::string& where) {
    const auto r = index_field(j, "rows", where);
    const auto c = index_field(j, "cols", where);
    const RMatrix re = dense_rows(member(j, "re", where), r, c, where + ".re");
    RMatrix im = RMatrix::Zero(r, c);
    if (j.contains("im")) im = dense_rows(j.at("im"), r, c, where + ".im");
    CMatrix out(r, c);
    out.real() = re;
    out.imag() = im;
    return out;
}

RMatrix rmatrix_from_json(const json& j, const std::string& where) {
    const auto r = index_field(j, "rows", where);
    const auto c = index_field(j, "cols", where);
    return dense_rows(member(j, "data", where), r, c, where + ".data");
}

RVector rvector_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    RVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], where + "[" + std::to_string(i) + "]");
    return v;
}

json to_json(const BogoliubovTransform& b) { return {{"X", to_json(b.X)}, {"Y", to_json(b.Y)}}; }

BogoliubovTransform bogoliubov_from_json(const json& j, const std::string& where, double tol) {
    BogoliubovTransform b{cmatrix_from_json(member(j, "X", where), where + ".X"),
                          cmatrix_from_json(member(j, "Y", where), where + ".Y")};
    const auto v = validate_bogoliubov(b, tol);
    if (!v.valid) {
        fail(where, "not a Bogoliubov transform (symplectic residual " + format_double(v.residual) + ")");
    }
    return b;
}

json to_json(const SqueezedBathSpec& b) {
    return {{"kappa", b.kappa}, {"n_bar", b.n_bar}, {"m_re", b.m_bar.real()}, {"m_im", b.m_bar.imag()}};
}

SqueezedBathSpec bath_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    SqueezedBathSpec b;
    if (j.contains("kappa")) b.kappa = number(j.at("kappa"), where + ".kappa");
    b.n_bar = number(member(j, "n_bar", where), where + ".n_bar");
    const bool has_phase = j.contains("phase");
    const bool has_m = j.contains("m_re") || j.contains("m_im");
    if (has_phase && has_m) fail(where, "give either 'phase' (pure reservoir) or 'm_re'/'m_im', not both");
    if (has_phase) {
        b = SqueezedBathSpec::pure(b.kappa, b.n_bar, number(j.at("phase"), where + ".phase"));
    } else {
        const double re = j.contains("m_re") ? number(j.at("m_re"), where + ".m_re") : 0.0;
        const double im = j.contains("m_im") ? number(j.at("m_im"), where + ".m_im") : 0.0;
        b.m_bar = {re, im};
    }
    try {
        validate_bath(b);
    } catch (const ValidationError& e) {
        fail(where, e.what());
    }
    return b;
}

json read_json_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ValidationError(p.string() + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line and column.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ValidationError(p.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                              ": JSON syntax error");
    }
}

void write_json_file(const std::filesystem::path& p, const json& j) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw ValidationError(p.string() + ": cannot write file");
    out << j.dump(2) << '\n';
}

AdjacencyGraph read_edge_list(std::istream& in, std::optional<Eigen::Index> n_nodes, const std::string& where) {
    struct Edge {
        long u, v;
        double w;
    };
    std::vector<Edge> edges;
    std::string line;
    long max_index = -1;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long u = 0, v = 0;
        if (!(ls >> u)) continue;
        const std::string at = where + ":" + std::to_string(lineno);
        if (!(ls >> v)) fail(at, "expected two node indices");
        double w = 1.0;
        if (!(ls >> w)) {
            w = 1.0;
            ls.clear();
        }
        std::string rest;
        if (ls >> rest) fail(at, "unexpected trailing text '" + rest + "'");
        if (u < 0 || v < 0) fail(at, "node indices must be non-negative");
        if (u == v) fail(at, "self-loops are not allowed");
        edges.push_back({u, v, w});
        max_index = std::max({max_index, u, v});
    }
    const Eigen::Index n = n_nodes.value_or(max_index + 1);
    if (n < 1) fail(where, "graph has no nodes");
    AdjacencyGraph g{RMatrix::Zero(n, n)};
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n) fail(where, "node index exceeds the node count " + std::to_string(n));
        g.A(e.u, e.v) = g.A(e.v, e.u) = e.w;
    }
    return g;
}

AdjacencyGraph read_edge_list_file(const std::filesystem::path& p, std::optional<Eigen::Index> n_nodes) {
    std::ifstream in(p);
    if (!in) throw ValidationError(p.string() + ": cannot open file");
    return read_edge_list(in, n_nodes, p.string());
}

json to_json(const StabilityReport& r) {
    json clusters = json::array();
    for (const auto& c : r.clusters) {
        clusters.push_back({{"eigenvalue", c.eigenvalue}, {"multiplicity", c.multiplicity}, {"overlap", c.overlap}});
    }
    return {{"eigenvalues", std::vector<double>(r.eigenvalues.begin(), r.eigenvalues.end())},
            {"mode_overlaps", std::vector<double>(r.mode_overlaps.begin(), r.mode_overlaps.end())},
            {"clusters", clusters},
            {"min_overlap", r.min_overlap},
            {"min_real_part", r.min_real_part},
            {"dark_mode_free", r.dark_mode_free},
            {"spectrally_stable", r.spectrally_stable}};
}

json to_json(const ChiralReport& r) {
    json out{{"paired", r.paired},
             {"max_pairing_residual", r.max_pairing_residual},
             {"max_overlap_residual", r.max_overlap_residual},
             {"pairs", json::array()}};
    for (const auto& p : r.pairs) out["pairs"].push_back({p.lambda_low, p.lambda_high});
    out["zero_mode"] = r.zero_mode ? json(*r.zero_mode) : json(nullptr);
    return out;
}

json to_json(const BlochMessiahFactors& f, double roundtrip_residual) {
    return {{"Dz", std::vector<double>(f.Dz.begin(), f.Dz.end())},
            {"Phi", std::vector<double>(f.Phi.begin(), f.Phi.end())},
            {"V", to_json(f.V)},
            {"W", to_json(f.W)},
            {"roundtrip_residual", roundtrip_residual}};
}

json to_json(const ModelDocument& m, const StabilityReport* stability, const ChiralReport* chiral) {
    json out{{"format", "sqlattice-model"},
             {"version", version()},
             {"sites", m.hamiltonian.n_sites()},
             {"bath", to_json(m.bath)},
             {"J", to_json(m.hamiltonian.J)}};
    if (m.couplings) out["couplings"] = std::vector<double>(m.couplings->begin(), m.couplings->end());
    if (m.squeeze_phases) out["squeeze_phases"] = std::vector<double>(m.squeeze_phases->begin(), m.squeeze_phases->end());
    if (m.target) out["target"] = to_json(*m.target);
    if (m.graph) out["graph"] = to_json(m.graph->A);
    if (m.z) out["z"] = *m.z;
    if (stability) out["stability"] = to_json(*stability);
    if (chiral) out["chiral"] = to_json(*chiral);
    return out;
}

ModelDocument model_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    if (j.value("format", std::string()) != "sqlattice-model") fail(where, "not a model document (format field)");
    ModelDocument m;
    m.bath = bath_from_json(member(j, "bath", where), where + ".bath");
    m.hamiltonian.J = cmatrix_from_json(member(j, "J", where), where + ".J");
    try {
        validate_coupling(m.hamiltonian);
    } catch (const ValidationError& e) {
        fail(where + ".J", e.what());
    }
    const auto sites = index_field(j, "sites", where);
    if (sites != m.hamiltonian.n_sites()) fail(where + ".sites", "does not match the size of J");
    if (j.contains("couplings")) m.couplings = rvector_from_json(j.at("couplings"), where + ".couplings");
    if (j.contains("squeeze_phases")) m.squeeze_phases = rvector_from_json(j.at("squeeze_phases"), where + ".squeeze_phases");
    if (j.contains("target")) {
        m.target = bogoliubov_from_json(j.at("target"), where + ".target");
        if (m.target->n_modes() != sites) fail(where + ".target", "mode count differs from 'sites'");
    }
    if (j.contains("graph")) {
        m.graph = AdjacencyGraph{rmatrix_from_json(j.at("graph"), where + ".graph")};
        try {
            validate_graph(*m.graph);
        } catch (const ValidationError& e) {
            fail(where + ".graph", e.what());
        }
        if (m.graph->n_nodes() + 1 != sites) fail(where + ".graph", "must cover sites 1..N");
    }
    if (j.contains("z")) m.z = number(j.at("z"), where + ".z");
    return m;
}

void write_matrix_table(std::ostream& out, const RMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            if (k) out << ' ';
            out << format_double(m(i, k));
        }
        out << '\n';
    }
}

void write_header(std::ostream& out, const TableHeader& h) {
    out << "# sqlattice " << version() << '\n';
    out << "# command: " << h.command << '\n';
    if (h.seed) out << "# seed: " << *h.seed << '\n';
    out << "# generator: " << kRandomEngine << '\n';
    for (const auto& [k, v] : h.fields) out << "# " << k << ": " << v << '\n';
    if (h.timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        out << "# timestamp: " << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    Eigen::Index n = 0;
    for (const auto& r : records) n = std::max(n, r.var_x.size());
    out << "series,epsilon,realization,seed,gamma,gamma_total,status,fidelity,purity";
    for (Eigen::Index j = 1; j <= n; ++j) out << ",var_x_" << j;
    for (Eigen::Index j = 1; j <= n; ++j) out << ",var_y_" << j;
    out << '\n';
    for (const auto& r : records) {
        out << to_string(r.kind) << ',' << format_double(r.epsilon) << ',' << r.realization << ',' << r.seed << ','
            << format_double(r.gamma) << ',' << format_double(r.gamma_total) << ','
            << to_string(r.status) << ',' << format_double(r.fidelity) << ','
            << format_double(r.purity);
        for (Eigen::Index j = 0; j < n; ++j) out << ',' << (j < r.var_x.size() ? format_double(r.var_x(j)) : "nan");
        for (Eigen::Index j = 0; j < n; ++j) out << ',' << (j < r.var_y.size() ? format_double(r.var_y(j)) : "nan");
        out << '\n';
    }
}

}  // namespace sqlat::io
