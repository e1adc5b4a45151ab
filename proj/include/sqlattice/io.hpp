// io.hpp: JSON documents for matrices, transforms and models; edge lists; tabular text output

#pragma once

#include "sqlattice/cluster.hpp"
#include "sqlattice/linalg.hpp"
#include "sqlattice/model.hpp"
#include "sqlattice/studies.hpp"
#include "sqlattice/symplectic.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sqlat::io {

using json = nlohmann::json;

std::string version();

// Shortest round-trip decimal form of x ("nan", "inf", "-inf" for non-finite values).
std::string format_double(double x);

// {"rows": r, "cols": c, "re": [[...], ...], "im": [[...], ...]}
json to_json(const CMatrix& m);
// {"rows": r, "cols": c, "data": [[...], ...]}
json to_json(const RMatrix& m);

// `where` names the document location in error messages.
CMatrix cmatrix_from_json(const json& j, const std::string& where);
RMatrix rmatrix_from_json(const json& j, const std::string& where);
RVector rvector_from_json(const json& j, const std::string& where);

// {"X": cmatrix, "Y": cmatrix}; the loader rejects transforms that are not Bogoliubov.
json to_json(const BogoliubovTransform& b);
BogoliubovTransform bogoliubov_from_json(const json& j, const std::string& where, double tol = 1e-8);

json to_json(const SqueezedBathSpec& b);
SqueezedBathSpec bath_from_json(const json& j, const std::string& where);

// Whole-file helpers. Parse errors report line and column.
json read_json_file(const std::filesystem::path& p);
void write_json_file(const std::filesystem::path& p, const json& j);

// `u v` per line (0-indexed), optional third column weight, `#` comments. With n_nodes unset the
// node count is the largest index plus one.
AdjacencyGraph read_edge_list(std::istream& in, std::optional<Eigen::Index> n_nodes = std::nullopt,
                              const std::string& where = "edge list");
AdjacencyGraph read_edge_list_file(const std::filesystem::path& p, std::optional<Eigen::Index> n_nodes = std::nullopt);

// Persisted output of the build command; everything needed to rerun dynamics.
struct ModelDocument {
    SqueezedBathSpec bath;
    HermitianCoupling hamiltonian;
    std::optional<RVector> couplings;              // chain couplings J_1..J_N
    std::optional<RVector> squeeze_phases;
    std::optional<BogoliubovTransform> target;     // all sites, auxiliary first
    std::optional<AdjacencyGraph> graph;           // sites 1..N
    std::optional<double> z;                       // common squeezing strength of the lattice target
};

json to_json(const ModelDocument& m, const StabilityReport* stability = nullptr, const ChiralReport* chiral = nullptr);
ModelDocument model_from_json(const json& j, const std::string& where);

json to_json(const StabilityReport& r);
json to_json(const ChiralReport& r);
json to_json(const BlochMessiahFactors& f, double roundtrip_residual);

// Dense whitespace-separated rows.
void write_matrix_table(std::ostream& out, const RMatrix& m);

// Lines prefixed with "# " written before any table.
struct TableHeader {
    std::string command;
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, std::string>> fields;
    bool timestamp{true};
};

void write_header(std::ostream& out, const TableHeader& h);

// One CSV row per record; var_x_j / var_y_j columns for j = 1..N when nullifiers were computed.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

}  // namespace sqlat::io
