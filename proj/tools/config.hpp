// config.hpp: experiment configuration documents for the command-line tool

#pragma once

#include "sqlattice/io.hpp"
#include "sqlattice/studies.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sqlat::cli {

struct LatticeTarget {
    int rows{1};
    int cols{1};
};

struct EdgeListTarget {
    std::filesystem::path path;
    std::optional<Eigen::Index> nodes;
};

struct TransformTarget {
    std::filesystem::path path;  // Bogoliubov document over the lattice sites 1..N
};

using TargetSpec = std::variant<LatticeTarget, EdgeListTarget, TransformTarget>;

// Chain couplings: one value for every link, an explicit list, or an overlap-equalized chain with
// the given mean.
struct CouplingSpec {
    std::optional<double> uniform;
    std::optional<RVector> explicit_values;
    std::optional<double> equalized_mean;
};

struct OptimizeSpec {
    Eigen::Index sites{2};
    std::optional<RVector> initial;
    EqualizeOptions options;
};

struct ExperimentConfig {
    std::filesystem::path source;  // directory used to resolve relative paths
    std::optional<std::filesystem::path> model;
    std::optional<SqueezedBathSpec> bath;
    std::optional<TargetSpec> target;
    std::optional<CouplingSpec> couplings;
    std::optional<CMatrix> hamiltonian;
    double gamma{0.0};
    std::optional<std::vector<double>> gamma_total;  // gamma * M / kappa grid for sweeps
    std::vector<PerturbationSeries> perturbations = default_series();
    std::uint64_t seed{0};
    std::optional<OptimizeSpec> optimize;
    std::filesystem::path output{"out"};
};

// Unknown keys and type mismatches raise ValidationError naming the field path.
ExperimentConfig parse_config(const io::json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& p);

}  // namespace sqlat::cli
