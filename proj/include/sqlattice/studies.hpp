// studies.hpp: noise sweeps with random Hamiltonian perturbations, and overlap equalization of chains

#pragma once

#include "sqlattice/cluster.hpp"
#include "sqlattice/linalg.hpp"
#include "sqlattice/model.hpp"
#include "sqlattice/symplectic.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sqlat {

// Name of the random engine recorded in output headers. Uniform variates are formed from the top
// 53 bits of each 64-bit draw, so sequences are identical across standard libraries.
inline constexpr const char* kRandomEngine = "mt19937_64";

enum class PerturbationKind { none, amplitude, phase };

std::string to_string(PerturbationKind k);
PerturbationKind parse_perturbation_kind(const std::string& s);

struct PerturbationSpec {
    PerturbationKind kind{PerturbationKind::none};
    double epsilon{0.0};  // half-width of the uniform distribution
    std::uint64_t seed{0};
};

// amplitude: J_jk (1 + zeta_jk), zeta symmetric real (diagonal included);
// phase:     J_jk exp(i beta_jk), beta antisymmetric real.
// One variate is drawn per upper-triangle entry in row-major order, zero entries included.
HermitianCoupling perturb(const HermitianCoupling& j, const PerturbationSpec& spec);

// splitmix64 mixing of (master, stream, index) into an independent engine seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

struct PerturbationSeries {
    PerturbationKind kind{PerturbationKind::amplitude};
    double epsilon{0.0};
    int realizations{0};
};

struct SweepProblem {
    HermitianCoupling hamiltonian;
    SqueezedBathSpec bath;
    CovarianceState target;                // pure target over all sites
    std::optional<AdjacencyGraph> graph;   // nullifiers on sites 1..N when present
};

struct SweepConfig {
    std::vector<double> gammas;            // extra damping rates, units of kappa
    std::vector<PerturbationSeries> series;
    std::uint64_t master_seed{0};
};

enum class CaseStatus { ok, unstable, unphysical };

std::string to_string(CaseStatus s);

struct SweepRecord {
    double gamma{0.0};
    double gamma_total{0.0};               // gamma * M / kappa
    PerturbationKind kind{PerturbationKind::none};
    double epsilon{0.0};
    int realization{0};
    std::uint64_t seed{0};
    CaseStatus status{CaseStatus::ok};
    double fidelity{0.0};
    double purity{0.0};
    RVector var_x;
    RVector var_y;
};

// Unperturbed baseline plus every series; each realization keeps one perturbed Hamiltonian across the
// whole gamma grid. Records are ordered (series, realization, gamma) with the baseline first.
std::vector<SweepRecord> gamma_sweep(const SweepProblem& problem, const SweepConfig& config);
std::vector<SweepRecord> gamma_sweep_serial(const SweepProblem& problem, const SweepConfig& config);

// gamma * M / kappa on {0} and 10^{-5 + k/4}, k = 0..20.
std::vector<double> default_gamma_grid(Eigen::Index m, double kappa);

// 20 amplitude realizations at 1e-3 and 20 phase realizations at 1.5e-2.
std::vector<PerturbationSeries> default_series();

// |v0 . w_j| for the open chain with couplings J_1..J_{M-1}, ascending eigenvalue order.
RVector chain_overlaps(const RVector& couplings);

// sum_j (o_j^2 - 1/M)^2; zero exactly when every overlap equals 1/sqrt(M).
double overlap_objective(const RVector& couplings);

struct EqualizeOptions {
    double mean_coupling{7.7};
    int restarts{20};
    long max_evaluations_per_run{40000};  // checked between simplex iterations
    double success_tol{1e-3};   // min overlap >= (1 - success_tol) / sqrt(M)
    double objective_tol{1e-20};
    double initial_step{0.2};   // simplex edge in log-coupling space
};

struct EqualizeResult {
    RVector couplings;
    RVector overlaps;
    double min_overlap{0.0};
    double objective{0.0};
    bool converged{false};
    int restarts_used{0};
    long evaluations{0};
};

// Nelder-Mead over log-couplings with the mean renormalized after every evaluation.
// On budget exhaustion the best point found is returned with converged = false.
EqualizeResult equalize_overlaps(Eigen::Index m, const RVector& j_init, const EqualizeOptions& opt = {});

}  // namespace sqlat
