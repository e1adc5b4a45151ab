// cluster.hpp: continuous-variable cluster-state targets built from adjacency graphs

#pragma once

#include "sqlattice/linalg.hpp"
#include "sqlattice/symplectic.hpp"

namespace sqlat {

// Real symmetric adjacency matrix with zero diagonal. Weighted entries are accepted.
struct AdjacencyGraph {
    RMatrix A;

    Eigen::Index n_nodes() const { return A.rows(); }
    Eigen::Index edge_count() const;
};

void validate_graph(const AdjacencyGraph& g, double tol = 1e-12);

// Nearest-neighbour grid, open boundaries; node (r, c) has index r * cols + c.
AdjacencyGraph square_lattice(int rows, int cols);

// Z = -i (A - i)(A + i)^{-1}, unitary and symmetric for real symmetric A.
CMatrix z_from_adjacency(const AdjacencyGraph& g);

// State U_z |0> with U_z = exp(-i (z/2) b^T diag(Z*, Z) b), i.e. X = cosh z, Y = -i sinh z Z.
struct ClusterTarget {
    AdjacencyGraph graph;
    double z{0.0};
    CMatrix Z;
    CMatrix vp;  // Takagi factor of -iZ; also the passive part U^(p)dag b U^(p) = vp b
    BogoliubovTransform B;
};

ClusterTarget build_target(const AdjacencyGraph& graph, double z);

// exp((i/4) sum A_jk q_j q_k) followed by uniform squeezing: X = cosh z + (i/2) e^z A,
// Y = sinh z + (i/2) e^z A.
BogoliubovTransform build_selfinverse_cluster(const AdjacencyGraph& graph, double z);

struct Preparability {
    bool preparable{false};
    double spread{0.0};  // max / min singular value of X, minus one
};

// Whether every mode carries the same squeezing (X and Y proportional to unitaries).
Preparability is_preparable(const BogoliubovTransform& b, double tol = 1e-9);

// Coefficients in xi ordering of x_j = p_j - sum_k A_jk q_k and y_j = -q_j - sum_k A_jk p_k.
RVector nullifier_x_coefficients(const AdjacencyGraph& g, Eigen::Index j);
RVector nullifier_y_coefficients(const AdjacencyGraph& g, Eigen::Index j);

// r_j = (1 + sum_k A_jk^2)^{-1/2}, fixed by [X_j, Y_j] = 2i.
RVector nullifier_normalization(const AdjacencyGraph& g);

struct NullifierVariances {
    RVector x;  // Var(r_j x_j)
    RVector y;  // Var(r_j y_j)
};

// sigma must cover exactly the graph modes.
NullifierVariances nullifier_variances(const CovarianceState& s, const AdjacencyGraph& g);

// Covariance matrix of the unnormalized nullifiers x.
RMatrix nullifier_covariance(const CovarianceState& s, const AdjacencyGraph& g);

}  // namespace sqlat
