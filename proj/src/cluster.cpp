// cluster.cpp

#include "sqlattice/cluster.hpp"

#include "sqlattice/metrics.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>

namespace sqlat {

Eigen::Index AdjacencyGraph::edge_count() const {
    Eigen::Index count = 0;
    for (Eigen::Index j = 0; j < A.rows(); ++j)
        for (Eigen::Index k = j + 1; k < A.cols(); ++k)
            if (A(j, k) != 0.0) ++count;
    return count;
}

void validate_graph(const AdjacencyGraph& g, double tol) {
    require_square(g.A, "adjacency");
    require(g.A.rows() >= 1, "adjacency: empty graph");
    if ((g.A - g.A.transpose()).cwiseAbs().maxCoeff() > tol) {
        throw ValidationError("adjacency: matrix is not symmetric");
    }
    if (g.A.diagonal().cwiseAbs().maxCoeff() > tol) {
        throw ValidationError("adjacency: diagonal must be zero");
    }
}

AdjacencyGraph square_lattice(int rows, int cols) {
    if (rows < 1 || cols < 1) throw ValidationError("square_lattice: dimensions must be positive");
    const Eigen::Index n = static_cast<Eigen::Index>(rows) * cols;
    AdjacencyGraph g{RMatrix::Zero(n, n)};
    auto link = [&](Eigen::Index a, Eigen::Index b) {
        g.A(a, b) = 1.0;
        g.A(b, a) = 1.0;
    };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const Eigen::Index i = static_cast<Eigen::Index>(r) * cols + c;
            if (c + 1 < cols) link(i, i + 1);
            if (r + 1 < rows) link(i, i + cols);
        }
    }
    return g;
}

CMatrix z_from_adjacency(const AdjacencyGraph& g) {
    validate_graph(g);
    const auto n = g.n_nodes();
    const CMatrix a = g.A.cast<cplx>();
    const CMatrix id = CMatrix::Identity(n, n);
    Eigen::PartialPivLU<CMatrix> lu(a + kI * id);
    // A + i has eigenvalues a_j + i, never zero for real symmetric A.
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) throw ValidationError("z_from_adjacency: A + i is singular");
    CMatrix z = -kI * (a - kI * id) * lu.inverse();
    return 0.5 * (z + z.transpose());
}

ClusterTarget build_target(const AdjacencyGraph& graph, double z) {
    require(z >= 0.0, "build_target: squeezing must be non-negative");
    ClusterTarget t;
    t.graph = graph;
    t.z = z;
    t.Z = z_from_adjacency(graph);
    t.vp = takagi(-kI * t.Z);
    const auto n = graph.n_nodes();
    t.B.X = std::cosh(z) * CMatrix::Identity(n, n);
    t.B.Y = -kI * std::sinh(z) * t.Z;
    require_bogoliubov(t.B, "build_target", kDefaultTol * std::max(1.0, t.B.X.squaredNorm()));
    return t;
}

BogoliubovTransform build_selfinverse_cluster(const AdjacencyGraph& graph, double z) {
    require_square(graph.A, "build_selfinverse_cluster");
    require((graph.A - graph.A.transpose()).norm() <= 1e-12, "build_selfinverse_cluster: A must be symmetric");
    const auto n = graph.n_nodes();
    const CMatrix a = graph.A.cast<cplx>();
    const CMatrix id = CMatrix::Identity(n, n);
    const cplx shear = 0.5 * kI * std::exp(z);
    return {std::cosh(z) * id + shear * a, std::sinh(z) * id + shear * a};
}

Preparability is_preparable(const BogoliubovTransform& b, double tol) {
    const RVector s = Eigen::JacobiSVD<CMatrix>(b.X).singularValues();
    Preparability p;
    p.spread = s.maxCoeff() / s.minCoeff() - 1.0;
    p.preparable = p.spread <= tol;
    return p;
}

RVector nullifier_x_coefficients(const AdjacencyGraph& g, Eigen::Index j) {
    const auto n = g.n_nodes();
    RVector c = RVector::Zero(2 * n);
    c.head(n) = -g.A.row(j).transpose();
    c(n + j) = 1.0;
    return c;
}

RVector nullifier_y_coefficients(const AdjacencyGraph& g, Eigen::Index j) {
    const auto n = g.n_nodes();
    RVector c = RVector::Zero(2 * n);
    c(j) = -1.0;
    c.tail(n) = -g.A.row(j).transpose();
    return c;
}

RVector nullifier_normalization(const AdjacencyGraph& g) {
    return (1.0 + g.A.array().square().rowwise().sum()).rsqrt().matrix();
}

NullifierVariances nullifier_variances(const CovarianceState& s, const AdjacencyGraph& g) {
    const auto n = g.n_nodes();
    if (s.n_modes() != n) {
        throw ValidationError("nullifier_variances: covariance has " + std::to_string(s.n_modes()) +
                              " modes, graph has " + std::to_string(n));
    }
    const RVector r = nullifier_normalization(g);
    NullifierVariances v{RVector(n), RVector(n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        v.x(j) = r(j) * r(j) * quadratic_form_variance(s, nullifier_x_coefficients(g, j));
        v.y(j) = r(j) * r(j) * quadratic_form_variance(s, nullifier_y_coefficients(g, j));
    }
    return v;
}

RMatrix nullifier_covariance(const CovarianceState& s, const AdjacencyGraph& g) {
    const auto n = g.n_nodes();
    require(s.n_modes() == n, "nullifier_covariance: mode count mismatch");
    RMatrix c(n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) c.row(j) = nullifier_x_coefficients(g, j).transpose();
    return symmetrized(c * s.sigma * c.transpose());
}

}  // namespace sqlat
