// symplectic.hpp: Bogoliubov transforms of zero-mean pure Gaussian states
//
// Conventions used throughout the library:
//   * Mode vector b = (b_1..b_N, b_1^dag..b_N^dag). A transform acts as U^dag b U = B b with
//     B = [[X, Y], [Y*, X*]], so U^dag b_j U = sum_k X_jk b_k + Y_jk b_k^dag.
//   * The operator product U1 U2 maps to the matrix product B1 B2 (see compose()).
//   * Quadratures q_j = b_j + b_j^dag, p_j = -i (b_j - b_j^dag), ordered xi = (q_1..q_N, p_1..p_N),
//     so [q_j, p_k] = 2i delta_jk and the vacuum covariance is the identity. In terms of the
//     ladder vector, xi = Lambda b with Lambda = [[1, 1], [-i, i]].

#pragma once

#include "sqlattice/linalg.hpp"

#include <vector>

namespace sqlat {

struct BogoliubovTransform {
    CMatrix X;
    CMatrix Y;

    Eigen::Index n_modes() const { return X.rows(); }

    static BogoliubovTransform identity(Eigen::Index n);

    // Full 2N x 2N matrix [[X, Y], [Y*, X*]].
    CMatrix full() const;
};

struct BogoliubovCheck {
    bool valid{false};
    double residual{0.0};  // max of ||X X^dag - Y Y^dag - 1||_F and ||X Y^T - Y X^T||_F
};

BogoliubovCheck validate_bogoliubov(const BogoliubovTransform& b, double tol = kDefaultTol);

// Throws ValidationError when the transform does not preserve the commutators.
void require_bogoliubov(const BogoliubovTransform& b, const std::string& where, double tol = kDefaultTol);

// Complex symmetric generator S = [[Z*, K*], [K, Z]] of U = exp(-(i/2) b^T S b).
struct GeneratorMatrix {
    CMatrix S;

    Eigen::Index n_modes() const { return S.rows() / 2; }

    // Assembles S from a symmetric pair-creation block Z and a Hermitian hopping block K.
    static GeneratorMatrix from_blocks(const CMatrix& Z, const CMatrix& K);
};

void validate_generator(const GeneratorMatrix& g, double tol = kDefaultTol);

// B = exp(-i I S).
BogoliubovTransform exp_map(const GeneratorMatrix& g, double tol = kDefaultTol);

// Operator product U1 U2, i.e. B1 B2.
BogoliubovTransform compose(const BogoliubovTransform& first, const BogoliubovTransform& second);

// exp((z/2)(e^{i phi} b^dag^2 - e^{-i phi} b^2)): X = cosh z, Y = sinh z e^{i phi}.
BogoliubovTransform squeezer(double z, double phi);

// Independent single-mode squeezers on every mode.
BogoliubovTransform squeezers(const RVector& z, const RVector& phi);

// Passive transform U^dag b U = V b.
BogoliubovTransform passive_embed(const CMatrix& v, double tol = kDefaultTol);

// Direct sum acting on disjoint mode sets (first block's modes come first).
BogoliubovTransform direct_sum(const BogoliubovTransform& a, const BogoliubovTransform& b);

struct BlochMessiahFactors {
    CMatrix V;    // unitary, phase dressed as V0 e^{-i Phi/2}
    RVector Dz;   // squeezing strengths, descending
    RVector Phi;  // squeezing phases
    CMatrix W;    // unitary, phase dressed as W0 e^{-i Phi/2}

    RVector Dx() const;   // cosh(Dz)
    CVector Dy() const;   // sinh(Dz) e^{i Phi}

    // B_V B_D B_W.
    BogoliubovTransform reassemble() const;

    // Moves the squeezing phases to Phi_new while keeping the product unchanged.
    BlochMessiahFactors with_phases(const RVector& phi_new) const;
};

// Joint decomposition X = V0 Dx W0^dag, Y = V0 Dy0 W0^T with Dy0 >= 0 (returned with Phi = 0).
// Degenerate singular values of X are resolved by a Takagi factorization of the restriction
// of V0^dag Y W0* to each degenerate subspace.
BlochMessiahFactors bloch_messiah(const BogoliubovTransform& b, double tol = kDefaultTol);

// Autonne-Takagi factorization M = V V^T of a complex symmetric unitary matrix.
// The factor is the symmetric principal square root O diag(e^{i theta/2}) O^T, with O real orthogonal
// and theta in (-pi, pi] the eigenphases, so V^2 = M as well.
CMatrix takagi(const CMatrix& m, double tol = kDefaultTol);

// Quadrature-basis symplectic matrix: xi -> S_q xi under the transform.
RMatrix quadrature_symplectic(const BogoliubovTransform& b);

struct CovarianceState {
    RMatrix sigma;

    Eigen::Index n_modes() const { return sigma.rows() / 2; }

    static CovarianceState vacuum(Eigen::Index n);
};

// Covariance of U|0>: sigma = S_q S_q^T.
CovarianceState to_covariance(const BogoliubovTransform& b, double tol = kDefaultTol);

// Physicality: symmetric and sigma + i Omega >= 0 (smallest eigenvalue reported).
struct PhysicalityCheck {
    bool physical{false};
    double asymmetry{0.0};
    double min_eigenvalue{0.0};
};

PhysicalityCheck check_physical(const CovarianceState& s, double tol = 1e-9);

// Marginal covariance of a subset of modes.
CovarianceState reduce_modes(const CovarianceState& s, const std::vector<Eigen::Index>& modes);

// Generators reproducing a decomposition, for checks against exp_map.
GeneratorMatrix passive_generator(const CMatrix& v);
GeneratorMatrix squeezing_generator(const RVector& z, const RVector& phi);

// Hermitian K with V = exp(-i K).
CMatrix unitary_log_generator(const CMatrix& v);

}  // namespace sqlat
