// symplectic.cpp

#include "sqlattice/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sqlat {

BogoliubovTransform BogoliubovTransform::identity(Eigen::Index n) {
    return {CMatrix::Identity(n, n), CMatrix::Zero(n, n)};
}

CMatrix BogoliubovTransform::full() const {
    const auto n = n_modes();
    CMatrix b(2 * n, 2 * n);
    b << X, Y, Y.conjugate(), X.conjugate();
    return b;
}

BogoliubovCheck validate_bogoliubov(const BogoliubovTransform& b, double tol) {
    require_square(b.X, "bogoliubov X");
    require_square(b.Y, "bogoliubov Y");
    if (b.X.rows() != b.Y.rows()) {
        throw ValidationError("bogoliubov: X and Y blocks differ in size");
    }
    const auto n = b.n_modes();
    const double r1 = (b.X * b.X.adjoint() - b.Y * b.Y.adjoint() - CMatrix::Identity(n, n)).norm();
    const double r2 = (b.X * b.Y.transpose() - b.Y * b.X.transpose()).norm();
    const double r = std::max(r1, r2);
    return {r <= tol, r};
}

void require_bogoliubov(const BogoliubovTransform& b, const std::string& where, double tol) {
    const auto chk = validate_bogoliubov(b, tol);
    if (!chk.valid) {
        throw ValidationError(where + ": not a Bogoliubov transform (residual " + std::to_string(chk.residual) +
                              ")");
    }
}

GeneratorMatrix GeneratorMatrix::from_blocks(const CMatrix& Z, const CMatrix& K) {
    require_square(Z, "generator Z");
    require_square(K, "generator K");
    require(Z.rows() == K.rows(), "generator: Z and K differ in size");
    const auto n = Z.rows();
    GeneratorMatrix g;
    g.S.resize(2 * n, 2 * n);
    g.S << Z.conjugate(), K.conjugate(), K, Z;
    return g;
}

void validate_generator(const GeneratorMatrix& g, double tol) {
    require_square(g.S, "generator");
    require(g.S.rows() % 2 == 0, "generator: odd dimension");
    const double scale = std::max(1.0, g.S.norm());
    if (symmetry_residual(g.S) > tol * scale) {
        throw ValidationError("generator: S is not symmetric");
    }
    const CMatrix swap = block_swap(g.n_modes());
    if ((g.S - swap * g.S.conjugate() * swap).norm() > tol * scale) {
        throw ValidationError("generator: S != G S* G");
    }
}

BogoliubovTransform exp_map(const GeneratorMatrix& g, double tol) {
    validate_generator(g, tol);
    const auto n = g.n_modes();
    const CMatrix a = -kI * commutator_form(n) * g.S;
    const CMatrix e = a.exp();
    BogoliubovTransform b{e.topLeftCorner(n, n), e.topRightCorner(n, n)};
    require_bogoliubov(b, "exp_map", tol * std::max(1.0, b.X.squaredNorm()));
    return b;
}

BogoliubovTransform compose(const BogoliubovTransform& first, const BogoliubovTransform& second) {
    if (first.n_modes() != second.n_modes()) {
        throw ValidationError("compose: mode count mismatch");
    }
    // [[X1, Y1], [Y1*, X1*]] [[X2, Y2], [Y2*, X2*]]
    return {first.X * second.X + first.Y * second.Y.conjugate(),
            first.X * second.Y + first.Y * second.X.conjugate()};
}

BogoliubovTransform squeezer(double z, double phi) {
    BogoliubovTransform b = BogoliubovTransform::identity(1);
    b.X(0, 0) = std::cosh(z);
    b.Y(0, 0) = std::sinh(z) * std::polar(1.0, phi);
    return b;
}

BogoliubovTransform squeezers(const RVector& z, const RVector& phi) {
    require(z.size() == phi.size(), "squeezers: strength and phase lengths differ");
    const auto n = z.size();
    BogoliubovTransform b{CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        b.X(j, j) = std::cosh(z(j));
        b.Y(j, j) = std::sinh(z(j)) * std::polar(1.0, phi(j));
    }
    return b;
}

BogoliubovTransform passive_embed(const CMatrix& v, double tol) {
    require_square(v, "passive_embed");
    if (unitarity_residual(v) > tol) {
        throw ValidationError("passive_embed: matrix is not unitary");
    }
    return {v, CMatrix::Zero(v.rows(), v.cols())};
}

BogoliubovTransform direct_sum(const BogoliubovTransform& a, const BogoliubovTransform& b) {
    const auto na = a.n_modes();
    const auto nb = b.n_modes();
    BogoliubovTransform out{CMatrix::Zero(na + nb, na + nb), CMatrix::Zero(na + nb, na + nb)};
    out.X.topLeftCorner(na, na) = a.X;
    out.Y.topLeftCorner(na, na) = a.Y;
    out.X.bottomRightCorner(nb, nb) = b.X;
    out.Y.bottomRightCorner(nb, nb) = b.Y;
    return out;
}

RVector BlochMessiahFactors::Dx() const { return Dz.array().cosh().matrix(); }

CVector BlochMessiahFactors::Dy() const {
    CVector d(Dz.size());
    for (Eigen::Index j = 0; j < Dz.size(); ++j) d(j) = std::sinh(Dz(j)) * std::polar(1.0, Phi(j));
    return d;
}

BogoliubovTransform BlochMessiahFactors::reassemble() const {
    const CMatrix dx = Dx().cast<cplx>().asDiagonal();
    const CMatrix dy = Dy().asDiagonal();
    return {V * dx * W.adjoint(), V * dy * W.transpose()};
}

BlochMessiahFactors BlochMessiahFactors::with_phases(const RVector& phi_new) const {
    require(phi_new.size() == Phi.size(), "with_phases: length mismatch");
    BlochMessiahFactors out = *this;
    // V0 = V e^{i Phi/2}; V' = V0 e^{-i Phi'/2}.
    for (Eigen::Index j = 0; j < Phi.size(); ++j) {
        const cplx shift = std::polar(1.0, 0.5 * (Phi(j) - phi_new(j)));
        out.V.col(j) *= shift;
        out.W.col(j) *= shift;
    }
    out.Phi = phi_new;
    return out;
}

namespace {

// Largest-margin split direction: maximizes min_j |cos(theta_j - alpha)| over alpha.
double split_direction(const std::vector<double>& phases) {
    constexpr int kGrid = 4096;
    double best_alpha = 0.0;
    double best_margin = -1.0;
    for (int g = 0; g < kGrid; ++g) {
        const double alpha = std::numbers::pi * g / kGrid;
        double margin = 1.0;
        for (double t : phases) margin = std::min(margin, std::abs(std::cos(t - alpha)));
        if (margin > best_margin) {
            best_margin = margin;
            best_alpha = alpha;
        }
    }
    return best_alpha;
}

}  // namespace

CMatrix takagi(const CMatrix& m, double tol) {
    require_square(m, "takagi");
    const auto n = m.rows();
    if (symmetry_residual(m) > tol) throw ValidationError("takagi: matrix is not symmetric");
    if (unitarity_residual(m) > tol) throw ValidationError("takagi: matrix is not unitary");
    if (n == 0) return m;

    Eigen::ComplexEigenSolver<CMatrix> ces(m, false);
    std::vector<double> phases;
    for (Eigen::Index j = 0; j < n; ++j) phases.push_back(std::arg(ces.eigenvalues()(j)));
    const double alpha = split_direction(phases);

    // Re(e^{-i alpha} M) has eigenvalues cos(theta - alpha), bounded away from zero, so its sign
    // separates the spectrum into two half-planes.
    const CMatrix rotated = std::polar(1.0, -alpha) * m;
    const RMatrix c = symmetrized(rotated.real());
    Eigen::SelfAdjointEigenSolver<RMatrix> split(c);

    RMatrix o = RMatrix::Zero(n, n);
    Eigen::Index filled = 0;
    for (int sign : {+1, -1}) {
        std::vector<Eigen::Index> cols;
        for (Eigen::Index j = 0; j < n; ++j) {
            if ((split.eigenvalues()(j) > 0) == (sign > 0)) cols.push_back(j);
        }
        if (cols.empty()) continue;
        const auto k = static_cast<Eigen::Index>(cols.size());
        RMatrix q(n, k);
        for (Eigen::Index i = 0; i < k; ++i) q.col(i) = split.eigenvectors().col(cols[i]);
        // Inside a half-plane the phase is a monotone function of sin(theta - alpha_g), and cos is
        // a smooth function of it, so diagonalizing the imaginary part alone is well conditioned.
        const double alpha_g = sign > 0 ? alpha : alpha + std::numbers::pi;
        const CMatrix block = std::polar(1.0, -alpha_g) * (q.transpose().cast<cplx>() * m * q.cast<cplx>());
        Eigen::SelfAdjointEigenSolver<RMatrix> inner(symmetrized(block.imag()));
        o.middleCols(filled, k) = q * inner.eigenvectors();
        filled += k;
    }

    // O D^{1/2} O^T: the principal square root, independent of the basis chosen inside degenerate
    // eigenspaces.
    const CMatrix oc = o.cast<cplx>();
    const CMatrix diag = oc.transpose() * m * oc;
    CMatrix v = oc;
    for (Eigen::Index j = 0; j < n; ++j) v.col(j) *= std::polar(1.0, 0.5 * std::arg(diag(j, j)));
    const CMatrix root = v * oc.transpose();
    return 0.5 * (root + root.transpose());
}

BlochMessiahFactors bloch_messiah(const BogoliubovTransform& b, double tol) {
    require_bogoliubov(b, "bloch_messiah", tol * std::max(1.0, b.X.squaredNorm()));
    const auto n = b.n_modes();
    Eigen::JacobiSVD<CMatrix> svd(b.X, Eigen::ComputeFullU | Eigen::ComputeFullV);
    CMatrix v0 = svd.matrixU();
    CMatrix w0 = svd.matrixV();
    const RVector sx = svd.singularValues();
    const CMatrix yp = v0.adjoint() * b.Y * w0.conjugate();

    RVector dy = RVector::Zero(n);
    const double cluster_tol = 1e-9 * std::max(1.0, n > 0 ? sx(0) : 1.0);
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && sx(stop - 1) - sx(stop) <= cluster_tol) ++stop;
        const Eigen::Index k = stop - start;
        CMatrix blk = yp.block(start, start, k, k);
        blk = 0.5 * (blk + blk.transpose()).eval();
        const double scale = blk.norm() / std::sqrt(static_cast<double>(k));
        if (scale > 1e-14) {
            CMatrix u;
            if (k == 1) {
                u = CMatrix::Constant(1, 1, std::polar(1.0, 0.5 * std::arg(blk(0, 0))));
            } else {
                // Within a degenerate subspace blk = sinh(z) x (symmetric unitary).
                CMatrix unit = blk / scale;
                Eigen::JacobiSVD<CMatrix> polar(unit, Eigen::ComputeFullU | Eigen::ComputeFullV);
                unit = polar.matrixU() * polar.matrixV().adjoint();
                unit = 0.5 * (unit + unit.transpose()).eval();
                u = takagi(unit, 1e-6);
            }
            v0.middleCols(start, k) = v0.middleCols(start, k) * u;
            w0.middleCols(start, k) = w0.middleCols(start, k) * u;
            const CMatrix d = u.adjoint() * blk * u.conjugate();
            for (Eigen::Index j = 0; j < k; ++j) dy(start + j) = std::max(0.0, d(j, j).real());
        }
        start = stop;
    }

    BlochMessiahFactors f;
    f.V = v0;
    f.W = w0;
    f.Dz = dy.array().asinh().matrix();
    f.Phi = RVector::Zero(n);
    return f;
}

RMatrix quadrature_symplectic(const BogoliubovTransform& b) {
    const auto n = b.n_modes();
    const RMatrix xr = b.X.real(), xi = b.X.imag(), yr = b.Y.real(), yi = b.Y.imag();
    RMatrix s(2 * n, 2 * n);
    s << xr + yr, yi - xi, xi + yi, xr - yr;
    return s;
}

CovarianceState CovarianceState::vacuum(Eigen::Index n) { return {RMatrix::Identity(2 * n, 2 * n)}; }

CovarianceState to_covariance(const BogoliubovTransform& b, double tol) {
    require_bogoliubov(b, "to_covariance", tol * std::max(1.0, b.X.squaredNorm()));
    const RMatrix s = quadrature_symplectic(b);
    return {symmetrized(s * s.transpose())};
}

PhysicalityCheck check_physical(const CovarianceState& s, double tol) {
    require_square(s.sigma, "covariance");
    require(s.sigma.rows() % 2 == 0, "covariance: odd dimension");
    PhysicalityCheck out;
    out.asymmetry = (s.sigma - s.sigma.transpose()).norm();
    const CMatrix h = s.sigma.cast<cplx>() + kI * symplectic_form(s.n_modes()).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    const double scale = std::max(1.0, s.sigma.norm());
    out.physical = out.asymmetry <= tol * scale && out.min_eigenvalue >= -tol * scale;
    return out;
}

CovarianceState reduce_modes(const CovarianceState& s, const std::vector<Eigen::Index>& modes) {
    const auto n = s.n_modes();
    const auto k = static_cast<Eigen::Index>(modes.size());
    std::vector<Eigen::Index> idx;
    for (auto m : modes) {
        require(m >= 0 && m < n, "reduce_modes: mode index out of range");
        idx.push_back(m);
    }
    for (auto m : modes) idx.push_back(m + n);
    CovarianceState out{RMatrix(2 * k, 2 * k)};
    for (Eigen::Index i = 0; i < 2 * k; ++i)
        for (Eigen::Index j = 0; j < 2 * k; ++j) out.sigma(i, j) = s.sigma(idx[i], idx[j]);
    return out;
}

CMatrix unitary_log_generator(const CMatrix& v) {
    require_square(v, "unitary_log_generator");
    // Unitary matrices are normal, so the complex Schur form is diagonal.
    Eigen::ComplexSchur<CMatrix> schur(v);
    const CMatrix& q = schur.matrixU();
    const CMatrix& t = schur.matrixT();
    CVector angles(v.rows());
    for (Eigen::Index j = 0; j < v.rows(); ++j) angles(j) = std::arg(t(j, j));
    CMatrix k = -(q * angles.asDiagonal() * q.adjoint());
    return 0.5 * (k + k.adjoint());
}

GeneratorMatrix passive_generator(const CMatrix& v) {
    return GeneratorMatrix::from_blocks(CMatrix::Zero(v.rows(), v.cols()), unitary_log_generator(v));
}

GeneratorMatrix squeezing_generator(const RVector& z, const RVector& phi) {
    require(z.size() == phi.size(), "squeezing_generator: length mismatch");
    CMatrix zb = CMatrix::Zero(z.size(), z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) zb(j, j) = kI * z(j) * std::polar(1.0, phi(j));
    return GeneratorMatrix::from_blocks(zb, CMatrix::Zero(z.size(), z.size()));
}

}  // namespace sqlat
