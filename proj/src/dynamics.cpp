// dynamics.cpp

#include "sqlattice/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sqlat {

DriftDiffusion assemble(const HermitianCoupling& j, const SqueezedBathSpec& bath, double gamma) {
    validate_coupling(j);
    validate_bath(bath);
    require(gamma >= 0.0, "assemble: gamma must be non-negative");
    const auto m = j.n_sites();

    CMatrix r = kI * j.J;
    r(0, 0) += bath.kappa;
    r.diagonal().array() += gamma;
    const RMatrix rr = r.real();
    const RMatrix ri = r.imag();

    DriftDiffusion dd;
    dd.A.resize(2 * m, 2 * m);
    dd.A << -rr, ri, -ri, -rr;

    dd.D = 2.0 * gamma * RMatrix::Identity(2 * m, 2 * m);
    const double n = bath.n_bar;
    const double k2 = 2.0 * bath.kappa;
    dd.D(0, 0) += k2 * (1.0 + 2.0 * n + 2.0 * bath.m_bar.real());
    dd.D(m, m) += k2 * (1.0 + 2.0 * n - 2.0 * bath.m_bar.real());
    dd.D(0, m) += k2 * 2.0 * bath.m_bar.imag();
    dd.D(m, 0) += k2 * 2.0 * bath.m_bar.imag();
    return dd;
}

double drift_abscissa(const DriftDiffusion& dd) {
    Eigen::EigenSolver<RMatrix> es(dd.A, false);
    return es.eigenvalues().real().maxCoeff();
}

double lyapunov_residual(const DriftDiffusion& dd, const CovarianceState& s) {
    return (dd.A * s.sigma + s.sigma * dd.A.transpose() + dd.D).norm();
}

namespace {

void require_stable(const DriftDiffusion& dd) {
    require_square(dd.A, "drift");
    require(dd.D.rows() == dd.A.rows() && dd.D.cols() == dd.A.cols(), "diffusion: size mismatch with drift");
    const double eps = 1e-10 * std::max(1.0, dd.A.norm());
    const double abscissa = drift_abscissa(dd);
    if (abscissa >= -eps) {
        throw UnstableError("steady_state: drift has an eigenvalue with real part " + std::to_string(abscissa) +
                            " (dark mode: some normal mode is decoupled from the reservoir)");
    }
}

}  // namespace

CovarianceState steady_state(const DriftDiffusion& dd) {
    require_stable(dd);
    const auto n = dd.A.rows();
    Eigen::ComplexSchur<CMatrix> schur(dd.A.cast<cplx>());
    const CMatrix& q = schur.matrixU();
    const CMatrix& t = schur.matrixT();
    const CMatrix c = -(q.adjoint() * dd.D.cast<cplx>() * q);

    // T Y + Y T^dag = C with T upper triangular: column j of Y T^dag only involves columns k >= j.
    CMatrix y = CMatrix::Zero(n, n);
    for (Eigen::Index col = n - 1; col >= 0; --col) {
        CVector rhs = c.col(col);
        for (Eigen::Index k = col + 1; k < n; ++k) rhs -= std::conj(t(col, k)) * y.col(k);
        CMatrix shifted = t;
        shifted.diagonal().array() += std::conj(t(col, col));
        y.col(col) = shifted.triangularView<Eigen::Upper>().solve(rhs);
    }
    const CovarianceState s{symmetrized(RMatrix((q * y * q.adjoint()).real()))};
    const PhysicalityCheck pc = check_physical(s);
    if (!pc.physical) {
        throw ConvergenceError("steady_state: solution violates the uncertainty relation (min eigenvalue " +
                               std::to_string(pc.min_eigenvalue) + "); the drift is too close to singular");
    }
    return s;
}

CovarianceState steady_state_kronecker(const DriftDiffusion& dd) {
    require_stable(dd);
    const auto n = dd.A.rows();
    const RMatrix id = RMatrix::Identity(n, n);
    RMatrix big = RMatrix::Zero(n * n, n * n);
    // Column-major vec: vec(A S) = (1 (x) A) vec S, vec(S A^T) = (A (x) 1) vec S.
    for (Eigen::Index i = 0; i < n; ++i) {
        big.block(i * n, i * n, n, n) += dd.A;
        for (Eigen::Index j = 0; j < n; ++j) big.block(i * n, j * n, n, n) += dd.A(i, j) * id;
    }
    const RVector rhs = -Eigen::Map<const RVector>(dd.D.data(), n * n);
    const RVector x = big.partialPivLu().solve(rhs);
    const RMatrix sigma = Eigen::Map<const RMatrix>(x.data(), n, n);
    return {symmetrized(sigma)};
}

CovarianceState evolve(const CovarianceState& s0, const DriftDiffusion& dd, double t) {
    if (t < 0.0) throw ValidationError("evolve: negative time");
    require(s0.sigma.rows() == dd.A.rows(), "evolve: covariance and drift differ in size");
    if (t == 0.0) return s0;
    const auto n = dd.A.rows();
    const double norm = std::max(dd.A.lpNorm<Eigen::Infinity>(), 1e-300);
    const auto steps = static_cast<long>(std::max(1.0, std::ceil(t * norm / 2.0)));
    const double h = t / static_cast<double>(steps);

    RMatrix block = RMatrix::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = -dd.A * h;
    block.topRightCorner(n, n) = dd.D * h;
    block.bottomRightCorner(n, n) = dd.A.transpose() * h;
    const RMatrix e = block.exp();
    const RMatrix phi = e.bottomRightCorner(n, n).transpose();  // e^{A h}
    const RMatrix q = symmetrized(phi * e.topRightCorner(n, n));

    RMatrix sigma = s0.sigma;
    for (long k = 0; k < steps; ++k) sigma = phi * sigma * phi.transpose() + q;
    return {symmetrized(sigma)};
}

LadderMoments ladder_moments(const CovarianceState& s) {
    const auto m = s.n_modes();
    const RMatrix qq = s.sigma.topLeftCorner(m, m);
    const RMatrix pp = s.sigma.bottomRightCorner(m, m);
    const RMatrix qp = s.sigma.topRightCorner(m, m);
    const RMatrix pq = s.sigma.bottomLeftCorner(m, m);
    LadderMoments out;
    out.M = 0.25 * ((qq - pp).cast<cplx>() + kI * (qp + pq).cast<cplx>());
    out.N = 0.25 * ((qq + pp).cast<cplx>() + kI * (qp - pq).cast<cplx>());
    out.N.diagonal().array() -= 0.5;
    return out;
}

TmsReport tms_pair_check(const CovarianceState& s, const HermitianCoupling& j, const SqueezedBathSpec& bath) {
    validate_coupling(j);
    const auto m = j.n_sites();
    require(s.n_modes() == m, "tms_pair_check: covariance and Hamiltonian differ in mode count");

    const ChiralReport chiral = chiral_report(j);
    if (!chiral.paired) {
        throw ValidationError("tms_pair_check: spectrum of J is not chirally paired (residual " +
                              std::to_string(chiral.max_pairing_residual) + ")");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (j.J + j.J.adjoint()));
    const CMatrix& tm = es.eigenvectors();
    const LadderMoments lm = ladder_moments(s);
    const CMatrix nc = tm.transpose() * lm.N * tm.conjugate();
    const CMatrix mc = tm.adjoint() * lm.M * tm.conjugate();

    const double z0 = bath.z0();
    const double phi0 = bath.phi0();
    const double occ = std::sinh(z0) * std::sinh(z0);
    auto wrap = [](double a) { return std::abs(std::remainder(a, 2.0 * std::numbers::pi)); };

    TmsReport r;
    std::vector<Eigen::Index> partner(m);
    for (Eigen::Index i = 0; i < m; ++i) partner[i] = m - 1 - i;
    for (Eigen::Index i = 0; i < m / 2; ++i) {
        const Eigen::Index k = partner[i];
        TmsPair p;
        p.low = i;
        p.high = k;
        p.lambda = es.eigenvalues()(k);
        const cplx c = mc(i, k);
        p.strength = 0.5 * std::asinh(2.0 * std::abs(c));
        p.phase = std::arg(tm(0, i) * tm(0, k) * c);
        r.max_strength_residual = std::max(r.max_strength_residual, std::abs(p.strength - z0));
        if (z0 > 0.0) r.max_phase_residual = std::max(r.max_phase_residual, wrap(p.phase - phi0));
        r.pairs.push_back(p);
    }
    if (m % 2 == 1) {
        const Eigen::Index i0 = m / 2;
        const cplx c = mc(i0, i0);
        r.has_zero_mode = true;
        r.zero_mode_strength = 0.5 * std::asinh(2.0 * std::abs(c));
        r.zero_mode_phase = std::arg(tm(0, i0) * tm(0, i0) * c);
        r.max_strength_residual = std::max(r.max_strength_residual, std::abs(r.zero_mode_strength - z0));
        if (z0 > 0.0) r.max_phase_residual = std::max(r.max_phase_residual, wrap(r.zero_mode_phase - phi0));
    }
    for (Eigen::Index a = 0; a < m; ++a) {
        r.max_occupation_residual = std::max(r.max_occupation_residual, std::abs(nc(a, a).real() - occ));
        for (Eigen::Index b = 0; b < m; ++b) {
            if (a != b) r.max_stray_moment = std::max(r.max_stray_moment, std::abs(nc(a, b)));
            if (b != partner[a]) r.max_stray_moment = std::max(r.max_stray_moment, std::abs(mc(a, b)));
        }
    }
    r.residual = std::max({r.max_strength_residual, r.max_phase_residual, r.max_occupation_residual,
                           r.max_stray_moment});
    return r;
}

}  // namespace sqlat
