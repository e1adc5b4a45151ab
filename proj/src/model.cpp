// model.cpp

#include "sqlattice/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sqlat {

void validate_coupling(const HermitianCoupling& h, double tol) {
    require_square(h.J, "coupling");
    require(h.J.rows() >= 1, "coupling: empty matrix");
    const double scale = std::max(1.0, h.J.norm());
    if (hermiticity_residual(h.J) > tol * scale) {
        throw ValidationError("coupling: J is not Hermitian");
    }
}

SqueezedBathSpec SqueezedBathSpec::pure(double kappa, double n_bar, double phase) {
    SqueezedBathSpec b;
    b.kappa = kappa;
    b.n_bar = n_bar;
    b.m_bar = std::polar(std::sqrt(n_bar * (n_bar + 1.0)), phase);
    return b;
}

bool SqueezedBathSpec::is_pure(double tol) const {
    return std::abs(std::abs(m_bar) - std::sqrt(n_bar * (n_bar + 1.0))) <= tol * std::max(1.0, n_bar);
}

double SqueezedBathSpec::z0() const { return std::atanh(std::sqrt(n_bar / (n_bar + 1.0))); }

double SqueezedBathSpec::phi0() const { return std::abs(m_bar) > 0.0 ? std::arg(m_bar) : 0.0; }

void validate_bath(const SqueezedBathSpec& bath) {
    if (!(bath.kappa > 0.0)) throw ValidationError("bath: kappa must be positive");
    if (!(bath.n_bar >= 0.0)) throw ValidationError("bath: n_bar must be non-negative");
    const double bound = std::sqrt(bath.n_bar * (bath.n_bar + 1.0));
    if (std::abs(bath.m_bar) > bound * (1.0 + 1e-12) + 1e-15) {
        throw ValidationError("bath: |m_bar| exceeds sqrt(n_bar (n_bar + 1)) (unphysical reservoir)");
    }
}

HermitianCoupling linear_chain(const RVector& couplings, const RVector& thetas) {
    require(couplings.size() == thetas.size(), "linear_chain: couplings and phases differ in length");
    require(couplings.size() >= 1, "linear_chain: need at least one coupling");
    for (Eigen::Index j = 0; j < couplings.size(); ++j) {
        if (!(couplings(j) > 0.0)) {
            throw ValidationError("linear_chain: coupling " + std::to_string(j + 1) + " is not positive");
        }
    }
    const auto m = couplings.size() + 1;
    HermitianCoupling h{CMatrix::Zero(m, m)};
    for (Eigen::Index j = 1; j < m; ++j) {
        const cplx e = kI * couplings(j - 1) * std::polar(1.0, -thetas(j - 1));
        h.J(j - 1, j) = e;
        h.J(j, j - 1) = std::conj(e);
    }
    return h;
}

HermitianCoupling conjugate_hamiltonian(const HermitianCoupling& js, const CMatrix& vp, double tol) {
    validate_coupling(js);
    require_square(vp, "conjugate_hamiltonian: Vp");
    require(vp.rows() + 1 == js.n_sites(), "conjugate_hamiltonian: Vp must act on sites 1..N");
    if (unitarity_residual(vp) > tol) throw ValidationError("conjugate_hamiltonian: Vp is not unitary");
    const auto m = js.n_sites();
    CMatrix u = CMatrix::Identity(m, m);
    u.bottomRightCorner(m - 1, m - 1) = vp;
    // U^(p) b U^(p)dag = Vp^dag b, hence U^(p) H_S U^(p)dag = b^dag (U J_S U^dag) b.
    CMatrix j = u * js.J * u.adjoint();
    return {0.5 * (j + j.adjoint())};
}

LemmaCheck check_lemma_passivity(const HermitianCoupling& js, const SqueezingProfile& prof, double tol) {
    const auto m = js.n_sites();
    require(prof.z.size() == m && prof.phi.size() == m, "check_lemma_passivity: profile length mismatch");
    LemmaCheck out;
    auto flag = [&](Eigen::Index j, Eigen::Index k, std::string why) {
        out.passive = false;
        out.violations.push_back({j, k, std::move(why)});
    };
    const double scale = std::max(1.0, js.J.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < m; ++j) {
        if (std::abs(js.J(j, j)) > tol * scale && prof.z(j) != 0.0) {
            flag(j, j, "on-site energy on a squeezed mode");
        }
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index k = j + 1; k < m; ++k) {
            const cplx jk = js.J(j, k);
            if (std::abs(jk) <= tol * scale) continue;
            if (std::abs(prof.z(j) - prof.z(k)) > tol) {
                flag(j, k, "unequal squeezing strengths on coupled modes");
                continue;
            }
            if (prof.z(j) == 0.0) continue;
            const double target = 0.5 * (prof.phi(j) - prof.phi(k) + std::numbers::pi);
            const double d = std::remainder(std::arg(jk) - target, std::numbers::pi);
            if (std::abs(d) > 1e-8) flag(j, k, "coupling phase incompatible with squeezing phases");
        }
    }
    return out;
}

StabilityReport stability_report(const HermitianCoupling& j, double kappa, const StabilityOptions& opt) {
    validate_coupling(j);
    const auto m = j.n_sites();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (j.J + j.J.adjoint()));
    StabilityReport r;
    r.eigenvalues = es.eigenvalues();
    r.mode_overlaps = es.eigenvectors().row(0).cwiseAbs().transpose();

    const double scale = std::max(1.0, j.J.norm());
    Eigen::Index start = 0;
    while (start < m) {
        Eigen::Index stop = start + 1;
        while (stop < m && r.eigenvalues(stop) - r.eigenvalues(stop - 1) <= opt.cluster_rel_tol * scale) ++stop;
        EigenCluster c;
        c.multiplicity = stop - start;
        c.eigenvalue = r.eigenvalues.segment(start, c.multiplicity).mean();
        c.overlap = r.mode_overlaps.segment(start, c.multiplicity).norm();
        r.clusters.push_back(c);
        start = stop;
    }
    r.min_overlap = 1.0;
    // Inside a repeated eigenvalue some combination is always orthogonal to v0.
    for (const auto& c : r.clusters) r.min_overlap = std::min(r.min_overlap, c.multiplicity > 1 ? 0.0 : c.overlap);
    r.dark_mode_free = r.min_overlap > opt.overlap_threshold;

    CMatrix rmat = kI * j.J;
    rmat(0, 0) += kappa;
    Eigen::ComplexEigenSolver<CMatrix> ces(rmat, false);
    r.min_real_part = ces.eigenvalues().real().minCoeff();
    r.spectrally_stable = r.min_real_part > 1e-10 * (scale + kappa);
    return r;
}

ChiralReport chiral_report(const HermitianCoupling& j, double tol) {
    const StabilityReport s = stability_report(j, 1.0);
    const auto& cl = s.clusters;
    const auto c = static_cast<Eigen::Index>(cl.size());
    ChiralReport out;
    out.paired = true;
    for (Eigen::Index i = 0; i < c / 2; ++i) {
        const auto& lo = cl[i];
        const auto& hi = cl[c - 1 - i];
        ChiralPair p{lo.eigenvalue, hi.eigenvalue, std::abs(lo.eigenvalue + hi.eigenvalue),
                     std::abs(lo.overlap - hi.overlap)};
        if (lo.multiplicity != hi.multiplicity) p.pairing_residual = std::max(p.pairing_residual, 1.0);
        out.max_pairing_residual = std::max(out.max_pairing_residual, p.pairing_residual);
        out.max_overlap_residual = std::max(out.max_overlap_residual, p.overlap_residual);
        out.pairs.push_back(p);
    }
    if (c % 2 == 1) {
        const double mid = cl[c / 2].eigenvalue;
        out.zero_mode = mid;
        out.max_pairing_residual = std::max(out.max_pairing_residual, std::abs(mid));
    }
    const double scale = std::max(1.0, j.J.norm());
    out.paired = out.max_pairing_residual <= tol * scale && out.max_overlap_residual <= tol;
    return out;
}

SqueezingProfile TheoremModel::profile() const {
    const auto n = squeeze_phases.size();
    SqueezingProfile p{RVector::Constant(n + 1, bath.z0()), RVector(n + 1)};
    p.phi(0) = bath.phi0();
    p.phi.tail(n) = squeeze_phases;
    return p;
}

TheoremModel build_theorem_model(const SqueezedBathSpec& bath, const RVector& couplings,
                                 const RVector& squeeze_phases, const CMatrix& vp) {
    validate_bath(bath);
    if (!bath.is_pure()) throw ValidationError("theorem model: the reservoir must be pure");
    const auto n = couplings.size();
    require(n >= 1, "theorem model: need at least one lattice mode");
    require(squeeze_phases.size() == n, "theorem model: need one squeezing phase per lattice mode");
    require(vp.rows() == n && vp.cols() == n, "theorem model: Vp must be N x N");

    TheoremModel m;
    m.bath = bath;
    m.couplings = couplings;
    m.squeeze_phases = squeeze_phases;
    m.vp = vp;

    RVector thetas(n);
    double prev = bath.phi0();
    for (Eigen::Index j = 0; j < n; ++j) {
        thetas(j) = 0.5 * (squeeze_phases(j) - prev);
        prev = squeeze_phases(j);
    }
    m.chain = linear_chain(couplings, thetas);
    m.hamiltonian = conjugate_hamiltonian(m.chain, vp);

    const double z0 = bath.z0();
    const BogoliubovTransform lattice =
        compose(passive_embed(vp), squeezers(RVector::Constant(n, z0), squeeze_phases));
    m.target = direct_sum(squeezer(z0, bath.phi0()), lattice);
    return m;
}

TheoremModel model_from_target(const SqueezedBathSpec& bath, const RVector& couplings,
                               const BogoliubovTransform& target, double tol) {
    const auto f = bloch_messiah(target);
    const double z0 = bath.z0();
    for (Eigen::Index j = 0; j < f.Dz.size(); ++j) {
        if (std::abs(f.Dz(j) - z0) > tol) {
            throw ValidationError("model_from_target: squeezing strength " + std::to_string(f.Dz(j)) +
                                  " differs from the reservoir value " + std::to_string(z0));
        }
    }
    return build_theorem_model(bath, couplings, f.Phi, f.V);
}

}  // namespace sqlat
