// model.hpp: passive lattice Hamiltonians H = sum_jk J_jk b_j^dag b_k, their construction from a
// target state, and spectral diagnostics (dark modes, chiral pairing)

#pragma once

#include "sqlattice/linalg.hpp"
#include "sqlattice/symplectic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sqlat {

// Coefficient matrix of H in units of kappa. Site 0 is the auxiliary (damped) mode.
struct HermitianCoupling {
    CMatrix J;

    Eigen::Index n_sites() const { return J.rows(); }
};

void validate_coupling(const HermitianCoupling& h, double tol = kDefaultTol);

// Markovian squeezed reservoir acting on site 0.
struct SqueezedBathSpec {
    double kappa{1.0};
    double n_bar{0.0};
    cplx m_bar{0.0, 0.0};

    // Pure reservoir with |m| = sqrt(n (n + 1)) and arg m = phase.
    static SqueezedBathSpec pure(double kappa, double n_bar, double phase);

    bool is_pure(double tol = 1e-12) const;
    // tanh(z0) = sqrt(n / (n + 1)).
    double z0() const;
    // arg(m); only meaningful for a pure reservoir with n > 0.
    double phi0() const;
};

void validate_bath(const SqueezedBathSpec& bath);

struct SqueezingProfile {
    RVector z;
    RVector phi;
};

// Open chain with J_{j-1,j} = i J_j e^{-i theta_j}, zero diagonal.
HermitianCoupling linear_chain(const RVector& couplings, const RVector& thetas);

// J = U J_S U^dag with U = diag(1, Vp), where U^(p)dag b_j U^(p) = sum_k (Vp)_jk b_k.
HermitianCoupling conjugate_hamiltonian(const HermitianCoupling& js, const CMatrix& vp, double tol = kDefaultTol);

struct LemmaViolation {
    Eigen::Index j{0};
    Eigen::Index k{0};
    std::string reason;
};

struct LemmaCheck {
    bool passive{true};
    std::vector<LemmaViolation> violations;
};

// Whether H_S stays passive under the single-mode squeezers of prof.
LemmaCheck check_lemma_passivity(const HermitianCoupling& js, const SqueezingProfile& prof, double tol = 1e-10);

struct EigenCluster {
    double eigenvalue{0.0};
    Eigen::Index multiplicity{1};
    double overlap{0.0};  // norm of the projection of v0 onto the eigenspace
};

struct StabilityReport {
    RVector eigenvalues;               // ascending
    RVector mode_overlaps;             // |v0 . w_j| per eigenvector, same order
    std::vector<EigenCluster> clusters;
    double min_overlap{0.0};           // zero whenever an eigenvalue is repeated
    double min_real_part{0.0};         // min Re spec(i J + Gamma)
    bool dark_mode_free{false};        // min_overlap > overlap_threshold
    bool spectrally_stable{false};     // min_real_part > 0 (with margin)
};

struct StabilityOptions {
    double overlap_threshold = 1e-8;
    double cluster_rel_tol = 1e-8;
};

StabilityReport stability_report(const HermitianCoupling& j, double kappa, const StabilityOptions& opt = {});

struct ChiralPair {
    double lambda_low{0.0};
    double lambda_high{0.0};
    double pairing_residual{0.0};  // |lambda_low + lambda_high|
    double overlap_residual{0.0};  // |o_low - o_high|
};

struct ChiralReport {
    std::vector<ChiralPair> pairs;
    std::optional<double> zero_mode;  // eigenvalue of the unpaired middle mode (odd counts)
    double max_pairing_residual{0.0};
    double max_overlap_residual{0.0};
    bool paired{false};
};

ChiralReport chiral_report(const HermitianCoupling& j, double tol = 1e-8);

// Hamiltonian and target built from the construction: chain H_S with couplings, conjugated by
// U^(p) = Vp; the steady state is U_0 U^(p) U^(S) |0> with all squeezing strengths equal to z0.
struct TheoremModel {
    SqueezedBathSpec bath;
    RVector couplings;       // chain couplings J_1..J_N
    RVector squeeze_phases;  // phi_1..phi_N of U^(S)
    CMatrix vp;              // N x N passive unitary
    HermitianCoupling chain; // H_S
    HermitianCoupling hamiltonian;
    BogoliubovTransform target;  // N + 1 modes, auxiliary first

    Eigen::Index n_sites() const { return hamiltonian.n_sites(); }
    SqueezingProfile profile() const;  // (z0, phi_j) including the auxiliary site
};

TheoremModel build_theorem_model(const SqueezedBathSpec& bath, const RVector& couplings,
                                 const RVector& squeeze_phases, const CMatrix& vp);

// Same construction starting from an arbitrary N-mode target transform. The Bloch-Messiah
// factors must show N equal squeezing strengths matching z0 of the reservoir.
TheoremModel model_from_target(const SqueezedBathSpec& bath, const RVector& couplings,
                               const BogoliubovTransform& target, double tol = 1e-8);

}  // namespace sqlat
