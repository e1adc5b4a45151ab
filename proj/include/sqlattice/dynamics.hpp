// dynamics.hpp: second-moment (covariance) form of the squeezed-reservoir master equation
//
//   d sigma / dt = A sigma + sigma A^T + D
//
// The mean amplitudes obey d<b>/dt = -R <b> with R = i J + Gamma + gamma 1 and Gamma = kappa on the
// auxiliary site only. Writing R = Rr + i Ri, the quadrature drift is A = [[-Rr, Ri], [-Ri, -Rr]].
// The reservoir enters D through the auxiliary block
//   2 kappa [[1 + 2n + 2 Re m, 2 Im m], [2 Im m, 1 + 2n - 2 Re m]]
// and extra vacuum damping at rate gamma adds 2 gamma to every diagonal entry.

#pragma once

#include "sqlattice/linalg.hpp"
#include "sqlattice/model.hpp"
#include "sqlattice/symplectic.hpp"

#include <vector>

namespace sqlat {

struct DriftDiffusion {
    RMatrix A;
    RMatrix D;

    Eigen::Index n_modes() const { return A.rows() / 2; }
};

DriftDiffusion assemble(const HermitianCoupling& j, const SqueezedBathSpec& bath, double gamma);

// Largest real part of spec(A).
double drift_abscissa(const DriftDiffusion& dd);

// ||A sigma + sigma A^T + D||_F.
double lyapunov_residual(const DriftDiffusion& dd, const CovarianceState& s);

// Stationary covariance via a complex Schur (Bartels-Stewart) Lyapunov solve.
// Throws UnstableError if spec(A) reaches within 1e-10 ||A|| of the imaginary axis, and
// ConvergenceError if rounding leaves the result unphysical.
CovarianceState steady_state(const DriftDiffusion& dd);

// Reference solve of the vectorized system (1 (x) A + A (x) 1) vec(sigma) = -vec(D).
// O(M^6); kept for cross-checking steady_state().
CovarianceState steady_state_kronecker(const DriftDiffusion& dd);

// sigma(t) = e^{At} sigma0 e^{A^T t} + int_0^t e^{As} D e^{A^T s} ds. Each sub-interval is propagated
// exactly through the exponential of the block matrix [[-A, D], [0, A^T]] (Van Loan), with the
// interval split so the exponential stays well scaled.
CovarianceState evolve(const CovarianceState& s0, const DriftDiffusion& dd, double t);

// Complex second moments N_jk = <b_j^dag b_k>, M_jk = <b_j b_k> of a zero-mean state.
struct LadderMoments {
    CMatrix N;
    CMatrix M;
};

LadderMoments ladder_moments(const CovarianceState& s);

struct TmsPair {
    Eigen::Index low{0};   // normal-mode index (ascending eigenvalue order)
    Eigen::Index high{0};
    double lambda{0.0};
    double strength{0.0};  // z from |<c_low c_high>| = sinh(2z) / 2
    double phase{0.0};     // arg(T_0,low T_0,high <c_low c_high>), gauge independent
};

struct TmsReport {
    std::vector<TmsPair> pairs;
    bool has_zero_mode{false};
    double zero_mode_strength{0.0};
    double zero_mode_phase{0.0};
    double max_strength_residual{0.0};   // |z - z0|
    double max_phase_residual{0.0};      // wrapped |phase - phi0|
    double max_occupation_residual{0.0}; // |<c_j^dag c_j> - sinh^2 z0|
    double max_stray_moment{0.0};        // largest moment outside the pair structure
    double residual{0.0};                // max of the above
};

// Rotates sigma into the normal-mode basis of J and checks that opposite-frequency modes form
// two-mode squeezed vacua of strength z0 and phase phi0 (zero mode: single-mode squeezed).
TmsReport tms_pair_check(const CovarianceState& s, const HermitianCoupling& j, const SqueezedBathSpec& bath);

}  // namespace sqlat
