// metrics.hpp: functionals of zero-mean Gaussian states in the vacuum = identity convention

#pragma once

#include "sqlattice/linalg.hpp"
#include "sqlattice/symplectic.hpp"

namespace sqlat {

struct OverlapResult {
    double value{0.0};    // Tr(rho1 rho2)
    double log_det{0.0};  // log det(sigma1 + sigma2)
};

// Tr(rho1 rho2) = 2^M / sqrt(det(sigma1 + sigma2)). For a pure second argument this is the
// fidelity <psi2|rho1|psi2>; for two mixed states it is an overlap, not the Uhlmann fidelity.
OverlapResult overlap(const CovarianceState& a, const CovarianceState& b);

// Alias of overlap() for the case where `target` is pure.
double fidelity_to_pure_target(const CovarianceState& state, const CovarianceState& target);

// 1 / sqrt(det sigma).
double purity(const CovarianceState& s);

// c^T sigma c.
double quadratic_form_variance(const CovarianceState& s, const RVector& c);

}  // namespace sqlat
