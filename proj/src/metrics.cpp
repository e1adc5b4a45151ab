// metrics.cpp

#include "sqlattice/metrics.hpp"

#include <cmath>
#include <numbers>

namespace sqlat {

namespace {

void require_physical(const CovarianceState& s, const char* where) {
    const auto chk = check_physical(s, 1e-8);
    if (!chk.physical) {
        throw ValidationError(std::string(where) + ": covariance is not physical (min eigenvalue of sigma + i Omega = " +
                              std::to_string(chk.min_eigenvalue) + ")");
    }
}

}  // namespace

OverlapResult overlap(const CovarianceState& a, const CovarianceState& b) {
    require(a.sigma.rows() == b.sigma.rows(), "overlap: mode count mismatch");
    require_physical(a, "overlap");
    require_physical(b, "overlap");
    OverlapResult r;
    r.log_det = log_abs_det(a.sigma + b.sigma);
    r.value = std::exp(static_cast<double>(a.n_modes()) * std::numbers::ln2 - 0.5 * r.log_det);
    return r;
}

double fidelity_to_pure_target(const CovarianceState& state, const CovarianceState& target) {
    return overlap(state, target).value;
}

double purity(const CovarianceState& s) {
    require_physical(s, "purity");
    return std::exp(-0.5 * log_abs_det(s.sigma));
}

double quadratic_form_variance(const CovarianceState& s, const RVector& c) {
    if (c.size() != s.sigma.rows()) {
        throw ValidationError("quadratic_form_variance: coefficient vector has length " + std::to_string(c.size()) +
                              ", expected " + std::to_string(s.sigma.rows()));
    }
    return c.dot(s.sigma * c);
}

}  // namespace sqlat
