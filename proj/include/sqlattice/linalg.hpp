// linalg.hpp: matrix aliases, error categories and small dense helpers shared by all modules

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace sqlat {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kDefaultTol = 1e-9;

// Input or invariant violation (CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Drift matrix without a strictly stable spectrum, i.e. a dark mode (CLI exit code 3).
class UnstableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative procedure exhausted its budget (CLI exit code 4).
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ValidationError(what);
}

inline void require_square(const auto& m, const std::string& name) {
    if (m.rows() != m.cols()) {
        throw ValidationError(name + ": matrix must be square, got " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
    }
}

// Frobenius norm of U U^dagger - 1.
inline double unitarity_residual(const CMatrix& u) {
    return (u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols())).norm();
}

inline double hermiticity_residual(const CMatrix& h) { return (h - h.adjoint()).norm(); }

inline double symmetry_residual(const CMatrix& m) { return (m - m.transpose()).norm(); }

// Block-swap matrix G = [[0, 1], [1, 0]] of size 2n.
CMatrix block_swap(Eigen::Index n);

// I = [[0, 1], [-1, 0]] of size 2n, the commutator matrix of (b; b^dagger).
CMatrix commutator_form(Eigen::Index n);

// Real symplectic form Omega = [[0, 1], [-1, 0]] in (q-block, p-block) ordering.
RMatrix symplectic_form(Eigen::Index n);

// Symmetrized copy (m + m^T) / 2.
inline RMatrix symmetrized(const RMatrix& m) { return 0.5 * (m + m.transpose()); }

// log|det m| from a fully pivoted LU factorization.
double log_abs_det(const RMatrix& m);

}  // namespace sqlat
