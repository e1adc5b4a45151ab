// linalg.cpp

#include "sqlattice/linalg.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace sqlat {

CMatrix block_swap(Eigen::Index n) {
    CMatrix g = CMatrix::Zero(2 * n, 2 * n);
    g.topRightCorner(n, n).setIdentity();
    g.bottomLeftCorner(n, n).setIdentity();
    return g;
}

CMatrix commutator_form(Eigen::Index n) {
    CMatrix c = CMatrix::Zero(2 * n, 2 * n);
    c.topRightCorner(n, n).setIdentity();
    c.bottomLeftCorner(n, n) = -CMatrix::Identity(n, n);
    return c;
}

RMatrix symplectic_form(Eigen::Index n) {
    RMatrix w = RMatrix::Zero(2 * n, 2 * n);
    w.topRightCorner(n, n).setIdentity();
    w.bottomLeftCorner(n, n) = -RMatrix::Identity(n, n);
    return w;
}

double log_abs_det(const RMatrix& m) {
    require_square(m, "log_abs_det");
    Eigen::FullPivLU<RMatrix> lu(m);
    const auto& packed = lu.matrixLU();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        const double d = std::abs(packed(i, i));
        if (d == 0.0) return -std::numeric_limits<double>::infinity();
        acc += std::log(d);
    }
    return acc;
}

}  // namespace sqlat
