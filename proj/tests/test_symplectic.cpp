// test_symplectic.cpp

#include "sqlattice/symplectic.hpp"
#include "sqlattice/cluster.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

using namespace sqlat;
using namespace sqlat::testing;

namespace {

CMatrix series_exp(const CMatrix& a) {
    CMatrix term = CMatrix::Identity(a.rows(), a.cols());
    CMatrix sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

double distance(const BogoliubovTransform& a, const BogoliubovTransform& b) {
    return std::max((a.X - b.X).norm(), (a.Y - b.Y).norm());
}

GeneratorMatrix random_generator(std::mt19937_64& rng, Eigen::Index n, double scale) {
    return GeneratorMatrix::from_blocks(scale * random_symmetric(rng, n), scale * random_hermitian(rng, n));
}

}  // namespace

TEST_CASE("squeezer has closed-form blocks and is a valid transform") {
    const auto s = squeezer(0.7, 1.2);
    CHECK(s.X(0, 0).real() == doctest::Approx(std::cosh(0.7)));
    CHECK(std::abs(s.Y(0, 0) - std::sinh(0.7) * std::polar(1.0, 1.2)) < 1e-15);
    const auto v = validate_bogoliubov(s);
    CHECK(v.valid);
    CHECK(v.residual < 1e-14);
    CHECK(validate_bogoliubov(BogoliubovTransform::identity(3)).valid);
}

TEST_CASE("validate_bogoliubov rejects broken transforms") {
    auto s = squeezer(0.5, 0.0);
    s.X *= 1.01;
    CHECK_FALSE(validate_bogoliubov(s).valid);
    CHECK_THROWS_AS(require_bogoliubov(s, "test"), ValidationError);
    BogoliubovTransform bad{CMatrix::Identity(2, 2), CMatrix::Zero(3, 3)};
    CHECK_THROWS_AS(require_bogoliubov(bad, "test"), ValidationError);
}

TEST_CASE("exp_map agrees with a truncated power series") {
    std::mt19937_64 rng(11);
    for (Eigen::Index n = 1; n <= 4; ++n) {
        const GeneratorMatrix g = random_generator(rng, n, 0.3);
        const CMatrix series = series_exp(-kI * commutator_form(n) * g.S);
        const BogoliubovTransform b = exp_map(g);
        CHECK((b.full() - series).norm() < 1e-12);
        CHECK(validate_bogoliubov(b).residual < 1e-12);
    }
}

TEST_CASE("exp_map reproduces squeezers and passive transforms") {
    std::mt19937_64 rng(12);
    const RVector z = random_vector(rng, 3, 0.0, 1.5);
    const RVector phi = random_vector(rng, 3, -3.0, 3.0);
    CHECK(distance(exp_map(squeezing_generator(z, phi)), squeezers(z, phi)) < 1e-12);
    const CMatrix v = random_unitary(rng, 4);
    CHECK(distance(exp_map(passive_generator(v)), passive_embed(v)) < 1e-12);
    const CMatrix k = unitary_log_generator(v);
    CHECK(hermiticity_residual(k) < 1e-12);
    CHECK((series_exp(-kI * k) - v).norm() < 1e-12);
}

TEST_CASE("compose follows operator order U1 U2 -> B1 B2") {
    std::mt19937_64 rng(13);
    const GeneratorMatrix g1 = random_generator(rng, 3, 0.4);
    const GeneratorMatrix g2 = random_generator(rng, 3, 0.4);
    const BogoliubovTransform b1 = exp_map(g1), b2 = exp_map(g2);
    const CMatrix product = b1.full() * b2.full();
    const BogoliubovTransform c = compose(b1, b2);
    CHECK((c.full() - product).norm() < 1e-12);
    // A passive rotation applied after a squeezer: U_V U_S gives X = V cosh z, Y = V sinh z.
    const CMatrix v = random_unitary(rng, 3);
    const RVector z = RVector::Constant(3, 0.4);
    const BogoliubovTransform vs = compose(passive_embed(v), squeezers(z, RVector::Zero(3)));
    CHECK((vs.X - std::cosh(0.4) * v).norm() < 1e-13);
    CHECK((vs.Y - std::sinh(0.4) * v).norm() < 1e-13);
    CHECK_THROWS_AS(compose(b1, BogoliubovTransform::identity(2)), ValidationError);
}

TEST_CASE("direct_sum places blocks on disjoint modes") {
    const auto d = direct_sum(squeezer(0.3, 0.1), squeezers(RVector::Constant(2, 0.5), RVector::Zero(2)));
    CHECK(d.n_modes() == 3);
    CHECK(d.X(0, 1) == cplx(0.0));
    CHECK(d.X(2, 2).real() == doctest::Approx(std::cosh(0.5)));
    CHECK(validate_bogoliubov(d).valid);
}

TEST_CASE("Bloch-Messiah roundtrip on random instances") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index n = 1 + trial % 8;
        RVector z = random_vector(rng, n, 0.0, 1.5);
        if (trial % 3 == 0) z.head(n / 2 + 1).setConstant(0.8);  // degenerate block
        const BogoliubovTransform b = random_transform(rng, z);
        const BlochMessiahFactors f = bloch_messiah(b);
        CHECK(distance(f.reassemble(), b) < 1e-9);
        CHECK(unitarity_residual(f.V) < 1e-10);
        CHECK(unitarity_residual(f.W) < 1e-10);
        RVector sorted = z;
        std::sort(sorted.data(), sorted.data() + n, std::greater<>());
        CHECK((f.Dz - sorted).cwiseAbs().maxCoeff() < 1e-8);
        for (Eigen::Index k = 1; k < n; ++k) CHECK(f.Dz(k) <= f.Dz(k - 1) + 1e-12);
    }
}

TEST_CASE("Bloch-Messiah phases can be moved without changing the product") {
    std::mt19937_64 rng(15);
    const BogoliubovTransform b = random_transform(rng, random_vector(rng, 4, 0.1, 1.0));
    const BlochMessiahFactors f = bloch_messiah(b);
    const RVector phi = random_vector(rng, 4, -3.0, 3.0);
    const BlochMessiahFactors g = f.with_phases(phi);
    CHECK((g.Phi - phi).norm() < 1e-15);
    CHECK(distance(g.reassemble(), b) < 1e-10);
}

TEST_CASE("Bloch-Messiah on the identity and on pure passive transforms") {
    const auto f = bloch_messiah(BogoliubovTransform::identity(3));
    CHECK(f.Dz.norm() < 1e-12);
    std::mt19937_64 rng(16);
    const CMatrix v = random_unitary(rng, 3);
    const auto g = bloch_messiah(passive_embed(v));
    CHECK(g.Dz.norm() < 1e-12);
    CHECK(distance(g.reassemble(), passive_embed(v)) < 1e-10);
}

TEST_CASE("takagi factorizes symmetric unitaries") {
    std::mt19937_64 rng(17);
    for (Eigen::Index n = 1; n <= 8; ++n) {
        const CMatrix m = random_symmetric_unitary(rng, n);
        const CMatrix v = takagi(m);
        CHECK((v * v.transpose() - m).norm() < 1e-10);
        CHECK(unitarity_residual(v) < 1e-10);
    }
    // Repeated eigenphases.
    const CMatrix o = random_unitary(rng, 4).real().householderQr().householderQ() * RMatrix::Identity(4, 4);
    RVector th(4);
    th << 0.3, 0.3, -2.0, -2.0;
    const CMatrix m = o * th.unaryExpr([](double t) { return std::polar(1.0, t); }).asDiagonal() * o.transpose();
    const CMatrix v = takagi(m);
    CHECK((v * v.transpose() - m).norm() < 1e-10);
    CHECK_THROWS_AS(takagi(random_unitary(rng, 3)), ValidationError);
}

TEST_CASE("takagi of the lattice matrix -iZ is its principal square root") {
    const CMatrix z = z_from_adjacency(square_lattice(5, 5));
    const CMatrix m = -kI * z;
    const CMatrix v = takagi(m);
    CHECK((v * v.transpose() - m).norm() < 1e-10);
    CHECK(unitarity_residual(v) < 1e-10);
    CHECK(symmetry_residual(v) < 1e-12);
    // Independent oracle: Schur-based principal matrix square root.
    const CMatrix root = m.sqrt();
    CHECK((v - root).norm() < 1e-9);
}

TEST_CASE("takagi does not depend on the basis inside degenerate eigenspaces") {
    std::mt19937_64 rng(21);
    const RMatrix o = random_unitary(rng, 5).real().householderQr().householderQ() * RMatrix::Identity(5, 5);
    RVector th(5);
    th << 0.7, 0.7, 0.7, -1.2, 2.9;
    const CMatrix m = o * th.unaryExpr([](double t) { return std::polar(1.0, t); }).asDiagonal() * o.transpose();
    const CMatrix expected = o * th.unaryExpr([](double t) { return std::polar(1.0, 0.5 * t); }).asDiagonal() * o.transpose();
    CHECK((takagi(m) - expected).norm() < 1e-10);
}

TEST_CASE("quadrature symplectic matrix preserves the symplectic form") {
    std::mt19937_64 rng(18);
    const BogoliubovTransform b = random_transform(rng, random_vector(rng, 3, 0.0, 1.0));
    const RMatrix s = quadrature_symplectic(b);
    const RMatrix w = symplectic_form(3);
    CHECK((s * w * s.transpose() - w).norm() < 1e-10);
}

TEST_CASE("covariance of squeezed and vacuum states") {
    CHECK((to_covariance(BogoliubovTransform::identity(2)).sigma - RMatrix::Identity(4, 4)).norm() < 1e-15);
    const double z = 0.6;
    const RMatrix s = to_covariance(squeezer(z, 0.0)).sigma;
    CHECK(s(0, 0) == doctest::Approx(std::exp(2 * z)));
    CHECK(s(1, 1) == doctest::Approx(std::exp(-2 * z)));
    CHECK(std::abs(s(0, 1)) < 1e-14);
    // A phase phi rotates the squeezing axis by phi / 2.
    const RMatrix r = to_covariance(squeezer(z, 1.0)).sigma;
    RMatrix rot(2, 2);
    rot << std::cos(0.5), -std::sin(0.5), std::sin(0.5), std::cos(0.5);
    CHECK((r - rot * s * rot.transpose()).norm() < 1e-13);
}

TEST_CASE("physicality check") {
    CHECK(check_physical(thermal(2, 0.3)).physical);
    CHECK_FALSE(check_physical({0.5 * RMatrix::Identity(2, 2)}).physical);
    RMatrix asym = RMatrix::Identity(2, 2);
    asym(0, 1) = 0.3;
    CHECK_FALSE(check_physical({asym}).physical);
}

TEST_CASE("reduce_modes extracts marginal blocks") {
    std::mt19937_64 rng(19);
    const CovarianceState s = to_covariance(random_transform(rng, random_vector(rng, 3, 0.1, 1.0)));
    const CovarianceState r = reduce_modes(s, {2, 0});
    CHECK(r.sigma(0, 0) == s.sigma(2, 2));
    CHECK(r.sigma(0, 1) == s.sigma(2, 0));
    CHECK(r.sigma(2, 3) == s.sigma(5, 3));
    CHECK(r.sigma(0, 3) == s.sigma(2, 3));
    CHECK_THROWS_AS(reduce_modes(s, {3}), ValidationError);
}

TEST_CASE("generator validation") {
    std::mt19937_64 rng(20);
    GeneratorMatrix g = random_generator(rng, 2, 1.0);
    CHECK_NOTHROW(validate_generator(g));
    g.S(0, 1) += 0.5;
    CHECK_THROWS_AS(validate_generator(g), ValidationError);
}
