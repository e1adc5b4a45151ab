// test_studies.cpp

#include "sqlattice/studies.hpp"
#include "sqlattice/dynamics.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <set>

using namespace sqlat;
using namespace sqlat::testing;

namespace {

SweepProblem path_problem() {
    const auto bath = SqueezedBathSpec::pure(1.0, 1.0, 0.0);
    const AdjacencyGraph g = square_lattice(1, 3);
    const TheoremModel tm = model_from_target(bath, RVector::Constant(3, 2.0), build_target(g, bath.z0()).B);
    return {tm.hamiltonian, bath, to_covariance(tm.target), g};
}

// Jacobi matrix of the discrete Gram polynomials; its first eigenvector components are all 1/sqrt(M).
RVector gram_chain(Eigen::Index m) {
    RVector c(m - 1);
    for (Eigen::Index n = 1; n < m; ++n) {
        const double nn = static_cast<double>(n), mm = static_cast<double>(m);
        c(n - 1) = std::sqrt(nn * nn * (mm * mm - nn * nn) / (4.0 * (4.0 * nn * nn - 1.0)));
    }
    return c;
}

RVector chain_spectrum(const RVector& c) {
    const Eigen::Index m = c.size() + 1;
    RMatrix t = RMatrix::Zero(m, m);
    for (Eigen::Index k = 0; k + 1 < m; ++k) t(k, k + 1) = t(k + 1, k) = c(k);
    return Eigen::SelfAdjointEigenSolver<RMatrix>(t, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_CASE("amplitude perturbations: symmetric relative changes, zeros preserved") {
    std::mt19937_64 rng(81);
    const HermitianCoupling j{random_hermitian(rng, 5)};
    HermitianCoupling sparse = j;
    sparse.J(0, 3) = sparse.J(3, 0) = 0.0;
    const double eps = 1e-2;
    const HermitianCoupling p = perturb(sparse, {PerturbationKind::amplitude, eps, 7});
    CHECK(hermiticity_residual(p.J) < 1e-15);
    CHECK(p.J(0, 3) == cplx(0.0));
    for (Eigen::Index a = 0; a < 5; ++a) {
        for (Eigen::Index b = 0; b < 5; ++b) {
            if (sparse.J(a, b) == cplx(0.0)) continue;
            const cplx ratio = p.J(a, b) / sparse.J(a, b);
            CHECK(std::abs(ratio.imag()) < 1e-14);
            CHECK(std::abs(ratio.real() - 1.0) <= eps);
        }
    }
    CHECK(perturb(sparse, {PerturbationKind::amplitude, eps, 7}).J == p.J);
    CHECK(perturb(sparse, {PerturbationKind::amplitude, eps, 8}).J != p.J);
    CHECK(perturb(sparse, {PerturbationKind::none, eps, 7}).J == sparse.J);
}

TEST_CASE("phase perturbations keep magnitudes and the diagonal") {
    std::mt19937_64 rng(82);
    const HermitianCoupling j{random_hermitian(rng, 4)};
    const double eps = 0.05;
    const HermitianCoupling p = perturb(j, {PerturbationKind::phase, eps, 3});
    CHECK(hermiticity_residual(p.J) < 1e-15);
    CHECK((p.J.cwiseAbs() - j.J.cwiseAbs()).norm() < 1e-14);
    CHECK((p.J.diagonal() - j.J.diagonal()).norm() < 1e-15);
    for (Eigen::Index a = 0; a < 4; ++a) {
        for (Eigen::Index b = a + 1; b < 4; ++b) CHECK(std::abs(std::arg(p.J(a, b) / j.J(a, b))) <= eps);
    }
    CHECK_THROWS_AS(perturb(j, {PerturbationKind::phase, -1.0, 3}), ValidationError);
}

TEST_CASE("perturbation kinds round-trip through their names") {
    for (auto k : {PerturbationKind::none, PerturbationKind::amplitude, PerturbationKind::phase}) {
        CHECK(parse_perturbation_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_perturbation_kind("shear"), ValidationError);
}

TEST_CASE("amplitude disorder breaks the chiral pairing at first order") {
    std::mt19937_64 rng(83);
    const TheoremModel tm = random_theorem_model(rng, 6);
    const double small = chiral_report(perturb(tm.hamiltonian, {PerturbationKind::amplitude, 1e-4, 11})).max_pairing_residual;
    const double large = chiral_report(perturb(tm.hamiltonian, {PerturbationKind::amplitude, 1e-2, 11})).max_pairing_residual;
    CHECK(small > 1e-10);
    CHECK(large / small == doctest::Approx(100.0).epsilon(0.1));
}

TEST_CASE("derived seeds are deterministic and distinct") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 3; ++s) {
        for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(2024, s, i));
    }
    CHECK(seen.size() == 150);
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
}

TEST_CASE("default gamma grid and series") {
    const auto g = default_gamma_grid(26, 1.0);
    REQUIRE(g.size() == 22);
    CHECK(g.front() == 0.0);
    CHECK(std::is_sorted(g.begin(), g.end()));
    auto hits = [&](double total) {
        return std::any_of(g.begin(), g.end(), [&](double x) { return std::abs(x * 26 - total) < 1e-12 * total; });
    };
    CHECK(hits(1e-5));
    CHECK(hits(1e-3));
    CHECK(hits(1e-1));
    CHECK(hits(1.0));
    const auto s = default_series();
    REQUIRE(s.size() == 2);
    CHECK(s[0].kind == PerturbationKind::amplitude);
    CHECK(s[0].epsilon == 1e-3);
    CHECK(s[1].kind == PerturbationKind::phase);
    CHECK(s[1].epsilon == 1.5e-2);
    CHECK(s[0].realizations + s[1].realizations == 40);
}

TEST_CASE("gamma sweep: ordering, seeds, and baseline behaviour") {
    const SweepProblem p = path_problem();
    SweepConfig cfg;
    cfg.gammas = {0.0, 1e-3, 1e-2, 1e-1};
    cfg.series = {{PerturbationKind::amplitude, 1e-3, 3}, {PerturbationKind::phase, 1.5e-2, 2}};
    cfg.master_seed = 99;
    const auto recs = gamma_sweep(p, cfg);
    REQUIRE(recs.size() == 24);

    for (std::size_t g = 0; g < 4; ++g) {
        CHECK(recs[g].kind == PerturbationKind::none);
        CHECK(recs[g].gamma == cfg.gammas[g]);
        CHECK(recs[g].gamma_total == doctest::Approx(cfg.gammas[g] * 4));
    }
    CHECK(recs[0].fidelity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(recs[0].purity == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t g = 1; g < 4; ++g) CHECK(recs[g].fidelity <= recs[g - 1].fidelity);
    CHECK(recs[3].fidelity < recs[1].fidelity);

    // Baseline nullifier variances at gamma = 0 reach the squeezing bound.
    const double bound = std::exp(-2.0 * p.bath.z0());
    CHECK((recs[0].var_x.array() - bound).abs().maxCoeff() < 1e-9);

    for (std::size_t block = 1; block < 6; ++block) {
        const std::uint64_t seed = recs[4 * block].seed;
        for (std::size_t g = 0; g < 4; ++g) {
            const auto& r = recs[4 * block + g];
            CHECK(r.seed == seed);
            CHECK(r.gamma == cfg.gammas[g]);
            CHECK(r.status == CaseStatus::ok);
            CHECK((r.var_x.array() < 1.0).all());
        }
    }
    CHECK(recs[4].kind == PerturbationKind::amplitude);
    CHECK(recs[4 * 4].kind == PerturbationKind::phase);
    CHECK(recs[4 * 5].realization == 1);
}

TEST_CASE("parallel and serial sweeps are identical") {
    const SweepProblem p = path_problem();
    SweepConfig cfg;
    cfg.gammas = {0.0, 1e-2, 0.3};
    cfg.series = {{PerturbationKind::amplitude, 1e-2, 4}, {PerturbationKind::phase, 1e-2, 4}};
    cfg.master_seed = 5;
    const auto a = gamma_sweep(p, cfg);
    const auto b = gamma_sweep_serial(p, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].seed == b[i].seed);
        CHECK(a[i].fidelity == b[i].fidelity);
        CHECK(a[i].var_x == b[i].var_x);
        CHECK(a[i].var_y == b[i].var_y);
    }
}

TEST_CASE("unstable cases are recorded, not fatal") {
    SweepProblem p;
    p.bath = SqueezedBathSpec::pure(1.0, 1.0, 0.0);
    p.hamiltonian = {CMatrix::Zero(3, 3)};
    p.hamiltonian.J(0, 1) = p.hamiltonian.J(1, 0) = 1.0;
    p.target = CovarianceState::vacuum(3);
    SweepConfig cfg;
    cfg.gammas = {0.0, 0.1};
    const auto recs = gamma_sweep(p, cfg);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].status == CaseStatus::unstable);
    CHECK(std::isnan(recs[0].fidelity));
    CHECK(recs[1].status == CaseStatus::ok);
    CHECK(std::isfinite(recs[1].fidelity));
}

TEST_CASE("sweep input validation") {
    SweepProblem p = path_problem();
    SweepConfig cfg;
    cfg.gammas = {-0.1};
    CHECK_THROWS_AS(gamma_sweep(p, cfg), ValidationError);
    cfg.gammas = {0.0};
    p.target = CovarianceState::vacuum(2);
    CHECK_THROWS_AS(gamma_sweep(p, cfg), ValidationError);
}

TEST_CASE("chain overlaps") {
    const RVector o = chain_overlaps(RVector::Constant(1, 3.0));
    CHECK((o.array() - std::sqrt(0.5)).abs().maxCoeff() < 1e-14);
    std::mt19937_64 rng(84);
    const RVector c = random_vector(rng, 7, 0.5, 2.0);
    CHECK(chain_overlaps(c).squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the Gram chain has perfectly equal overlaps") {
    for (Eigen::Index m : {3, 6, 26}) {
        const RVector c = gram_chain(m);
        CHECK(overlap_objective(c) < 1e-24);
        CHECK((chain_overlaps(c).array() - 1.0 / std::sqrt(static_cast<double>(m))).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("overlap objective: scale invariance; reversal keeps the spectrum") {
    std::mt19937_64 rng(85);
    const RVector c = random_vector(rng, 9, 0.5, 2.0);
    CHECK(overlap_objective(7.7 * c) == doctest::Approx(overlap_objective(c)).epsilon(1e-10));
    const RVector r = c.reverse();
    CHECK((chain_spectrum(r) - chain_spectrum(c)).norm() < 1e-12);
}

TEST_CASE("equalize_overlaps") {
    SUBCASE("two sites need no search") {
        const EqualizeResult r = equalize_overlaps(2, RVector::Constant(1, 1.0));
        CHECK(r.converged);
        CHECK(r.couplings(0) == doctest::Approx(7.7));
        CHECK(r.min_overlap == doctest::Approx(std::sqrt(0.5)));
    }
    SUBCASE("six sites from a uniform chain") {
        const EqualizeResult r = equalize_overlaps(6, RVector::Constant(5, 7.7));
        CHECK(r.converged);
        CHECK(r.min_overlap >= 0.999 / std::sqrt(6.0));
        CHECK(r.couplings.mean() == doctest::Approx(7.7).epsilon(1e-12));
        CHECK(r.objective < 1e-12);
    }
    SUBCASE("an exhausted budget is reported") {
        EqualizeOptions opt;
        opt.restarts = 0;
        opt.max_evaluations_per_run = 5;
        const EqualizeResult r = equalize_overlaps(10, RVector::Constant(9, 1.0), opt);
        CHECK_FALSE(r.converged);
        CHECK(r.couplings.mean() == doctest::Approx(7.7).epsilon(1e-12));
        // Checked between iterations: initial simplex (n + 1) plus at most one iteration (n + 2) beyond.
        CHECK(r.evaluations <= 5 + 10 + 11);
    }
    CHECK_THROWS_AS(equalize_overlaps(4, RVector::Constant(2, 1.0)), ValidationError);
    CHECK_THROWS_AS(equalize_overlaps(3, RVector::Constant(2, -1.0)), ValidationError);
}
