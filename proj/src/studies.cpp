// studies.cpp

#include "sqlattice/studies.hpp"

#include "sqlattice/dynamics.hpp"
#include "sqlattice/metrics.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace sqlat {

std::string to_string(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::none: return "none";
        case PerturbationKind::amplitude: return "amplitude";
        case PerturbationKind::phase: return "phase";
    }
    return "none";
}

std::string to_string(CaseStatus s) {
    switch (s) {
        case CaseStatus::ok: return "ok";
        case CaseStatus::unstable: return "unstable";
        case CaseStatus::unphysical: return "unphysical";
    }
    return "ok";
}

PerturbationKind parse_perturbation_kind(const std::string& s) {
    if (s == "none") return PerturbationKind::none;
    if (s == "amplitude") return PerturbationKind::amplitude;
    if (s == "phase") return PerturbationKind::phase;
    throw ValidationError("unknown perturbation kind '" + s + "' (expected none, amplitude or phase)");
}

namespace {

double uniform_symmetric(std::mt19937_64& rng, double eps) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    return eps * (2.0 * u - 1.0);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

HermitianCoupling perturb(const HermitianCoupling& j, const PerturbationSpec& spec) {
    validate_coupling(j);
    if (!(spec.epsilon >= 0.0)) throw ValidationError("perturb: epsilon must be non-negative");
    if (spec.kind == PerturbationKind::none || spec.epsilon == 0.0) return j;

    std::mt19937_64 rng(spec.seed);
    const auto m = j.n_sites();
    HermitianCoupling out = j;
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = r; c < m; ++c) {
            if (spec.kind == PerturbationKind::amplitude) {
                const double zeta = uniform_symmetric(rng, spec.epsilon);
                out.J(r, c) = j.J(r, c) * (1.0 + zeta);
                if (c != r) out.J(c, r) = j.J(c, r) * (1.0 + zeta);
            } else if (c != r) {
                const double beta = uniform_symmetric(rng, spec.epsilon);
                out.J(r, c) = j.J(r, c) * std::polar(1.0, beta);
                out.J(c, r) = j.J(c, r) * std::polar(1.0, -beta);
            }
        }
    }
    return out;
}

std::vector<double> default_gamma_grid(Eigen::Index m, double kappa) {
    require(m >= 1 && kappa > 0.0, "default_gamma_grid: need m >= 1 and kappa > 0");
    std::vector<double> g{0.0};
    for (int k = 0; k <= 20; ++k) g.push_back(kappa * std::pow(10.0, -5.0 + 0.25 * k) / static_cast<double>(m));
    return g;
}

std::vector<PerturbationSeries> default_series() {
    return {{PerturbationKind::amplitude, 1e-3, 20}, {PerturbationKind::phase, 1.5e-2, 20}};
}

namespace {

struct Realization {
    PerturbationKind kind;
    double epsilon;
    int index;
    std::uint64_t seed;
    HermitianCoupling j;
};

std::vector<Realization> realizations(const SweepProblem& p, const SweepConfig& cfg) {
    std::vector<Realization> out;
    out.push_back({PerturbationKind::none, 0.0, 0, 0, p.hamiltonian});
    for (std::size_t s = 0; s < cfg.series.size(); ++s) {
        const auto& ser = cfg.series[s];
        require(ser.realizations >= 0, "sweep: negative realization count");
        for (int r = 0; r < ser.realizations; ++r) {
            const std::uint64_t seed = derive_seed(cfg.master_seed, s + 1, static_cast<std::uint64_t>(r));
            out.push_back({ser.kind, ser.epsilon, r, seed, perturb(p.hamiltonian, {ser.kind, ser.epsilon, seed})});
        }
    }
    return out;
}

void check_problem(const SweepProblem& p, const SweepConfig& cfg) {
    validate_coupling(p.hamiltonian);
    validate_bath(p.bath);
    require(p.target.n_modes() == p.hamiltonian.n_sites(), "sweep: target and Hamiltonian differ in mode count");
    if (p.graph) {
        validate_graph(*p.graph);
        require(p.graph->n_nodes() + 1 == p.hamiltonian.n_sites(), "sweep: graph must cover sites 1..N");
    }
    for (double g : cfg.gammas) require(g >= 0.0, "sweep: gamma must be non-negative");
}

SweepRecord run_case(const SweepProblem& p, const Realization& r, double gamma) {
    SweepRecord rec;
    rec.gamma = gamma;
    rec.gamma_total = gamma * static_cast<double>(p.hamiltonian.n_sites()) / p.bath.kappa;
    rec.kind = r.kind;
    rec.epsilon = r.epsilon;
    rec.realization = r.index;
    rec.seed = r.seed;
    try {
        const CovarianceState s = steady_state(assemble(r.j, p.bath, gamma));
        rec.fidelity = std::clamp(overlap(s, p.target).value, 0.0, 1.0);
        rec.purity = purity(s);
        if (p.graph) {
            const auto n = p.graph->n_nodes();
            std::vector<Eigen::Index> sites(n);
            for (Eigen::Index k = 0; k < n; ++k) sites[k] = k + 1;
            const NullifierVariances nv = nullifier_variances(reduce_modes(s, sites), *p.graph);
            rec.var_x = nv.x;
            rec.var_y = nv.y;
        }
    } catch (const UnstableError&) {
        rec.status = CaseStatus::unstable;
    } catch (const ConvergenceError&) {
        rec.status = CaseStatus::unphysical;
    }
    if (rec.status != CaseStatus::ok) {
        rec.fidelity = std::nan("");
        rec.purity = std::nan("");
    }
    return rec;
}

}  // namespace

std::vector<SweepRecord> gamma_sweep(const SweepProblem& problem, const SweepConfig& config) {
    check_problem(problem, config);
    const auto reals = realizations(problem, config);
    const auto ng = static_cast<long>(config.gammas.size());
    const long total = static_cast<long>(reals.size()) * ng;
    std::vector<SweepRecord> out(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic)
    for (long c = 0; c < total; ++c) {
        out[static_cast<std::size_t>(c)] = run_case(problem, reals[static_cast<std::size_t>(c / ng)],
                                                    config.gammas[static_cast<std::size_t>(c % ng)]);
    }
    return out;
}

std::vector<SweepRecord> gamma_sweep_serial(const SweepProblem& problem, const SweepConfig& config) {
    check_problem(problem, config);
    std::vector<SweepRecord> out;
    for (const auto& r : realizations(problem, config)) {
        for (double g : config.gammas) out.push_back(run_case(problem, r, g));
    }
    return out;
}

RVector chain_overlaps(const RVector& couplings) {
    require(couplings.size() >= 1, "chain_overlaps: need at least one coupling");
    const auto m = couplings.size() + 1;
    RMatrix t = RMatrix::Zero(m, m);
    for (Eigen::Index k = 0; k + 1 < m; ++k) t(k, k + 1) = t(k + 1, k) = couplings(k);
    // Chain phases are a diagonal gauge and leave |v0 . w_j| unchanged.
    Eigen::SelfAdjointEigenSolver<RMatrix> es(t);
    return es.eigenvectors().row(0).cwiseAbs().transpose();
}

double overlap_objective(const RVector& couplings) {
    const RVector o = chain_overlaps(couplings);
    const double target = 1.0 / static_cast<double>(o.size());
    return (o.array().square() - target).square().sum();
}

namespace {

RVector renormalized(const RVector& log_j, double mean) {
    const RVector j = log_j.array().exp();
    return j * (mean / j.mean());
}

struct NmContext {
    double mean;
    long evaluations{0};
};

double nm_objective(const gsl_vector* x, void* params) {
    auto* ctx = static_cast<NmContext*>(params);
    ++ctx->evaluations;
    const RVector lj = Eigen::Map<const RVector, 0, Eigen::InnerStride<>>(x->data, x->size, Eigen::InnerStride<>(x->stride));
    return overlap_objective(renormalized(lj, ctx->mean));
}

using Minimizer = std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)>;
using GslVector = std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)>;

}  // namespace

EqualizeResult equalize_overlaps(Eigen::Index m, const RVector& j_init, const EqualizeOptions& opt) {
    require(m >= 2, "equalize_overlaps: need at least two sites");
    require(j_init.size() == m - 1, "equalize_overlaps: need M - 1 initial couplings");
    require((j_init.array() > 0.0).all(), "equalize_overlaps: initial couplings must be positive");
    require(opt.mean_coupling > 0.0, "equalize_overlaps: mean coupling must be positive");

    const double goal = (1.0 - opt.success_tol) / std::sqrt(static_cast<double>(m));
    EqualizeResult res;
    auto finish = [&](const RVector& j) {
        res.couplings = j;
        res.overlaps = chain_overlaps(j);
        res.min_overlap = res.overlaps.minCoeff();
        res.objective = overlap_objective(j);
        res.converged = res.min_overlap >= goal;
        return res;
    };
    RVector best_log = j_init.array().log();
    if (m == 2) return finish(renormalized(best_log, opt.mean_coupling));

    gsl_set_error_handler_off();
    const auto n = static_cast<std::size_t>(m - 1);
    NmContext ctx{opt.mean_coupling};
    gsl_multimin_function fn{&nm_objective, n, &ctx};
    Minimizer nm(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), &gsl_multimin_fminimizer_free);
    GslVector x(gsl_vector_alloc(n), &gsl_vector_free);
    GslVector step(gsl_vector_alloc(n), &gsl_vector_free);
    gsl_vector_set_all(step.get(), opt.initial_step);

    double best = overlap_objective(renormalized(best_log, opt.mean_coupling));
    for (int run = 0; run <= opt.restarts; ++run) {
        res.restarts_used = run;
        // The objective only sees coupling ratios; recentring keeps the simplex well scaled.
        best_log.array() -= best_log.mean();
        for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, best_log(static_cast<Eigen::Index>(i)));
        gsl_multimin_fminimizer_set(nm.get(), &fn, x.get(), step.get());
        const long start = ctx.evaluations;
        while (ctx.evaluations - start < opt.max_evaluations_per_run) {
            if (gsl_multimin_fminimizer_iterate(nm.get()) != GSL_SUCCESS) break;
            if (nm->fval <= opt.objective_tol) break;
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(nm.get()), 1e-13) == GSL_SUCCESS) break;
        }
        if (nm->fval < best) {
            best = nm->fval;
            for (std::size_t i = 0; i < n; ++i) best_log(static_cast<Eigen::Index>(i)) = gsl_vector_get(nm->x, i);
        }
        finish(renormalized(best_log, opt.mean_coupling));
        if (res.converged && (best <= opt.objective_tol || run > 0)) break;
    }
    res.evaluations = ctx.evaluations;
    return res;
}

}  // namespace sqlat
