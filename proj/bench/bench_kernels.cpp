// bench_kernels.cpp: parallel sweep against its serial reference, Schur against Kronecker Lyapunov solves

#include "sqlattice/cluster.hpp"
#include "sqlattice/dynamics.hpp"
#include "sqlattice/studies.hpp"

#include <benchmark/benchmark.h>

using namespace sqlat;

namespace {

SweepProblem lattice_problem(int side) {
    const auto bath = SqueezedBathSpec::pure(1.0, 1.0, 0.0);
    const AdjacencyGraph g = square_lattice(side, side);
    const auto n = g.n_nodes();
    const TheoremModel tm = model_from_target(bath, RVector::Constant(n, 7.7), build_target(g, bath.z0()).B);
    return {tm.hamiltonian, bath, to_covariance(tm.target), g};
}

SweepConfig small_sweep(Eigen::Index m) {
    SweepConfig cfg;
    for (double total : {0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0}) cfg.gammas.push_back(total / static_cast<double>(m));
    cfg.series = {{PerturbationKind::amplitude, 1e-3, 3}, {PerturbationKind::phase, 1.5e-2, 3}};
    cfg.master_seed = 1;
    return cfg;
}

DriftDiffusion chain_system(Eigen::Index m) {
    const HermitianCoupling j = linear_chain(RVector::Constant(m - 1, 2.0), RVector::LinSpaced(m - 1, 0.0, 1.0));
    return assemble(j, SqueezedBathSpec::pure(1.0, 0.5, 0.3), 0.01);
}

void BM_SweepParallel(benchmark::State& st) {
    const SweepProblem p = lattice_problem(static_cast<int>(st.range(0)));
    const SweepConfig cfg = small_sweep(p.hamiltonian.n_sites());
    for (auto _ : st) benchmark::DoNotOptimize(gamma_sweep(p, cfg));
}

void BM_SweepSerial(benchmark::State& st) {
    const SweepProblem p = lattice_problem(static_cast<int>(st.range(0)));
    const SweepConfig cfg = small_sweep(p.hamiltonian.n_sites());
    for (auto _ : st) benchmark::DoNotOptimize(gamma_sweep_serial(p, cfg));
}

void BM_SteadySchur(benchmark::State& st) {
    const DriftDiffusion dd = chain_system(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(steady_state(dd));
}

void BM_SteadyKronecker(benchmark::State& st) {
    const DriftDiffusion dd = chain_system(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(steady_state_kronecker(dd));
}

}  // namespace

BENCHMARK(BM_SweepParallel)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond)->UseRealTime()->MinTime(3.0);
BENCHMARK(BM_SweepSerial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond)->UseRealTime()->MinTime(3.0);
BENCHMARK(BM_SteadySchur)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SteadyKronecker)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
