// Microbenchmarks for the per-step building blocks: stencil applies,
// reduced-system assembly, and one damped-Newton update including the
// sparse direct solve. Grid sizes bracket the runs the solver is used at.
#include <benchmark/benchmark.h>

#include <tvwf/flow.hpp>
#include <tvwf/grid_ops.hpp>
#include <tvwf/imaging.hpp>
#include <tvwf/newton.hpp>
#include <tvwf/penalty.hpp>

namespace {

using namespace tvwf;

SolverConfig bench_config() {
    SolverConfig cfg;
    cfg.dt = 1.0;
    cfg.eps = 1e-3;
    return cfg;
}

// A state a few iterations into the first implicit step, so the dual has a
// realistic active set and the timing reflects the steady per-iteration cost.
NewtonState warmed_state(const ScalarField& u0, const SolverConfig& cfg, int iters) {
    NewtonState s{u0, ScalarField(u0.grid), VectorField(u0.grid), 0, cfg.tau0, 0.0, 0.0};
    for (int k = 0; k < iters; ++k) s = newton_step(s, u0, cfg);
    return s;
}

void BM_grad(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ScalarField u = gen_pyramid(n);
    for (auto _ : state) benchmark::DoNotOptimize(grad(u));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_grad)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_div(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    VectorField p = grad(gen_pyramid(n));
    for (auto _ : state) benchmark::DoNotOptimize(div(p));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_div)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_weighted_elliptic(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ScalarField w = normalize_mass(gen_square(n), 1.0);
    ScalarField q = div(grad(w));  // same grid as w, structured values
    for (auto _ : state) benchmark::DoNotOptimize(weighted_elliptic(w, q));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_weighted_elliptic)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_penalty_grad(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    VectorField p = grad(gen_pyramid(n));
    for (auto& v : p.comp1) v *= 3.0;  // push a band of faces past the box
    for (auto _ : state) benchmark::DoNotOptimize(penalty_grad(p));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_penalty_grad)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_reduce(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SolverConfig cfg = bench_config();
    ScalarField u0 = normalize_mass(gen_square(n), 1.0);
    NewtonState s = warmed_state(u0, cfg, 3);
    for (auto _ : state) benchmark::DoNotOptimize(reduce(u0, s.P, cfg, s.tau_k));
}
BENCHMARK(BM_reduce)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_newton_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SolverConfig cfg = bench_config();
    ScalarField u0 = normalize_mass(gen_square(n), 1.0);
    const NewtonState s = warmed_state(u0, cfg, 3);
    for (auto _ : state) benchmark::DoNotOptimize(newton_step(s, u0, cfg));
}
BENCHMARK(BM_newton_step)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_solve_inner(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SolverConfig cfg = bench_config();
    ScalarField u0 = normalize_mass(gen_square(n), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_inner(u0, VectorField(u0.grid), cfg));
}
BENCHMARK(BM_solve_inner)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
