// Microbenchmarks for the pricing pipeline, ordered roughly by cost:
// scalar normal kernels -> closed-form b -> quadrature c -> composite price
// and drift diagnostics -> PDE solves -> Monte Carlo hedging.
#include <benchmark/benchmark.h>

#include <vector>

#include "mvh/closed_form.hpp"
#include "mvh/hedge_mc.hpp"
#include "mvh/normal.hpp"
#include "mvh/params.hpp"
#include "mvh/pde_fd.hpp"
#include "mvh/pricing.hpp"
#include "mvh/replication.hpp"

namespace {

const mvh::ModelParams kParams{};  // defaults: mu1=.02 s1=.15 mu2=.2 s2=.5 rho=.6 T=10 D=100 kappa=1

void BM_NormCdf(benchmark::State& state) {
    double x = -3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mvh::norm_cdf(x));
        x = x < 3.0 ? x + 1e-3 : -3.0;
    }
}
BENCHMARK(BM_NormCdf);

void BM_BvnCdf(benchmark::State& state) {
    double x = -2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mvh::bvn_cdf(x, 0.4, 0.6));
        x = x < 2.0 ? x + 1e-3 : -2.0;
    }
}
BENCHMARK(BM_BvnCdf);

void BM_BPrice(benchmark::State& state) {
    double v = 40.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mvh::b_price(kParams, 0.0, v));
        v = v < 250.0 ? v + 0.1 : 40.0;
    }
}
BENCHMARK(BM_BPrice);

// One c(t,v) evaluation at the given Gauss-Legendre order; 64 is the
// production setting, the others bracket it.
void BM_CValue(benchmark::State& state) {
    mvh::NumericsConfig cfg;
    cfg.quad_points = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(mvh::c_value(kParams, 0.0, 66.0, cfg));
}
BENCHMARK(BM_CValue)->RangeMultiplier(2)->Range(32, 128)->Unit(benchmark::kMicrosecond);

void BM_BondPrice(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(mvh::bond_price(kParams, 0.0, 66.0));
}
BENCHMARK(BM_BondPrice)->Unit(benchmark::kMicrosecond);

// Drift of the price along V; dominated by the finite-difference stencil of
// c_tilde in time and space (several quadrature calls per point).
void BM_MProcess(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(mvh::M_process(kParams, 2.5, 66.0));
}
BENCHMARK(BM_MProcess)->Unit(benchmark::kMicrosecond);

void BM_SolveBPde(benchmark::State& state) {
    mvh::PdeGridSpec spec;
    spec.n_u = static_cast<int>(state.range(0));
    spec.n_tau = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(mvh::solve_b_pde(kParams, spec));
}
BENCHMARK(BM_SolveBPde)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SolveCPde(benchmark::State& state) {
    mvh::PdeGridSpec spec;
    spec.n_u = static_cast<int>(state.range(0));
    spec.n_tau = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(mvh::solve_c_pde(kParams, spec));
}
BENCHMARK(BM_SolveCPde)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

// Path generation throughput (lazy batch, no storage).
void BM_FillPath(benchmark::State& state) {
    const int n_steps = 250;
    auto batch = mvh::PathBatch::lazy(kParams, 0.0, 66.0, 1.0, 1 << 20, n_steps, 42);
    std::vector<double> v(n_steps + 1), s(n_steps + 1);
    std::int64_t i = 0;
    for (auto _ : state) {
        batch.fill_path(i++ & ((1 << 20) - 1), v.data(), s.data());
        benchmark::DoNotOptimize(v.data());
        benchmark::DoNotOptimize(s.data());
    }
    state.SetItemsProcessed(state.iterations() * n_steps);
}
BENCHMARK(BM_FillPath);

// Full discrete hedge over a small batch, wealth recursion included.
void BM_HedgeOnce(benchmark::State& state) {
    const auto n_paths = state.range(0);
    auto batch = mvh::PathBatch::lazy(kParams, 0.0, 66.0, 1.0, n_paths, 100, 42);
    const double p0 = mvh::b_price(kParams, 0.0, 66.0).b;
    for (auto _ : state)
        benchmark::DoNotOptimize(mvh::hedge_once(kParams, batch, p0));
    state.SetItemsProcessed(state.iterations() * n_paths);
}
BENCHMARK(BM_HedgeOnce)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
