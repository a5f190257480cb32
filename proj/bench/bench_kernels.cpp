// Serial reference vs OpenMP variants of the hot kernels, plus a short
// end-to-end solve in each mode. Thread count follows TEMPERED_LDG_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "tldg/kernels.hpp"
#include "tldg/mesh.hpp"
#include "tldg/problems.hpp"
#include "tldg/quadrature.hpp"
#include "tldg/solver.hpp"

using namespace tldg;

namespace {

// history sum: `levels` stored solution vectors of length `dofs`
void history_sum(benchmark::State& state, Exec exec) {
    const auto levels = static_cast<std::size_t>(state.range(0));
    const auto dofs = static_cast<std::size_t>(state.range(1));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> coeffs(levels), rows(levels * dofs), out(dofs);
    for (auto& c : coeffs) c = dist(rng);
    for (auto& r : rows) r = dist(rng);
    for (auto _ : state) {
        kernels::weighted_row_sum(exec, coeffs, rows, dofs, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * levels * dofs * sizeof(double)));
}

void load(benchmark::State& state, Exec exec) {
    const int cells = static_cast<int>(state.range(0));
    const int k = 2;
    const Mesh1D mesh = uniform_mesh(0.0, 1.0, cells);
    const LegendreBasis basis(k, gauss_legendre(default_quad_order(k)));
    const auto f = [](double x) { return std::exp(-x) * std::sin(6.0 * x); };
    std::vector<double> out(static_cast<std::size_t>(cells) * (k + 1));
    for (auto _ : state) {
        kernels::assemble_load(exec, mesh, basis, f, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void solve(benchmark::State& state, Exec exec) {
    SchemeConfig c;
    c.alpha = 0.6;
    c.gamma = 2.0;
    c.delta = 0.3;
    c.degree = 2;
    c.mesh.cells = static_cast<int>(state.range(0));
    c.steps = static_cast<int>(state.range(1));
    c.exec = exec;
    const auto problem = sine_manufactured_problem(c.gamma, c.alpha);
    for (auto _ : state) {
        Solver s(c, problem.initial);
        for (int n = 0; n < c.steps; ++n) s.step(problem.forcing);
        benchmark::DoNotOptimize(s.u_coeffs(c.steps).data());
    }
}

void BM_HistorySerial(benchmark::State& s) { history_sum(s, Exec::serial); }
void BM_HistoryParallel(benchmark::State& s) { history_sum(s, Exec::parallel); }
void BM_LoadSerial(benchmark::State& s) { load(s, Exec::serial); }
void BM_LoadParallel(benchmark::State& s) { load(s, Exec::parallel); }
void BM_SolveSerial(benchmark::State& s) { solve(s, Exec::serial); }
void BM_SolveParallel(benchmark::State& s) { solve(s, Exec::parallel); }

}  // namespace

BENCHMARK(BM_HistorySerial)->Args({1000, 120})->Args({4000, 240})->Args({1000, 3000});
BENCHMARK(BM_HistoryParallel)->Args({1000, 120})->Args({4000, 240})->Args({1000, 3000});
BENCHMARK(BM_LoadSerial)->Arg(100)->Arg(10000);
BENCHMARK(BM_LoadParallel)->Arg(100)->Arg(10000);
BENCHMARK(BM_SolveSerial)->Args({40, 500})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveParallel)->Args({40, 500})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
