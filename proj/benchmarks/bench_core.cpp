// bench_core.cpp — Microbenchmarks for the operations that dominate real runs:
// Wigner grids, operator exponentials, the imprint contraction, one EM
// iteration of the tomography loop, and a single herald evaluation.

#include "focklab/channels.hpp"
#include "focklab/characterize.hpp"
#include "focklab/herald.hpp"
#include "focklab/imprint.hpp"
#include "focklab/states.hpp"
#include "focklab/tomo.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace focklab;

void BM_WignerGrid(benchmark::State& state) {
  const int nmax = static_cast<int>(state.range(0));
  const DensityMatrix rho = to_density(cubic_state(0.090, Truncation(nmax)));
  const std::vector<double> grid = default_grid();
  for (auto _ : state) {
    const WignerGrid w = wigner(rho, grid, grid);
    benchmark::DoNotOptimize(w.w.sum());
  }
}
BENCHMARK(BM_WignerGrid)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ExpmAntihermitian(benchmark::State& state) {
  const int nmax = static_cast<int>(state.range(0));
  const Truncation t(nmax);
  const ModeOperator x = quadrature(t, Quad::x);
  const Matrix g = Complex(0.0, 0.02) * x.m * x.m * x.m;
  for (auto _ : state) {
    const Matrix u = expm_antihermitian(g);
    benchmark::DoNotOptimize(u(0, 0));
  }
}
BENCHMARK(BM_ExpmAntihermitian)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_Imprint(benchmark::State& state) {
  const int nmax = static_cast<int>(state.range(0));
  const Truncation t(nmax);
  const DensityMatrix ancilla = to_density(cubic_state(0.090, t));
  const DensityMatrix probe = to_density(coherent(Complex(0.5, 0.0), t));
  for (auto _ : state) {
    const ImprintResult out = imprint(probe, ancilla);
    benchmark::DoNotOptimize(out.weight);
  }
}
BENCHMARK(BM_Imprint)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_TomoReconstruct(benchmark::State& state) {
  const DensityMatrix rho = to_density(cubic_state(0.090, Truncation(10)));
  std::vector<double> thetas;
  for (int k = 0; k < 6; ++k) thetas.push_back(3.14159265358979323846 * k / 6);
  const QuadratureRecord rec = sample(rho, thetas, 500, 7);
  TomoConfig cfg;
  cfg.max_iters = 10;
  cfg.tol = 0.0;  // fixed iteration count: measures cost per EM step
  for (auto _ : state) {
    const TomoResult res = reconstruct_full(rec, cfg);
    benchmark::DoNotOptimize(res.rho.m(0, 0));
  }
}
BENCHMARK(BM_TomoReconstruct)->Unit(benchmark::kMillisecond);

void BM_HeraldEval(benchmark::State& state) {
  HeraldConfig cfg = HeraldConfig::balanced(0.1, Truncation(5), Truncation(2));
  cfg.betas = {Complex(0.2, 0.0), Complex(0.0, 0.2), Complex(0.1, 0.1)};
  for (auto _ : state) {
    const HeraldResult res = herald(cfg);
    benchmark::DoNotOptimize(res.p_success);
  }
}
BENCHMARK(BM_HeraldEval)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
