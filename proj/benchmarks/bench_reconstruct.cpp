#include <benchmark/benchmark.h>

#include "esscorr/esscorr.hpp"

using namespace esscorr;

static void BM_GaussianInversion(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const CoherentEnsemble ens = GaussianEnsemble{2.0, cplx(1.0, 1.0), 0.5, 0.5};
  const auto grid = Grid3::cube(24.0, n);
  const auto dual = DualGrid3::of(grid);
  const double tau = default_tau(grid, ens);
  for (auto _ : st) {
    benchmark::DoNotOptimize(invert_to_pess(mgf_imaginary_grid(ens, dual, tau), grid));
  }
}
BENCHMARK(BM_GaussianInversion)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_MonteCarloOracle(benchmark::State& st) {
  const CoherentEnsemble ens = GaussianEnsemble{2.0, cplx(1.0, 1.0), 0.5, 0.5};
  const auto grid = Grid3::cube(24.0, 64);
  for (auto _ : st) {
    benchmark::DoNotOptimize(pess_mc_oracle(ens, grid, st.range(0), 7));
  }
}
BENCHMARK(BM_MonteCarloOracle)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
