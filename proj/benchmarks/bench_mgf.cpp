#include <benchmark/benchmark.h>

#include "esscorr/esscorr.hpp"

using namespace esscorr;

static void BM_MgfGrid(benchmark::State& st) {
  const auto s = make_state(Tmsv{0.5}, 40);
  const auto dist = joint_photon_distribution(s, MeasurementDirection::from_vector(Vec3(0, 0, 1)));
  for (auto _ : st) {
    cplx acc = 0.0;
    for (int i = 0; i < 32; ++i) {
      const double tau = i / 31.0;
      for (int j = 0; j < 32; ++j) {
        acc += mgf(dist, tau * (2.0 * j / 31.0 - 1.0), tau);
      }
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_MgfGrid);

static void BM_SurfaceMapHom(benchmark::State& st) {
  const auto s = make_state(HomInput{}, 2);
  const auto grid = sphere_grid(32, 64);
  for (auto _ : st) {
    benchmark::DoNotOptimize(surface_map(s, 1.0, 0.0, grid));
  }
}
BENCHMARK(BM_SurfaceMapHom);

static void BM_HusimiQuadrature(benchmark::State& st) {
  const Coherent spec{0.5, 0.5};
  const auto s = make_state(spec, suggest_cutoff(spec));
  const auto dir = MeasurementDirection::from_vector(Vec3(1, 0, 0));
  for (auto _ : st) {
    benchmark::DoNotOptimize(mgf_via_husimi_quadrature(s, dir, 0.2, 0.4));
  }
}
BENCHMARK(BM_HusimiQuadrature)->Unit(benchmark::kMillisecond);

static void BM_MatrixVerdict(benchmark::State& st) {
  const auto s = make_state(HomInput{}, 2);
  const auto dir = MeasurementDirection::from_vector(Vec3(1, 0, 0));
  std::vector<MatrixPoint> pts;
  for (int i = 0; i < st.range(0); ++i) {
    pts.push_back({cplx(0.3 * i, 0.0), 0.1 * i});
  }
  for (auto _ : st) {
    benchmark::DoNotOptimize(matrix_verdict(mgf_matrix(s, {dir, pts})));
  }
}
BENCHMARK(BM_MatrixVerdict)->Arg(2)->Arg(5);
