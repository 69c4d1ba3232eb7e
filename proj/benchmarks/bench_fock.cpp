#include <benchmark/benchmark.h>

#include "esscorr/esscorr.hpp"

using namespace esscorr;

static void BM_MakeTmsv(benchmark::State& st) {
  const int cutoff = static_cast<int>(st.range(0));
  for (auto _ : st) {
    benchmark::DoNotOptimize(make_state(Tmsv{0.6}, cutoff));
  }
}
BENCHMARK(BM_MakeTmsv)->Arg(20)->Arg(60)->Arg(120);

static void BM_BeamSplitterBlock(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const cplx T = std::polar(std::sqrt(0.3), 0.4);
  const cplx R = std::polar(std::sqrt(0.7), -1.1);
  for (auto _ : st) {
    benchmark::DoNotOptimize(beam_splitter_block(n, T, R));
  }
}
BENCHMARK(BM_BeamSplitterBlock)->Arg(8)->Arg(64)->Arg(128)->Arg(256);

static void BM_BeamSplitterCoherentMixture(benchmark::State& st) {
  const int cutoff = static_cast<int>(st.range(0));
  const Mixture m{{{0.5, cplx(1.0, 0.2), cplx(-0.3, 0.5)}, {0.5, cplx(0.4, -0.7), cplx(0.9, 0.0)}}};
  const auto s = make_state(m, cutoff);
  for (auto _ : st) {
    benchmark::DoNotOptimize(beam_splitter(s, std::sqrt(0.5), cplx(0.0, std::sqrt(0.5))));
  }
}
BENCHMARK(BM_BeamSplitterCoherentMixture)->Arg(10)->Arg(20)->Arg(40);

static void BM_JointDistributionTmsv(benchmark::State& st) {
  const auto s = make_state(Tmsv{0.6}, static_cast<int>(st.range(0)));
  const auto dir = MeasurementDirection::from_vector(Vec3(0.6, 0.0, 0.8));
  for (auto _ : st) {
    benchmark::DoNotOptimize(joint_photon_distribution(s, dir));
  }
}
BENCHMARK(BM_JointDistributionTmsv)->Arg(20)->Arg(40)->Arg(60);
