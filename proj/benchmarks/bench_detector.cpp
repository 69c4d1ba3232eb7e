#include <benchmark/benchmark.h>

#include "esscorr/esscorr.hpp"

using namespace esscorr;

static void BM_ClickDistribution(benchmark::State& st) {
  const auto s = make_state(Tmsv{0.5}, 40);
  const auto dist = joint_photon_distribution(s, MeasurementDirection::from_vector(Vec3(0, 0, 1)));
  const ClickDetectorConfig arm{static_cast<int>(st.range(0)), 0.6, 0.01, 1.0};
  for (auto _ : st) {
    benchmark::DoNotOptimize(click_distribution(dist, arm, arm));
  }
}
BENCHMARK(BM_ClickDistribution)->Arg(1)->Arg(4)->Arg(8);

static void BM_SampleClicks(benchmark::State& st) {
  const auto s = make_state(Tmsv{0.5}, 40);
  const ClickDetectorConfig arm{4, 0.6, 0.0, 1.0};
  const auto clicks =
      click_distribution(s, MeasurementDirection::from_vector(Vec3(0, 0, 1)), arm, arm);
  for (auto _ : st) {
    benchmark::DoNotOptimize(sample_clicks(clicks, st.range(0), 42));
  }
}
BENCHMARK(BM_SampleClicks)->Arg(1'000)->Arg(1'000'000);
