#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "esscorr/fock.hpp"

namespace esscorr {

/// One arm of the click-counting setup: D on/off diodes behind an ND filter.
struct ClickDetectorConfig {
  int D = 1;
  double eta = 1.0;
  /// Dark-count exponent per diode and exposure.
  double nu = 0.0;
  /// ND-filter transmission.
  double eps = 1.0;

  void validate(const Tolerances& tol = kDefaultTolerances) const;
};

/// Joint click probabilities c(i, j), i = 0..D_a, j = 0..D_b.
struct ClickDistribution {
  Eigen::MatrixXd c;
  MeasurementDirection direction;
  ClickDetectorConfig arm_a;
  ClickDetectorConfig arm_b;
};

struct ClickSampleSet {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::int64_t n_total = 0;
  std::uint64_t seed = 0;
};

/// (t, tau) coordinates of the Laplace domain reached by one moment.
struct LaplacePoint {
  double t = 0.0;
  double tau = 0.0;
};

ClickDistribution click_distribution(const JointPhotonDistribution& dist,
                                     const ClickDetectorConfig& arm_a,
                                     const ClickDetectorConfig& arm_b,
                                     const Tolerances& tol = kDefaultTolerances);
ClickDistribution click_distribution(const TwoModeState& state, const MeasurementDirection& dir,
                                     const ClickDetectorConfig& arm_a,
                                     const ClickDetectorConfig& arm_b,
                                     const Tolerances& tol = kDefaultTolerances);

/// mu_{k,l} = sum C(D_a-i,k) C(D_b-j,l) / (C(D_a,k) C(D_b,l)) c(i,j), optionally
/// divided by e^{-k nu_a - l nu_b}.
double moments_from_clicks(const ClickDistribution& clicks, int k, int l,
                           bool correct_dark = true);

/// tau = k eps_a eta_a / (2 D_a) + l eps_b eta_b / (2 D_b),
/// t   = l eps_b eta_b / (2 D_b) - k eps_a eta_a / (2 D_a).
LaplacePoint click_moment_to_mgf_point(int k, int l, const ClickDetectorConfig& arm_a,
                                       const ClickDetectorConfig& arm_b);

/// Part of the (t, tau) plane reachable with the given arms. With a fixed
/// filter setting only the (k, l) lattice is reachable; sweeping both filters
/// over [0, 1] fills the parallelogram spanned by the lattice corners.
struct AccessibleRegion {
  bool continuous = false;
  /// Lattice points in (k, l) order, k outer.
  std::vector<LaplacePoint> lattice;
  /// Corners of the continuous region, counter-clockwise from the origin.
  std::vector<LaplacePoint> vertices;
  double eta_a = 0.0;
  double eta_b = 0.0;

  bool contains(LaplacePoint p, double slack = 1e-12) const;
};

AccessibleRegion accessible_region(const ClickDetectorConfig& arm_a,
                                   const ClickDetectorConfig& arm_b, bool eps_sweep);

/// Multinomial draw of n events. Each cell is drawn conditionally with its
/// own generator keyed by (seed, cell), so counts depend only on the seed.
ClickSampleSet sample_clicks(const ClickDistribution& clicks, std::int64_t n,
                             std::uint64_t seed, const Tolerances& tol = kDefaultTolerances);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Plug-in estimate of mu_{k,l} with the standard error of the mean.
Estimate estimate_mgf_from_samples(const ClickSampleSet& samples, int k, int l,
                                   const ClickDetectorConfig& arm_a,
                                   const ClickDetectorConfig& arm_b, bool correct_dark = true);

// --- serialization --------------------------------------------------------------

std::string to_json(const ClickDetectorConfig& cfg);
ClickDetectorConfig click_config_from_json(const std::string& text);

/// Row-major probabilities plus direction and both configs.
std::string to_json(const ClickDistribution& clicks);
ClickDistribution click_distribution_from_json(const std::string& text);

std::string to_json(const ClickSampleSet& samples);
ClickSampleSet click_samples_from_json(const std::string& text);

/// Columns i, j, probability.
void write_click_csv(std::ostream& out, const ClickDistribution& clicks);
/// Columns i, j, count.
void write_click_csv(std::ostream& out, const ClickSampleSet& samples);

}  // namespace esscorr
