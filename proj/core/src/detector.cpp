#include "esscorr/detector.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace esscorr {

namespace {

double choose(int n, int k) {
  if (k < 0 || n < 0 || k > n) {
    return 0.0;
  }
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

// Normally ordered <: m_a^u m_b^v :> for the diode no-click operators.
Eigen::MatrixXd no_click_moments(const JointPhotonDistribution& dist,
                                 const ClickDetectorConfig& a, const ClickDetectorConfig& b) {
  Eigen::MatrixXd g(a.D + 1, b.D + 1);
  const double sa = a.eps * a.eta / a.D;
  const double sb = b.eps * b.eta / b.D;
  for (int u = 0; u <= a.D; ++u) {
    for (int v = 0; v <= b.D; ++v) {
      const cplx pe = power_expectation(dist, 1.0 - u * sa, 1.0 - v * sb);
      g(u, v) = std::exp(-u * a.nu - v * b.nu) * pe.real();
    }
  }
  return g;
}

void check_moment_order(int k, int l, const ClickDetectorConfig& a, const ClickDetectorConfig& b) {
  if (k < 0 || k > a.D || l < 0 || l > b.D) {
    std::ostringstream msg;
    msg << "moment order (" << k << ", " << l << ") outside 0..D_a = " << a.D
        << ", 0..D_b = " << b.D;
    throw ValidationError(msg.str());
  }
}

// C(D_a-i,k) C(D_b-j,l) / (C(D_a,k) C(D_b,l))
double moment_weight(int i, int j, int k, int l, int da, int db) {
  return choose(da - i, k) * choose(db - j, l) / (choose(da, k) * choose(db, l));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void ClickDetectorConfig::validate(const Tolerances& tol) const {
  if (D < 1) {
    throw ValidationError("detector needs at least one diode");
  }
  if (D > tol.max_detectors_per_arm) {
    std::ostringstream msg;
    msg << "D = " << D << " exceeds " << tol.max_detectors_per_arm
        << " diodes per arm; the alternating click sums would need higher-precision accumulation";
    throw ValidationError(msg.str());
  }
  if (!(eta >= 0.0 && eta <= 1.0) || !(eps >= 0.0 && eps <= 1.0)) {
    throw ValidationError("efficiency and filter transmission must lie in [0, 1]");
  }
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw ValidationError("dark-count exponent must be finite and non-negative");
  }
}

ClickDistribution click_distribution(const JointPhotonDistribution& dist,
                                     const ClickDetectorConfig& arm_a,
                                     const ClickDetectorConfig& arm_b, const Tolerances& tol) {
  arm_a.validate(tol);
  arm_b.validate(tol);
  const Eigen::MatrixXd g = no_click_moments(dist, arm_a, arm_b);
  const int da = arm_a.D;
  const int db = arm_b.D;
  Eigen::MatrixXd c(da + 1, db + 1);
  for (int i = 0; i <= da; ++i) {
    for (int j = 0; j <= db; ++j) {
      long double sum = 0.0L;
      for (int r = 0; r <= i; ++r) {
        for (int s = 0; s <= j; ++s) {
          const double sign = ((r + s) % 2 == 0) ? 1.0 : -1.0;
          sum += static_cast<long double>(sign * choose(i, r) * choose(j, s)) *
                 g(da - i + r, db - j + s);
        }
      }
      c(i, j) = choose(da, i) * choose(db, j) * static_cast<double>(sum);
    }
  }
  if (c.minCoeff() < tol.click_probability_floor) {
    std::ostringstream msg;
    msg << "negative click probability " << c.minCoeff()
        << "; the Fock cutoff is probably too small";
    throw NumericError(msg.str());
  }
  const double total = c.sum();
  if (total < 1.0 - dist.leakage - tol.click_normalization ||
      total > 1.0 + tol.click_normalization) {
    std::ostringstream msg;
    msg << "click probabilities sum to " << total << " with truncated mass " << dist.leakage;
    throw NumericError(msg.str());
  }
  return ClickDistribution{std::move(c), dist.direction, arm_a, arm_b};
}

ClickDistribution click_distribution(const TwoModeState& state, const MeasurementDirection& dir,
                                     const ClickDetectorConfig& arm_a,
                                     const ClickDetectorConfig& arm_b, const Tolerances& tol) {
  return click_distribution(joint_photon_distribution(state, dir), arm_a, arm_b, tol);
}

double moments_from_clicks(const ClickDistribution& clicks, int k, int l, bool correct_dark) {
  const auto& a = clicks.arm_a;
  const auto& b = clicks.arm_b;
  check_moment_order(k, l, a, b);
  double mu = 0.0;
  for (int i = 0; i <= a.D - k; ++i) {
    for (int j = 0; j <= b.D - l; ++j) {
      mu += moment_weight(i, j, k, l, a.D, b.D) * clicks.c(i, j);
    }
  }
  if (correct_dark) {
    mu /= std::exp(-k * a.nu - l * b.nu);
  }
  return mu;
}

LaplacePoint click_moment_to_mgf_point(int k, int l, const ClickDetectorConfig& arm_a,
                                       const ClickDetectorConfig& arm_b) {
  check_moment_order(k, l, arm_a, arm_b);
  const double x = k * arm_a.eps * arm_a.eta / (2.0 * arm_a.D);
  const double y = l * arm_b.eps * arm_b.eta / (2.0 * arm_b.D);
  return {y - x, x + y};
}

bool AccessibleRegion::contains(LaplacePoint p, double slack) const {
  if (continuous) {
    const double x = p.tau - p.t;
    const double y = p.tau + p.t;
    return x >= -slack && x <= eta_a + slack && y >= -slack && y <= eta_b + slack;
  }
  for (const auto& q : lattice) {
    if (std::abs(q.t - p.t) <= slack && std::abs(q.tau - p.tau) <= slack) {
      return true;
    }
  }
  return false;
}

AccessibleRegion accessible_region(const ClickDetectorConfig& arm_a,
                                   const ClickDetectorConfig& arm_b, bool eps_sweep) {
  arm_a.validate();
  arm_b.validate();
  AccessibleRegion r;
  r.continuous = eps_sweep;
  for (int k = 0; k <= arm_a.D; ++k) {
    for (int l = 0; l <= arm_b.D; ++l) {
      r.lattice.push_back(click_moment_to_mgf_point(k, l, arm_a, arm_b));
    }
  }
  // With a filter sweep the reachable products k eps eta / D cover [0, eta].
  r.eta_a = eps_sweep ? arm_a.eta : arm_a.eps * arm_a.eta;
  r.eta_b = eps_sweep ? arm_b.eta : arm_b.eps * arm_b.eta;
  const double ha = 0.5 * r.eta_a;
  const double hb = 0.5 * r.eta_b;
  r.vertices = {{0.0, 0.0}, {hb, hb}, {hb - ha, ha + hb}, {-ha, ha}};
  return r;
}

ClickSampleSet sample_clicks(const ClickDistribution& clicks, std::int64_t n,
                             std::uint64_t seed, const Tolerances& tol) {
  if (n < 1) {
    throw ValidationError("sample count must be positive");
  }
  const double total = clicks.c.sum();
  if (std::abs(total - 1.0) > tol.click_normalization ||
      clicks.c.minCoeff() < tol.click_probability_floor) {
    std::ostringstream msg;
    msg << "click distribution is not normalized (sum " << total << ")";
    throw ValidationError(msg.str());
  }
  const auto rows = clicks.c.rows();
  const auto cols = clicks.c.cols();
  ClickSampleSet out;
  out.counts.setZero(rows, cols);
  out.n_total = n;
  out.seed = seed;
  std::int64_t remaining = n;
  double remaining_p = 1.0;
  const Eigen::Index cells = rows * cols;
  for (Eigen::Index cell = 0; cell < cells && remaining > 0; ++cell) {
    const Eigen::Index i = cell / cols;
    const Eigen::Index j = cell % cols;
    const double p = std::max(clicks.c(i, j), 0.0);
    std::int64_t draw = 0;
    if (cell == cells - 1) {
      draw = remaining;
    } else if (p > 0.0) {
      const double q = remaining_p > 0.0 ? std::min(p / remaining_p, 1.0) : 1.0;
      std::mt19937_64 gen(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(cell))));
      std::binomial_distribution<std::int64_t> binom(remaining, q);
      draw = binom(gen);
    }
    out.counts(i, j) = draw;
    remaining -= draw;
    remaining_p -= p;
  }
  return out;
}

Estimate estimate_mgf_from_samples(const ClickSampleSet& samples, int k, int l,
                                   const ClickDetectorConfig& arm_a,
                                   const ClickDetectorConfig& arm_b, bool correct_dark) {
  check_moment_order(k, l, arm_a, arm_b);
  if (samples.n_total < 1) {
    throw ValidationError("cannot estimate a moment from zero samples");
  }
  if (samples.counts.rows() != arm_a.D + 1 || samples.counts.cols() != arm_b.D + 1) {
    throw ValidationError("sample table does not match the detector configuration");
  }
  const double n = static_cast<double>(samples.n_total);
  double mean = 0.0;
  for (Eigen::Index i = 0; i < samples.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < samples.counts.cols(); ++j) {
      mean += samples.counts(i, j) * moment_weight(i, j, k, l, arm_a.D, arm_b.D);
    }
  }
  mean /= n;
  double ss = 0.0;
  for (Eigen::Index i = 0; i < samples.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < samples.counts.cols(); ++j) {
      const double d = moment_weight(i, j, k, l, arm_a.D, arm_b.D) - mean;
      ss += samples.counts(i, j) * d * d;
    }
  }
  Estimate est;
  est.value = mean;
  est.std_error = samples.n_total > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  if (correct_dark) {
    const double dark = std::exp(-k * arm_a.nu - l * arm_b.nu);
    est.value /= dark;
    est.std_error /= dark;
  }
  return est;
}

}  // namespace esscorr
