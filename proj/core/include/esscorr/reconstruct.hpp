#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "esscorr/fock.hpp"

namespace esscorr {

/// Uniform half-open axis: points min + m * step, m = 0..n-1, step = (max - min) / n.
struct Axis {
  double min = -1.0;
  double max = 1.0;
  int n = 8;

  double step() const { return (max - min) / n; }
  double point(int m) const { return min + m * step(); }
};

/// Stokes-space grid, axis order (S_x, S_y, S_z).
struct Grid3 {
  std::array<Axis, 3> axes;

  /// Same axis [-half_width, half_width) in all three directions.
  static Grid3 cube(double half_width, int n);

  /// n >= 8 and even, max > min on every axis.
  void validate() const;
  std::size_t size() const;
  std::size_t index(int ix, int iy, int iz) const;
  Vec3 point(int ix, int iy, int iz) const;
  double cell_volume() const;
  /// Largest |S| over the grid corners.
  double radius() const;
};

/// Fourier-conjugate wave-vector grid: k_j = (j - n/2) 2 pi / (n step).
struct DualGrid3 {
  std::array<int, 3> n{};
  std::array<double, 3> dk{};

  static DualGrid3 of(const Grid3& s_grid);
  std::size_t size() const;
  Vec3 point(int jx, int jy, int jz) const;
};

struct CoherentPoint {
  double weight = 0.0;
  cplx alpha;
  cplx beta;
};

/// alpha = alpha0 + complex Gaussian noise with E|d alpha|^2 = nbar_a, and
/// independently for beta.
struct GaussianEnsemble {
  cplx alpha0;
  cplx beta0;
  double nbar_a = 0.0;
  double nbar_b = 0.0;
};

using CoherentEnsemble = std::variant<std::vector<CoherentPoint>, GaussianEnsemble>;

void validate_ensemble(const CoherentEnsemble& ensemble,
                       const Tolerances& tol = kDefaultTolerances);

/// M_ess(i k; tau) on a dual grid, row-major (jx, jy, jz).
struct KSpaceData {
  DualGrid3 grid;
  std::vector<cplx> values;
  double tau = 0.0;
  /// "regular" for sources with a smooth P_ess, otherwise "band_limited_smoothed".
  std::string label;
};

/// Closed form exp(i k.S - tau |S|) averaged over the ensemble.
KSpaceData mgf_imaginary_grid(const CoherentEnsemble& ensemble, const DualGrid3& k_grid,
                              double tau);
/// Sampling route with t = i |k| along k / |k|.
KSpaceData mgf_imaginary_grid(const TwoModeState& state, const DualGrid3& k_grid, double tau,
                              Warnings* warnings = nullptr);

struct InversionOptions {
  /// Raised-cosine window on the k-grid.
  bool window = true;
  double imaginary_residue = kDefaultTolerances.imaginary_residue;
  double normalization = kDefaultTolerances.pess_normalization;
  double boundary_mass = kDefaultTolerances.boundary_mass;
};

struct PessGrid {
  Grid3 grid;
  std::vector<double> values;
  double tau_used = 0.0;
  bool windowed = false;
  /// "regular", "band_limited_smoothed" or "histogram".
  std::string label;
  Warnings warnings;

  double at(int ix, int iy, int iz) const { return values[grid.index(ix, iy, iz)]; }
  /// Riemann sum times cell volume.
  double integral() const;
  double peak() const;
  double min_value() const;
};

/// Discrete inverse transform multiplied by e^{tau |S|}.
PessGrid invert_to_pess(const KSpaceData& data, const Grid3& s_grid,
                        const InversionOptions& options = {});

/// Normalized histogram of S(alpha, beta) over n ensemble draws, binned to
/// the nearest grid point. Draws outside the grid are discarded.
PessGrid pess_mc_oracle(const CoherentEnsemble& ensemble, const Grid3& s_grid, std::int64_t n,
                        std::uint64_t seed);

struct ClassicalityReport {
  double min_value = 0.0;
  bool essentially_classical = true;
};

/// Flag is true iff min over the grid >= -tol.
ClassicalityReport classicality_check(const PessGrid& p, double tol);

/// Sum |p - q| dV after normalizing both grids to unit integral.
double l1_distance(const PessGrid& p, const PessGrid& q);

/// 1 / (2 S_max) with S_max the grid radius.
double default_tau(const Grid3& s_grid);
/// Zero for finite ensembles, whose |S| is bounded; default_tau(s_grid) otherwise.
double default_tau(const Grid3& s_grid, const CoherentEnsemble& ensemble);

// --- serialization --------------------------------------------------------------

std::string grid_to_json(const Grid3& grid);
Grid3 grid_from_json(const std::string& text);

/// Little-endian uint64 header length, JSON header, then row-major
/// little-endian doubles.
void write_pess_binary(std::ostream& out, const PessGrid& p);
PessGrid read_pess_binary(std::istream& in);

/// Columns S_x, S_y, S_z, value.
void write_pess_csv(std::ostream& out, const PessGrid& p);

/// Ensemble JSON:
///   {"kind":"gaussian_ensemble","alpha0":...,"beta0":...,"nbar_a":0.5,"nbar_b":0.5}
///   {"kind":"ensemble","components":[{"weight":...,"alpha":...,"beta":...}, ...]}
/// Coherent, vacuum and mixture state specs are accepted as finite ensembles.
CoherentEnsemble parse_ensemble_json(const std::string& text);
std::string ensemble_to_json(const CoherentEnsemble& ensemble);
/// True when parse_ensemble_json accepts the text.
bool is_ensemble_json(const std::string& text);

}  // namespace esscorr
