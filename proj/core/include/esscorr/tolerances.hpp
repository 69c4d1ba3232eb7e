#pragma once

namespace esscorr {

/// Every numerical threshold used by the library. Property tests and the
/// acceptance suite read the same record.
struct Tolerances {
  // TwoModeState
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double eigenvalue_floor = -1e-9;

  // MeasurementDirection and beam splitter
  double direction_norm = 1e-12;
  double direction_input_norm = 1e-9;
  double unitarity = 1e-10;

  // StateSpec
  double mixture_weight_sum = 1e-12;
  double leakage_bound = 1e-10;

  // Photon statistics and MGF
  double probability_floor = -1e-12;
  double convergence_leakage = 1e-12;
  double mgf_hermiticity = 1e-10;
  double root_resolution = 1e-10;
  int root_prescan_points = 512;

  // Nonclassicality verdicts
  double verdict = 1e-9;
  double matrix_hermiticity = 1e-8;

  // Click detectors
  double click_probability_floor = -1e-10;
  double click_normalization = 1e-9;
  int max_detectors_per_arm = 8;

  // Husimi quadrature oracle
  double quadrature_rtol = 1e-4;

  // Reconstruction
  double imaginary_residue = 1e-6;
  double pess_normalization = 1e-2;
  double boundary_mass = 1e-3;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace esscorr
