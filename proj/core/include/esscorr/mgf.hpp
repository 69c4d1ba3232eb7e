#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "esscorr/fock.hpp"

namespace esscorr {

/// A point of the Laplace domain: M_ess(t e; tau) with complex scalar t
/// along the real unit direction e and converging factor tau >= 0.
struct MgfQuery {
  MeasurementDirection direction;
  cplx t;
  double tau = 0.0;

  cplx lambda_a() const { return tau - t; }
  cplx lambda_b() const { return tau + t; }
  /// |Re t| <= tau: the kernel exp(t.S - tau |S|) is bounded by one.
  bool within_existence_region() const { return std::abs(t.real()) <= tau; }
};

struct SurfaceSample {
  Vec3 e;
  cplx value;
  /// Re(value) * e
  Vec3 mapped;
};

/// Sampling route:
///   M = sum (1 + t - tau)^{n_a} (1 - t - tau)^{n_b} p(n_a, n_b; e).
cplx mgf(const TwoModeState& state, const MgfQuery& q, Warnings* warnings = nullptr);
cplx mgf(const JointPhotonDistribution& dist, cplx t, double tau, Warnings* warnings = nullptr);

/// Analytic M_ess for coherent states and mixtures of them, the post-splitter
/// |1,1> input and the two-mode squeezed vacuum. Throws DomainError for tmsv
/// arguments outside 0 <= lambda_a, lambda_b <= 1 (real t).
cplx mgf_closed_form(const StateSpec& spec, const MeasurementDirection& dir, cplx t, double tau);

/// Phi_ess(k) = M_ess(i k; 0).
cplx char_fn(const TwoModeState& state, const Vec3& k);

/// e -> M_ess(t e; tau) e over a list of unit vectors.
std::vector<SurfaceSample> surface_map(const TwoModeState& state, cplx t, double tau,
                                       const std::vector<Vec3>& sphere_grid);

/// n_theta polar rings (poles included) times n_phi azimuths.
std::vector<Vec3> sphere_grid(int n_theta, int n_phi);

/// Q(alpha, beta) = <alpha, beta| rho |alpha, beta> / pi^2.
double husimi_q(const TwoModeState& state, cplx alpha, cplx beta);

struct QuadratureConfig {
  /// Gauss-Laguerre nodes per radial coordinate; 0 picks the smallest count
  /// that is exact for the Fock cutoff.
  int radial_nodes = 0;
  /// Trapezoid nodes per phase; 0 picks the smallest count that is exact for
  /// the Fock cutoff.
  int angular_nodes = 0;
  /// Relative agreement required between the base and the refined rule.
  double rtol = kDefaultTolerances.quadrature_rtol;
  int max_refinements = 3;
};

/// Independent oracle: integrates the Gaussian kernel against the Husimi
/// function in polar coordinates per complex plane. Requires lambda_a,
/// lambda_b < 1. Throws QuadratureError when the refined rule disagrees.
double mgf_via_husimi_quadrature(const TwoModeState& state, const MeasurementDirection& dir,
                                 double t, double tau, const QuadratureConfig& quad = {});

/// First sign change of Re M_ess(t e; tau) on [t_lo, t_hi], located by a
/// uniform pre-scan and bisection. Tangential zeros are not detected.
std::optional<double> find_node(const TwoModeState& state, const MeasurementDirection& dir,
                                double tau, double t_lo, double t_hi,
                                Warnings* warnings = nullptr,
                                const Tolerances& tol = kDefaultTolerances);

/// One row of an MGF grid export.
struct MgfRecord {
  Vec3 e;
  cplx t;
  double tau = 0.0;
  cplx value;
};

/// Columns: e_x, e_y, e_z, t_re, t_im, tau, M_re, M_im.
void write_mgf_csv(std::ostream& out, const std::vector<MgfRecord>& rows);

}  // namespace esscorr
