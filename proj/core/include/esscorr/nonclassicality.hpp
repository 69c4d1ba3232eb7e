#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "esscorr/fock.hpp"

namespace esscorr {

/// One Laplace point (t_p, tau_p) of a matrix criterion.
struct MatrixPoint {
  cplx t;
  double tau = 0.0;
};

/// Index set of a matrix criterion; all points share one direction e.
struct MgfMatrixSpec {
  MeasurementDirection direction;
  std::vector<MatrixPoint> points;
};

enum class Verdict { kNonclassical, kInconclusive };

std::string_view verdict_name(Verdict v);

struct CriterionReport {
  /// Determinant, minimum eigenvalue or 1 - |Phi| depending on the test.
  double value = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  double tolerance = 0.0;
  /// Eigenvector of the minimum eigenvalue for matrix tests.
  std::optional<Eigen::VectorXcd> witness;
};

/// Verdict is nonclassical iff value < -tolerance.
CriterionReport make_report(double value, double tolerance);

/// Entries M_ess(t_p* + t_q; tau_p + tau_q).
Eigen::MatrixXcd mgf_matrix(const TwoModeState& state, const MgfMatrixSpec& spec,
                            Warnings* warnings = nullptr);
Eigen::MatrixXcd mgf_matrix(const JointPhotonDistribution& dist,
                            const std::vector<MatrixPoint>& points,
                            Warnings* warnings = nullptr);

/// Minimum-eigenvalue test. Throws ValidationError when the input deviates
/// from Hermitian by more than tol.matrix_hermiticity.
CriterionReport matrix_verdict(const Eigen::MatrixXcd& m,
                               double tolerance = kDefaultTolerances.verdict,
                               const Tolerances& tol = kDefaultTolerances);

/// Leading principal minors, order 1..n.
std::vector<double> sylvester_minors(const Eigen::MatrixXcd& m);

/// det [[M(2 Re t; 2 tau), M(t* + t'; tau + tau')], [c.c., M(2 Re t'; 2 tau')]].
double second_order_det(const TwoModeState& state, const MeasurementDirection& dir, cplx t,
                        double tau, cplx t2, double tau2);

/// value = 1 - |Phi_ess(k)|.
CriterionReport char_fn_criterion(const TwoModeState& state, const Vec3& k,
                                  double tolerance = kDefaultTolerances.verdict);

/// Normally ordered variances of e.S and N.
struct VarianceCriteria {
  double var_S = 0.0;
  double var_N = 0.0;
};

VarianceCriteria variance_criteria(const TwoModeState& state, const MeasurementDirection& dir);

struct CrossCorrelation {
  /// <:(dN)^2:><:(d e.S)^2:> - <:dN d(e.S):>^2
  double stokes = 0.0;
  /// <:(dn_a)^2:><:(dn_b)^2:> - <:dn_a dn_b:>^2
  double photon_number = 0.0;
};

CrossCorrelation cross_correlation_det(const TwoModeState& state,
                                       const MeasurementDirection& dir);

/// |<:A^dagger B:>|^2 - <:A^dagger A:><:B^dagger B:> for the MGF kernels at
/// (t, tau) and (t', tau'). Requires (t', tau') != (0, 0).
double cauchy_schwarz_violation(const TwoModeState& state, const MeasurementDirection& dir,
                                cplx t, double tau, cplx t2, double tau2);

}  // namespace esscorr
