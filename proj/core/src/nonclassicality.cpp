#include "esscorr/nonclassicality.hpp"

#include <sstream>

#include "esscorr/mgf.hpp"

namespace esscorr {

namespace {

struct SecondOrder {
  double m11;
  double m22;
  cplx m12;
};

SecondOrder second_order_entries(const TwoModeState& state, const MeasurementDirection& dir,
                                 cplx t, double tau, cplx t2, double tau2) {
  const auto dist = joint_photon_distribution(state, dir);
  SecondOrder s;
  s.m11 = mgf(dist, 2.0 * t.real(), 2.0 * tau).real();
  s.m22 = mgf(dist, 2.0 * t2.real(), 2.0 * tau2).real();
  s.m12 = mgf(dist, std::conj(t) + t2, tau + tau2);
  return s;
}

struct Moments {
  double f10, f01, f20, f11, f02;
};

Moments low_order_moments(const TwoModeState& state, const MeasurementDirection& dir) {
  const auto dist = joint_photon_distribution(state, dir);
  return {factorial_moment(dist, 1, 0), factorial_moment(dist, 0, 1),
          factorial_moment(dist, 2, 0), factorial_moment(dist, 1, 1),
          factorial_moment(dist, 0, 2)};
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  return v == Verdict::kNonclassical ? "nonclassical" : "inconclusive";
}

CriterionReport make_report(double value, double tolerance) {
  CriterionReport r;
  r.value = value;
  r.tolerance = tolerance;
  r.verdict = value < -tolerance ? Verdict::kNonclassical : Verdict::kInconclusive;
  return r;
}

Eigen::MatrixXcd mgf_matrix(const JointPhotonDistribution& dist,
                            const std::vector<MatrixPoint>& points, Warnings* warnings) {
  if (points.empty()) {
    throw ValidationError("matrix criterion needs at least one point");
  }
  for (const auto& p : points) {
    if (!(p.tau >= 0.0)) {
      throw ValidationError("matrix criterion points need tau >= 0");
    }
  }
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      m(p, q) = mgf(dist, std::conj(points[p].t) + points[q].t, points[p].tau + points[q].tau,
                    warnings);
    }
  }
  return m;
}

Eigen::MatrixXcd mgf_matrix(const TwoModeState& state, const MgfMatrixSpec& spec,
                            Warnings* warnings) {
  return mgf_matrix(joint_photon_distribution(state, spec.direction), spec.points, warnings);
}

CriterionReport matrix_verdict(const Eigen::MatrixXcd& m, double tolerance,
                               const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError("matrix criterion needs a non-empty square matrix");
  }
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.matrix_hermiticity) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max |M - M^dagger| = " << asym;
    throw ValidationError(msg.str());
  }
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigen decomposition of the MGF matrix failed");
  }
  CriterionReport r = make_report(solver.eigenvalues()[0], tolerance);
  r.witness = solver.eigenvectors().col(0);
  return r;
}

std::vector<double> sylvester_minors(const Eigen::MatrixXcd& m) {
  std::vector<double> out;
  for (Eigen::Index k = 1; k <= m.rows(); ++k) {
    out.push_back(m.topLeftCorner(k, k).determinant().real());
  }
  return out;
}

double second_order_det(const TwoModeState& state, const MeasurementDirection& dir, cplx t,
                        double tau, cplx t2, double tau2) {
  const auto s = second_order_entries(state, dir, t, tau, t2, tau2);
  return s.m11 * s.m22 - std::norm(s.m12);
}

CriterionReport char_fn_criterion(const TwoModeState& state, const Vec3& k, double tolerance) {
  return make_report(1.0 - std::abs(char_fn(state, k)), tolerance);
}

VarianceCriteria variance_criteria(const TwoModeState& state, const MeasurementDirection& dir) {
  const auto f = low_order_moments(state, dir);
  const double mean_n = f.f10 + f.f01;
  const double mean_s = f.f10 - f.f01;
  VarianceCriteria v;
  v.var_N = f.f20 + 2.0 * f.f11 + f.f02 - mean_n * mean_n;
  v.var_S = f.f20 - 2.0 * f.f11 + f.f02 - mean_s * mean_s;
  return v;
}

CrossCorrelation cross_correlation_det(const TwoModeState& state,
                                       const MeasurementDirection& dir) {
  const auto f = low_order_moments(state, dir);
  const double mean_n = f.f10 + f.f01;
  const double mean_s = f.f10 - f.f01;
  const double var_n = f.f20 + 2.0 * f.f11 + f.f02 - mean_n * mean_n;
  const double var_s = f.f20 - 2.0 * f.f11 + f.f02 - mean_s * mean_s;
  const double cov_ns = f.f20 - f.f02 - mean_n * mean_s;
  const double var_a = f.f20 - f.f10 * f.f10;
  const double var_b = f.f02 - f.f01 * f.f01;
  const double cov_ab = f.f11 - f.f10 * f.f01;
  return {var_n * var_s - cov_ns * cov_ns, var_a * var_b - cov_ab * cov_ab};
}

double cauchy_schwarz_violation(const TwoModeState& state, const MeasurementDirection& dir,
                                cplx t, double tau, cplx t2, double tau2) {
  if (t2 == cplx(0.0, 0.0) && tau2 == 0.0) {
    throw ValidationError("Cauchy-Schwarz form needs (t', tau') != (0, 0)");
  }
  const auto s = second_order_entries(state, dir, t, tau, t2, tau2);
  return std::norm(s.m12) - s.m11 * s.m22;
}

}  // namespace esscorr
