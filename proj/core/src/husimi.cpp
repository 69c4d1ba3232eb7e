#include <cmath>
#include <numbers>
#include <sstream>

#include "esscorr/mgf.hpp"
#include "gauss_laguerre.hpp"

namespace esscorr {

namespace {

constexpr double kInvPi2 = 1.0 / (std::numbers::pi * std::numbers::pi);

// conj(z)^n / sqrt(n!) for n = 0..cutoff.
void bra_powers(cplx z, int cutoff, std::vector<cplx>& out) {
  out.resize(cutoff + 1);
  out[0] = 1.0;
  const cplx zc = std::conj(z);
  for (int n = 1; n <= cutoff; ++n) {
    out[n] = out[n - 1] * zc / std::sqrt(static_cast<double>(n));
  }
}

// |<alpha, beta|psi_k>|^2 summed over ensemble components, without the
// Gaussian prefactor e^{-|alpha|^2 - |beta|^2}.
double overlap_sq(const TwoModeState& state, cplx alpha, cplx beta, std::vector<cplx>& pa,
                  std::vector<cplx>& pb) {
  const int c = state.cutoff();
  bra_powers(alpha, c, pa);
  bra_powers(beta, c, pb);
  double total = 0.0;
  for (const auto& v : state.components()) {
    cplx overlap = 0.0;
    for (int na = 0; na <= c; ++na) {
      cplx row = 0.0;
      for (int nb = 0; nb <= c; ++nb) {
        row += pb[nb] * v[state.index(na, nb)];
      }
      overlap += pa[na] * row;
    }
    total += std::norm(overlap);
  }
  return total;
}

// In u = |a_e|^2 the Husimi Gaussian and the kernel combine to e^{-u / (1 - lambda)}, which
// a Gauss-Laguerre rule absorbs as its weight; the phases use the trapezoid rule.
double integrate(const TwoModeState& state, const MeasurementDirection& dir, double la,
                 double lb, int radial, int angular) {
  const double sa = 1.0 / (1.0 - la);
  const double sb = 1.0 / (1.0 - lb);
  const auto rule = detail::gauss_laguerre(radial);
  std::vector<double> ra(radial);
  std::vector<double> rb(radial);
  for (int i = 0; i < radial; ++i) {
    ra[i] = std::sqrt(rule.nodes[i] / sa);
    rb[i] = std::sqrt(rule.nodes[i] / sb);
  }
  std::vector<cplx> phase(angular);
  for (int j = 0; j < angular; ++j) {
    phase[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / angular);
  }
  const cplx T = dir.T();
  const cplx R = dir.R();

  std::vector<cplx> wa;
  std::vector<cplx> wb;
  double total = 0.0;
  for (int i1 = 0; i1 < radial; ++i1) {
    for (const cplx& p1 : phase) {
      const cplx ae = ra[i1] * p1;
      for (int i2 = 0; i2 < radial; ++i2) {
        double ring = 0.0;
        for (const cplx& p2 : phase) {
          const cplx be = rb[i2] * p2;
          const cplx alpha = std::conj(T) * ae - R * be;
          const cplx beta = std::conj(R) * ae + T * be;
          ring += overlap_sq(state, alpha, beta, wa, wb);
        }
        total += rule.weights[i1] * rule.weights[i2] * ring;
      }
    }
  }
  // d^2 a = (1/2) du dtheta per plane; the 1/s from du cancels the kernel normalization.
  const double angle_weight = std::numbers::pi / angular;
  return kInvPi2 * angle_weight * angle_weight * total;
}

}  // namespace

double husimi_q(const TwoModeState& state, cplx alpha, cplx beta) {
  std::vector<cplx> pa;
  std::vector<cplx> pb;
  return kInvPi2 * std::exp(-std::norm(alpha) - std::norm(beta)) *
         overlap_sq(state, alpha, beta, pa, pb);
}

double mgf_via_husimi_quadrature(const TwoModeState& state, const MeasurementDirection& dir,
                                 double t, double tau, const QuadratureConfig& quad) {
  const double la = tau - t;
  const double lb = tau + t;
  if (!(la < 1.0) || !(lb < 1.0)) {
    std::ostringstream msg;
    msg << "Husimi representation needs lambda_a, lambda_b < 1, got " << la << ", " << lb;
    throw DomainError(msg.str());
  }
  if (quad.radial_nodes < 0 || quad.angular_nodes < 0 || !(quad.rtol > 0.0) ||
      quad.max_refinements < 0) {
    throw ValidationError("invalid quadrature configuration");
  }
  // The integrand carries phases e^{i k theta} with |k| <= 2 cutoff per plane.
  const int angular = quad.angular_nodes > 0 ? quad.angular_nodes : 2 * state.cutoff() + 2;
  // Radial integrands are polynomials of degree <= 2 cutoff in u.
  int radial = quad.radial_nodes > 0 ? quad.radial_nodes : state.cutoff() + 2;
  double previous = integrate(state, dir, la, lb, radial, angular);
  for (int level = 0; level < quad.max_refinements; ++level) {
    radial *= 2;
    const double refined = integrate(state, dir, la, lb, radial, angular);
    if (std::abs(refined - previous) <= quad.rtol * std::abs(refined) + 1e-14) {
      return refined;
    }
    previous = refined;
  }
  std::ostringstream msg;
  msg << "Husimi quadrature not converged after " << quad.max_refinements
      << " refinements (last estimate " << previous << ")";
  throw QuadratureError(msg.str());
}

}  // namespace esscorr
