#include "esscorr/mgf.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "esscorr/csv.hpp"

namespace esscorr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

cplx coherent_mgf(cplx alpha, cplx beta, const Vec3& e, cplx t, double tau) {
  const Vec3 S = stokes_of(alpha, beta);
  return std::exp(t * e.dot(S) - tau * S.norm());
}

cplx tmsv_mgf(double xi, const Vec3& e, cplx t, double tau) {
  if (t.imag() != 0.0) {
    throw DomainError("two-mode squeezed vacuum closed form needs a real t");
  }
  const double la = tau - t.real();
  const double lb = tau + t.real();
  if (la < 0.0 || la > 1.0 || lb < 0.0 || lb > 1.0) {
    std::ostringstream msg;
    msg << "two-mode squeezed vacuum closed form needs 0 <= lambda <= 1, got lambda_a = " << la
        << ", lambda_b = " << lb;
    throw DomainError(msg.str());
  }
  const double c2 = std::pow(std::cosh(xi), 2);
  const double s2 = std::pow(std::sinh(xi), 2);
  const double ez = e.z();
  const double base = c2 - (1.0 - la) * (1.0 - lb) * s2;
  const double cross = (1.0 - ez * ez) * s2 * c2 * (la - lb) * (la - lb);
  return 1.0 / std::sqrt(base * base - cross);
}

}  // namespace

cplx mgf(const JointPhotonDistribution& dist, cplx t, double tau, Warnings* warnings) {
  if (!(tau >= 0.0)) {
    throw ValidationError("converging factor tau must be non-negative");
  }
  return power_expectation(dist, 1.0 + t - tau, 1.0 - t - tau, warnings);
}

cplx mgf(const TwoModeState& state, const MgfQuery& q, Warnings* warnings) {
  return mgf(joint_photon_distribution(state, q.direction), q.t, q.tau, warnings);
}

cplx mgf_closed_form(const StateSpec& spec, const MeasurementDirection& dir, cplx t,
                     double tau) {
  if (!(tau >= 0.0)) {
    throw ValidationError("converging factor tau must be non-negative");
  }
  const Vec3& e = dir.e();
  return std::visit(
      overloaded{
          [](const Vacuum&) { return cplx(1.0, 0.0); },
          [&](const Coherent& c) { return coherent_mgf(c.alpha, c.beta, e, t, tau); },
          [&](const HomInput&) {
            return (1.0 - tau) * (1.0 - tau) + (1.0 - 2.0 * e.z() * e.z()) * t * t;
          },
          [&](const Tmsv& s) { return tmsv_mgf(s.xi, e, t, tau); },
          [&](const Mixture& m) {
            double wsum = 0.0;
            cplx total = 0.0;
            for (const auto& c : m.components) {
              if (c.weight < 0.0) {
                throw ValidationError("mixture weights must be non-negative");
              }
              wsum += c.weight;
              total += c.weight * coherent_mgf(c.alpha, c.beta, e, t, tau);
            }
            if (std::abs(wsum - 1.0) > kDefaultTolerances.mixture_weight_sum) {
              throw ValidationError("mixture weights must sum to one");
            }
            return total;
          },
      },
      spec);
}

cplx char_fn(const TwoModeState& state, const Vec3& k) {
  const double norm = k.norm();
  if (norm == 0.0) {
    return 1.0;
  }
  return mgf(state, MgfQuery{MeasurementDirection::from_vector(k), cplx(0.0, norm), 0.0});
}

std::vector<SurfaceSample> surface_map(const TwoModeState& state, cplx t, double tau,
                                       const std::vector<Vec3>& sphere_grid) {
  std::vector<SurfaceSample> out;
  out.reserve(sphere_grid.size());
  for (const auto& e : sphere_grid) {
    if (std::abs(e.norm() - 1.0) > kDefaultTolerances.direction_input_norm) {
      throw ValidationError("surface map directions must be unit vectors");
    }
    const auto dir = MeasurementDirection::from_vector(e);
    const cplx value = mgf(state, MgfQuery{dir, t, tau});
    out.push_back({dir.e(), value, value.real() * dir.e()});
  }
  return out;
}

std::vector<Vec3> sphere_grid(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 1) {
    throw ValidationError("sphere grid needs n_theta >= 2 and n_phi >= 1");
  }
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double th = std::numbers::pi * i / (n_theta - 1);
    for (int j = 0; j < n_phi; ++j) {
      const double ph = 2.0 * std::numbers::pi * j / n_phi;
      out.emplace_back(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
    }
  }
  return out;
}

std::optional<double> find_node(const TwoModeState& state, const MeasurementDirection& dir,
                                double tau, double t_lo, double t_hi, Warnings* warnings,
                                const Tolerances& tol) {
  if (!std::isfinite(t_lo) || !std::isfinite(t_hi) || !(t_hi > t_lo)) {
    throw ValidationError("node search needs a finite interval with t_lo < t_hi");
  }
  const auto dist = joint_photon_distribution(state, dir);
  auto f = [&](double t) { return mgf(dist, t, tau).real(); };

  const int n = std::max(tol.root_prescan_points, 2);
  double a = t_lo;
  double fa = f(a);
  std::optional<double> root;
  if (fa == 0.0) {
    root = a;
  }
  for (int i = 1; i < n && !root; ++i) {
    const double b = t_lo + (t_hi - t_lo) * i / (n - 1);
    const double fb = f(b);
    if (fb == 0.0) {
      root = b;
    } else if ((fa < 0.0) != (fb < 0.0)) {
      double lo = a;
      double hi = b;
      double flo = fa;
      while (hi - lo > tol.root_resolution) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      root = 0.5 * (lo + hi);
    }
    a = b;
    fa = fb;
  }
  if (root && state.leakage() > 0.0) {
    emit(warnings, "truncated_support",
         "node found on a truncated state; the untruncated state may not share it");
  }
  return root;
}

void write_mgf_csv(std::ostream& out, const std::vector<MgfRecord>& rows) {
  CsvWriter csv(out, {"e_x", "e_y", "e_z", "t_re", "t_im", "tau", "M_re", "M_im"});
  for (const auto& r : rows) {
    csv << r.e.x() << r.e.y() << r.e.z() << r.t.real() << r.t.imag() << r.tau << r.value.real()
        << r.value.imag();
    csv.end_row();
  }
}

}  // namespace esscorr
