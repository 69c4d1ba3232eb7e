#include "esscorr/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace esscorr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// P(n > cutoff) for a Poisson variable of mean lambda.
double poisson_tail(double lambda, int cutoff) {
  if (lambda <= 0.0) {
    return 0.0;
  }
  const int first = cutoff + 1;
  double log_term = -lambda + first * std::log(lambda) - std::lgamma(first + 1.0);
  double term = std::exp(log_term);
  double sum = 0.0;
  for (int n = first; n < first + 100000; ++n) {
    sum += term;
    term *= lambda / (n + 1);
    if (n > lambda && term <= 1e-18 * sum) {
      break;
    }
  }
  return std::min(sum, 1.0);
}

double coherent_leakage(cplx alpha, cplx beta, int cutoff) {
  const double ta = poisson_tail(std::norm(alpha), cutoff);
  const double tb = poisson_tail(std::norm(beta), cutoff);
  return ta + tb - ta * tb;
}

// e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..cutoff.
Eigen::VectorXcd coherent_amplitudes(cplx a, int cutoff) {
  Eigen::VectorXcd c(cutoff + 1);
  c[0] = std::exp(-0.5 * std::norm(a));
  for (int n = 1; n <= cutoff; ++n) {
    c[n] = c[n - 1] * a / std::sqrt(static_cast<double>(n));
  }
  return c;
}

Eigen::VectorXcd coherent_vector(cplx alpha, cplx beta, int cutoff) {
  const Eigen::VectorXcd ca = coherent_amplitudes(alpha, cutoff);
  const Eigen::VectorXcd cb = coherent_amplitudes(beta, cutoff);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(cutoff + 1) * (cutoff + 1));
  for (int na = 0; na <= cutoff; ++na) {
    for (int nb = 0; nb <= cutoff; ++nb) {
      v[na * (cutoff + 1) + nb] = ca[na] * cb[nb];
    }
  }
  return v;
}

void check_trace_window(double trace, double leakage, const Tolerances& tol) {
  if (trace < 1.0 - leakage - tol.trace || trace > 1.0 + tol.trace) {
    std::ostringstream msg;
    msg << "trace(rho) = " << trace << " outside [1 - leakage, 1] with leakage " << leakage;
    throw ValidationError(msg.str());
  }
}

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) {
    r *= static_cast<double>(n - i);
  }
  return r;
}

}  // namespace

std::string_view kind_name(const StateSpec& spec) {
  return std::visit(overloaded{[](const Vacuum&) { return std::string_view("vacuum"); },
                               [](const Coherent&) { return std::string_view("coherent"); },
                               [](const HomInput&) { return std::string_view("hom_input"); },
                               [](const Tmsv&) { return std::string_view("tmsv"); },
                               [](const Mixture&) { return std::string_view("mixture"); }},
                    spec);
}

int suggest_cutoff(const StateSpec& spec, double bound, CutoffPolicy policy, double z_max) {
  if (!(z_max >= 1.0) || !std::isfinite(z_max)) {
    throw ValidationError("z_max must be finite and >= 1");
  }
  const bool any_dir = policy == CutoffPolicy::kAnyDirection;
  auto coherent_cut = [bound, any_dir, z_max](cplx a, cplx b) {
    if (any_dir) {
      // An output mode carries at most |alpha|^2 + |beta|^2 photons on average.
      const cplx total(std::sqrt(std::norm(a) + std::norm(b)), 0.0);
      a = total;
      b = total;
    }
    // sum over lost n of Poisson(n) z^n = e^{(z-1) mu} x lost mass at means z |.|^2
    const double gain = std::exp((z_max - 1.0) * (std::norm(a) + std::norm(b)));
    const double root = std::sqrt(z_max);
    int c = 0;
    while (gain * coherent_leakage(root * a, root * b, c) >= bound) {
      ++c;
    }
    return c;
  };
  return std::visit(
      overloaded{[](const Vacuum&) { return 0; },
                 [&](const Coherent& s) { return coherent_cut(s.alpha, s.beta); },
                 [&](const HomInput&) { return any_dir ? 2 : 1; },
                 [&](const Tmsv& s) {
                   const double x = std::pow(std::tanh(s.xi), 2);
                   if (x <= 0.0) {
                     return 0;
                   }
                   const double xz = x * z_max * z_max;
                   if (xz >= 1.0) {
                     throw DomainError("tmsv moments diverge for |z| >= 1 / tanh(xi)");
                   }
                   // Pair number n > c is lost; with any direction, 2n > c is.
                   auto lost = [&](int c) {
                     return (1.0 - x) * std::pow(xz, (any_dir ? c / 2 : c) + 1) / (1.0 - xz);
                   };
                   int c = 0;
                   while (lost(c) >= bound) {
                     ++c;
                   }
                   return c;
                 },
                 [&](const Mixture& s) {
                   int c = 0;
                   for (const auto& comp : s.components) {
                     c = std::max(c, coherent_cut(comp.alpha, comp.beta));
                   }
                   return c;
                 }},
      spec);
}

// --- MeasurementDirection ----------------------------------------------------

Vec3 direction_from_beam_splitter(cplx T, cplx R) {
  const cplx trc = T * std::conj(R);
  return Vec3(2.0 * trc.real(), 2.0 * trc.imag(), std::norm(T) - std::norm(R));
}

MeasurementDirection MeasurementDirection::from_vector(const Vec3& e) {
  const double norm = e.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("measurement direction must be a nonzero finite vector");
  }
  const Vec3 u = e / norm;
  const double ez = std::clamp(u.z(), -1.0, 1.0);
  // sqrt form keeps T = 0 exactly at the south pole.
  const double t_abs = std::sqrt(0.5 * (1.0 + ez));
  const double r_abs = std::sqrt(0.5 * (1.0 - ez));
  const double phi = (u.x() == 0.0 && u.y() == 0.0) ? 0.0 : std::atan2(u.y(), u.x());
  const cplx T(t_abs, 0.0);
  const cplx R = std::polar(r_abs, -phi);
  Vec3 stored = u;
  if (u.x() == 0.0 && u.y() == 0.0) {
    stored = Vec3(0.0, 0.0, ez >= 0.0 ? 1.0 : -1.0);
  }
  return MeasurementDirection(stored, T, R);
}

MeasurementDirection MeasurementDirection::from_beam_splitter(cplx T, cplx R,
                                                              const Tolerances& tol) {
  const double norm2 = std::norm(T) + std::norm(R);
  if (std::abs(norm2 - 1.0) > tol.unitarity) {
    std::ostringstream msg;
    msg << "beam splitter not unitary: |T|^2 + |R|^2 = " << norm2;
    throw ValidationError(msg.str());
  }
  return MeasurementDirection(direction_from_beam_splitter(T, R), T, R);
}

MeasurementDirection direction_to_beamsplitter(const Vec3& e) {
  return MeasurementDirection::from_vector(e);
}

// --- TwoModeState --------------------------------------------------------------

TwoModeState TwoModeState::from_components(int cutoff, std::vector<Eigen::VectorXcd> components,
                                           double leakage, Warnings warnings) {
  if (cutoff < 0) {
    throw ValidationError("cutoff must be non-negative");
  }
  if (!(leakage >= 0.0)) {
    throw ValidationError("leakage must be non-negative");
  }
  TwoModeState s;
  s.cutoff_ = cutoff;
  s.leakage_ = leakage;
  s.warnings_ = std::move(warnings);
  const Eigen::Index d = s.dim();
  for (auto& v : components) {
    if (v.size() != d) {
      throw ValidationError("state component has wrong dimension");
    }
    if (v.squaredNorm() > 0.0) {
      s.components_.push_back(std::move(v));
    }
  }
  check_trace_window(s.trace(), leakage, kDefaultTolerances);
  return s;
}

TwoModeState TwoModeState::from_density(int cutoff, const Eigen::MatrixXcd& rho, double leakage,
                                        const Tolerances& tol) {
  if (cutoff < 0) {
    throw ValidationError("cutoff must be non-negative");
  }
  const Eigen::Index d = static_cast<Eigen::Index>(cutoff + 1) * (cutoff + 1);
  if (rho.rows() != d || rho.cols() != d) {
    throw ValidationError("density matrix dimension does not match cutoff");
  }
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity) {
    throw ValidationError("density matrix is not Hermitian");
  }
  const Eigen::MatrixXcd sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw NumericError("eigendecomposition of density matrix failed");
  }
  const Eigen::VectorXd& w = eig.eigenvalues();
  if (w.minCoeff() < tol.eigenvalue_floor) {
    throw ValidationError("density matrix has negative eigenvalues");
  }
  const double drop = 1e-15 * std::max(1.0, w.maxCoeff());
  std::vector<Eigen::VectorXcd> comps;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (w[k] > drop) {
      comps.emplace_back(std::sqrt(w[k]) * eig.eigenvectors().col(k));
    }
  }
  TwoModeState s = from_components(cutoff, std::move(comps), leakage);
  check_trace_window(rho.trace().real(), leakage, tol);
  return s;
}

double TwoModeState::trace() const {
  double t = 0.0;
  for (const auto& v : components_) {
    t += v.squaredNorm();
  }
  return t;
}

Eigen::MatrixXcd TwoModeState::density_matrix() const {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim(), dim());
  for (const auto& v : components_) {
    rho.noalias() += v * v.adjoint();
  }
  return rho;
}

cplx TwoModeState::element(int na, int nb, int ma, int mb) const {
  const int i = index(na, nb);
  const int j = index(ma, mb);
  cplx r = 0.0;
  for (const auto& v : components_) {
    r += v[i] * std::conj(v[j]);
  }
  return r;
}

// --- make_state ----------------------------------------------------------------

TwoModeState make_state(const StateSpec& spec, int cutoff, const Tolerances& tol) {
  if (cutoff < 0) {
    throw ValidationError("cutoff must be non-negative");
  }
  const int d = (cutoff + 1) * (cutoff + 1);
  Warnings warnings;
  auto check_leak = [&](double leakage) {
    if (leakage >= tol.leakage_bound) {
      std::ostringstream msg;
      msg << kind_name(spec) << " state truncated at cutoff " << cutoff << " loses probability "
          << leakage << " (bound " << tol.leakage_bound << ")";
      warnings.push_back({"truncation", msg.str()});
    }
  };

  return std::visit(
      overloaded{
          [&](const Vacuum&) {
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
            v[0] = 1.0;
            return TwoModeState::from_components(cutoff, {v}, 0.0);
          },
          [&](const Coherent& s) {
            const double leak = coherent_leakage(s.alpha, s.beta, cutoff);
            check_leak(leak);
            return TwoModeState::from_components(
                cutoff, {coherent_vector(s.alpha, s.beta, cutoff)}, leak, warnings);
          },
          [&](const HomInput&) {
            if (cutoff < 1) {
              throw ValidationError("hom_input needs cutoff >= 1");
            }
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
            v[(cutoff + 1) + 1] = 1.0;
            return TwoModeState::from_components(cutoff, {v}, 0.0);
          },
          [&](const Tmsv& s) {
            if (!(s.xi >= 0.0) || !std::isfinite(s.xi)) {
              throw ValidationError("tmsv squeezing xi must be finite and >= 0");
            }
            const double th = std::tanh(s.xi);
            const double ch = std::cosh(s.xi);
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
            double amp = 1.0 / ch;
            for (int n = 0; n <= cutoff; ++n) {
              v[n * (cutoff + 1) + n] = amp;
              amp *= -th;
            }
            const double leak = std::pow(th * th, cutoff + 1);
            check_leak(leak);
            return TwoModeState::from_components(cutoff, {v}, leak, warnings);
          },
          [&](const Mixture& s) {
            if (s.components.empty()) {
              throw ValidationError("mixture needs at least one component");
            }
            double wsum = 0.0;
            for (const auto& c : s.components) {
              if (!(c.weight >= 0.0)) {
                throw ValidationError("mixture weights must be non-negative");
              }
              wsum += c.weight;
            }
            if (std::abs(wsum - 1.0) > tol.mixture_weight_sum) {
              std::ostringstream msg;
              msg << "mixture weights sum to " << wsum << ", expected 1";
              throw ValidationError(msg.str());
            }
            std::vector<Eigen::VectorXcd> comps;
            double leak = 0.0;
            for (const auto& c : s.components) {
              if (c.weight == 0.0) {
                continue;
              }
              comps.push_back(std::sqrt(c.weight) * coherent_vector(c.alpha, c.beta, cutoff));
              leak += c.weight * coherent_leakage(c.alpha, c.beta, cutoff);
            }
            check_leak(leak);
            return TwoModeState::from_components(cutoff, std::move(comps), leak, warnings);
          }},
      spec);
}

// --- photon statistics -----------------------------------------------------------

cplx power_expectation(const JointPhotonDistribution& dist, cplx z_a, cplx z_b,
                       Warnings* warnings, const Tolerances& tol) {
  if ((std::abs(z_a) > 1.0 || std::abs(z_b) > 1.0) && dist.leakage > tol.convergence_leakage) {
    std::ostringstream msg;
    msg << "|z| > 1 with truncated mass " << dist.leakage
        << ": geometric series may diverge for the untruncated state";
    emit(warnings, "convergence", msg.str());
  }
  const int c = dist.cutoff();
  std::vector<cplx> pb(c + 1);
  pb[0] = 1.0;
  for (int n = 1; n <= c; ++n) {
    pb[n] = pb[n - 1] * z_b;
  }
  cplx total = 0.0;
  cplx pa = 1.0;
  for (int na = 0; na <= c; ++na) {
    cplx row = 0.0;
    for (int nb = 0; nb <= c; ++nb) {
      row += dist.p(na, nb) * pb[nb];
    }
    total += pa * row;
    pa *= z_a;
  }
  return total;
}

cplx power_expectation(const TwoModeState& state, const MeasurementDirection& dir, cplx z_a,
                       cplx z_b, Warnings* warnings, const Tolerances& tol) {
  return power_expectation(joint_photon_distribution(state, dir), z_a, z_b, warnings, tol);
}

double factorial_moment(const JointPhotonDistribution& dist, int p, int q) {
  if (p < 0 || q < 0) {
    throw ValidationError("factorial moment orders must be non-negative");
  }
  const int c = dist.cutoff();
  double total = 0.0;
  for (int na = p; na <= c; ++na) {
    const double fa = falling(na, p);
    for (int nb = q; nb <= c; ++nb) {
      total += dist.p(na, nb) * fa * falling(nb, q);
    }
  }
  return total;
}

double factorial_moment(const TwoModeState& state, const MeasurementDirection& dir, int p,
                        int q) {
  return factorial_moment(joint_photon_distribution(state, dir), p, q);
}

StokesVector stokes_mean(const TwoModeState& state, const Tolerances& tol) {
  const int c = state.cutoff();
  cplx adag_b = 0.0;  // <a^dagger b>
  cplx bdag_a = 0.0;  // <b^dagger a>
  double na_mean = 0.0;
  double nb_mean = 0.0;
  for (const auto& v : state.components()) {
    for (int na = 0; na <= c; ++na) {
      for (int nb = 0; nb <= c; ++nb) {
        const cplx amp = v[state.index(na, nb)];
        const double pr = std::norm(amp);
        na_mean += na * pr;
        nb_mean += nb * pr;
        if (nb >= 1 && na + 1 <= c) {
          // a^dagger b |na, nb> = sqrt((na+1) nb) |na+1, nb-1>
          adag_b += std::conj(v[state.index(na + 1, nb - 1)]) *
                    std::sqrt(static_cast<double>((na + 1) * nb)) * amp;
        }
        if (na >= 1 && nb + 1 <= c) {
          bdag_a += std::conj(v[state.index(na - 1, nb + 1)]) *
                    std::sqrt(static_cast<double>(na * (nb + 1))) * amp;
        }
      }
    }
  }
  const cplx sx = adag_b + bdag_a;
  const cplx sy = cplx(0.0, -1.0) * adag_b + cplx(0.0, 1.0) * bdag_a;
  const double scale = 1.0 + na_mean + nb_mean;
  if (std::abs(sx.imag()) > tol.hermiticity * scale ||
      std::abs(sy.imag()) > tol.hermiticity * scale) {
    throw NumericError("Stokes expectation values have an imaginary residue");
  }
  StokesVector out;
  out.S = Vec3(sx.real(), sy.real(), na_mean - nb_mean);
  out.S0 = na_mean + nb_mean;
  return out;
}

Vec3 stokes_of(cplx alpha, cplx beta) {
  const cplx ab = std::conj(alpha) * beta;
  return Vec3(2.0 * ab.real(), 2.0 * ab.imag(), std::norm(alpha) - std::norm(beta));
}

}  // namespace esscorr
