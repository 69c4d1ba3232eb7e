#include "esscorr/reconstruct.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "esscorr/mgf.hpp"

namespace esscorr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_regular(const CoherentEnsemble& ensemble) {
  const auto* g = std::get_if<GaussianEnsemble>(&ensemble);
  return g != nullptr && g->nbar_a > 0.0 && g->nbar_b > 0.0;
}

bool is_bounded(const CoherentEnsemble& ensemble) {
  const auto* g = std::get_if<GaussianEnsemble>(&ensemble);
  return g == nullptr || (g->nbar_a == 0.0 && g->nbar_b == 0.0);
}

// E exp(-z^dagger A z) for z ~ CN(mu, C), A = tau I - i k.sigma.
cplx gaussian_mgf(const GaussianEnsemble& g, const Vec3& k, double tau) {
  using M2 = Eigen::Matrix2cd;
  const cplx i(0.0, 1.0);
  M2 A;
  A << tau - i * k.z(), -i * cplx(k.x(), -k.y()), -i * cplx(k.x(), k.y()), tau + i * k.z();
  M2 C = M2::Zero();
  C(0, 0) = g.nbar_a;
  C(1, 1) = g.nbar_b;
  const Eigen::Vector2cd mu(g.alpha0, g.beta0);
  const M2 B = M2::Identity() + C * A;
  const cplx quad = mu.dot(A * B.inverse() * mu);
  return std::exp(-quad) / B.determinant();
}

cplx point_mgf(const std::vector<CoherentPoint>& points, const Vec3& k, double tau) {
  cplx total = 0.0;
  for (const auto& p : points) {
    const Vec3 S = stokes_of(p.alpha, p.beta);
    total += p.weight * std::exp(cplx(-tau * S.norm(), k.dot(S)));
  }
  return total;
}

// Index of -k, or size() when -k falls off the grid (a j = 0 plane).
std::size_t mirror_index(const DualGrid3& g, int jx, int jy, int jz) {
  if (jx == 0 || jy == 0 || jz == 0) {
    return g.size();
  }
  return (static_cast<std::size_t>(g.n[0] - jx) * g.n[1] + (g.n[1] - jy)) * g.n[2] +
         (g.n[2] - jz);
}

template <class F>
KSpaceData fill(const DualGrid3& k_grid, double tau, F&& value) {
  KSpaceData out;
  out.grid = k_grid;
  out.tau = tau;
  out.values.resize(k_grid.size());
  std::vector<char> done(k_grid.size(), 0);
  std::size_t idx = 0;
  for (int jx = 0; jx < k_grid.n[0]; ++jx) {
    for (int jy = 0; jy < k_grid.n[1]; ++jy) {
      for (int jz = 0; jz < k_grid.n[2]; ++jz, ++idx) {
        const std::size_t mirror = mirror_index(k_grid, jx, jy, jz);
        if (mirror < done.size() && done[mirror] != 0) {
          out.values[idx] = std::conj(out.values[mirror]);
        } else {
          out.values[idx] = value(k_grid.point(jx, jy, jz));
        }
        done[idx] = 1;
      }
    }
  }
  return out;
}

void check_tau(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw ValidationError("converging factor tau must be finite and non-negative");
  }
}

}  // namespace

// --- grids ------------------------------------------------------------------------

Grid3 Grid3::cube(double half_width, int n) {
  Grid3 g;
  for (auto& a : g.axes) {
    a = Axis{-half_width, half_width, n};
  }
  g.validate();
  return g;
}

void Grid3::validate() const {
  for (const auto& a : axes) {
    if (a.n < 8 || a.n % 2 != 0) {
      throw ValidationError("grid axes need an even number of points, at least 8");
    }
    if (!(a.max > a.min) || !std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw ValidationError("grid axes need finite bounds with max > min");
    }
  }
}

std::size_t Grid3::size() const {
  return static_cast<std::size_t>(axes[0].n) * axes[1].n * axes[2].n;
}

std::size_t Grid3::index(int ix, int iy, int iz) const {
  return (static_cast<std::size_t>(ix) * axes[1].n + iy) * axes[2].n + iz;
}

Vec3 Grid3::point(int ix, int iy, int iz) const {
  return {axes[0].point(ix), axes[1].point(iy), axes[2].point(iz)};
}

double Grid3::cell_volume() const { return axes[0].step() * axes[1].step() * axes[2].step(); }

double Grid3::radius() const {
  double r2 = 0.0;
  for (const auto& a : axes) {
    const double m = std::max(std::abs(a.min), std::abs(a.max));
    r2 += m * m;
  }
  return std::sqrt(r2);
}

DualGrid3 DualGrid3::of(const Grid3& s_grid) {
  s_grid.validate();
  DualGrid3 d;
  for (int a = 0; a < 3; ++a) {
    d.n[a] = s_grid.axes[a].n;
    d.dk[a] = kTwoPi / (s_grid.axes[a].n * s_grid.axes[a].step());
  }
  return d;
}

std::size_t DualGrid3::size() const { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }

Vec3 DualGrid3::point(int jx, int jy, int jz) const {
  return {(jx - n[0] / 2) * dk[0], (jy - n[1] / 2) * dk[1], (jz - n[2] / 2) * dk[2]};
}

// --- ensembles --------------------------------------------------------------------

void validate_ensemble(const CoherentEnsemble& ensemble, const Tolerances& tol) {
  std::visit(overloaded{
                 [&](const std::vector<CoherentPoint>& points) {
                   if (points.empty()) {
                     throw ValidationError("ensemble needs at least one point");
                   }
                   double sum = 0.0;
                   for (const auto& p : points) {
                     if (!(p.weight >= 0.0)) {
                       throw ValidationError("ensemble weights must be non-negative");
                     }
                     sum += p.weight;
                   }
                   if (std::abs(sum - 1.0) > tol.mixture_weight_sum) {
                     throw ValidationError("ensemble weights must sum to one");
                   }
                 },
                 [](const GaussianEnsemble& g) {
                   if (!(g.nbar_a >= 0.0) || !(g.nbar_b >= 0.0)) {
                     throw ValidationError("Gaussian ensemble needs nbar >= 0");
                   }
                 },
             },
             ensemble);
}

KSpaceData mgf_imaginary_grid(const CoherentEnsemble& ensemble, const DualGrid3& k_grid,
                              double tau) {
  validate_ensemble(ensemble);
  check_tau(tau);
  if (tau == 0.0 && !is_bounded(ensemble)) {
    throw ValidationError("an ensemble with unbounded |S| needs tau > 0");
  }
  KSpaceData out = std::visit(
      overloaded{
          [&](const std::vector<CoherentPoint>& points) {
            return fill(k_grid, tau, [&](const Vec3& k) { return point_mgf(points, k, tau); });
          },
          [&](const GaussianEnsemble& g) {
            return fill(k_grid, tau, [&](const Vec3& k) { return gaussian_mgf(g, k, tau); });
          },
      },
      ensemble);
  out.label = is_regular(ensemble) ? "regular" : "band_limited_smoothed";
  return out;
}

KSpaceData mgf_imaginary_grid(const TwoModeState& state, const DualGrid3& k_grid, double tau,
                              Warnings* warnings) {
  check_tau(tau);
  const auto pole = MeasurementDirection::from_vector(Vec3::UnitZ());
  KSpaceData out = fill(k_grid, tau, [&](const Vec3& k) {
    const double norm = k.norm();
    if (norm == 0.0) {
      return mgf(state, MgfQuery{pole, 0.0, tau}, warnings);
    }
    return mgf(state, MgfQuery{MeasurementDirection::from_vector(k), cplx(0.0, norm), tau},
               warnings);
  });
  out.label = "band_limited_smoothed";
  return out;
}

// --- inversion --------------------------------------------------------------------

double PessGrid::integral() const {
  double s = 0.0;
  for (double v : values) {
    s += v;
  }
  return s * grid.cell_volume();
}

double PessGrid::peak() const {
  double p = 0.0;
  for (double v : values) {
    p = std::max(p, std::abs(v));
  }
  return p;
}

double PessGrid::min_value() const {
  double m = values.empty() ? 0.0 : values.front();
  for (double v : values) {
    m = std::min(m, v);
  }
  return m;
}

PessGrid invert_to_pess(const KSpaceData& data, const Grid3& s_grid,
                        const InversionOptions& options) {
  s_grid.validate();
  const DualGrid3 expected = DualGrid3::of(s_grid);
  for (int a = 0; a < 3; ++a) {
    if (data.grid.n[a] != expected.n[a] ||
        std::abs(data.grid.dk[a] - expected.dk[a]) > 1e-12 * expected.dk[a]) {
      throw ValidationError("k-grid is not the discrete Fourier partner of the S-grid");
    }
  }
  if (data.values.size() != s_grid.size()) {
    throw ValidationError("k-space data size does not match the grid");
  }
  const int nx = s_grid.axes[0].n;
  const int ny = s_grid.axes[1].n;
  const int nz = s_grid.axes[2].n;

  // Per-axis factors: window(k_j) e^{-i k_j S_min}.
  std::array<std::vector<cplx>, 3> pre;
  for (int a = 0; a < 3; ++a) {
    const int n = s_grid.axes[a].n;
    const double k_nyq = 0.5 * n * expected.dk[a];
    pre[a].resize(n);
    for (int j = 0; j < n; ++j) {
      const double k = (j - n / 2) * expected.dk[a];
      double w = 1.0;
      if (options.window) {
        w = 0.5 * (1.0 + std::cos(std::numbers::pi * k / k_nyq));
      } else if (j == 0) {
        w = 0.0;
      }
      pre[a][j] = w * std::exp(cplx(0.0, -k * s_grid.axes[a].min));
    }
  }

  const std::size_t total = s_grid.size();
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  if (buf == nullptr) {
    throw NumericError("FFT buffer allocation failed");
  }
  fftw_plan plan = fftw_plan_dft_3d(nx, ny, nz, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  auto* z = reinterpret_cast<cplx*>(buf);
  std::size_t idx = 0;
  for (int jx = 0; jx < nx; ++jx) {
    for (int jy = 0; jy < ny; ++jy) {
      const cplx fxy = pre[0][jx] * pre[1][jy];
      for (int jz = 0; jz < nz; ++jz, ++idx) {
        z[idx] = data.values[idx] * fxy * pre[2][jz];
      }
    }
  }
  fftw_execute(plan);

  PessGrid out;
  out.grid = s_grid;
  out.tau_used = data.tau;
  out.windowed = options.window;
  out.label = data.label.empty() ? "band_limited_smoothed" : data.label;
  out.values.resize(total);
  const double scale =
      expected.dk[0] * expected.dk[1] * expected.dk[2] / (kTwoPi * kTwoPi * kTwoPi);
  double max_re = 0.0;
  double max_im = 0.0;
  idx = 0;
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int iz = 0; iz < nz; ++iz, ++idx) {
        const double sign = ((ix + iy + iz) % 2 == 0) ? 1.0 : -1.0;
        const double amp = std::exp(data.tau * s_grid.point(ix, iy, iz).norm());
        const cplx v = z[idx] * (sign * scale * amp);
        out.values[idx] = v.real();
        max_re = std::max(max_re, std::abs(v.real()));
        max_im = std::max(max_im, std::abs(v.imag()));
      }
    }
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);

  if (max_im > options.imaginary_residue * max_re) {
    std::ostringstream msg;
    msg << "inverse transform has an imaginary residue of " << max_im / max_re
        << " of the peak; the k-space data are not Hermitian";
    throw NumericError(msg.str());
  }
  const double norm = out.integral();
  if (std::abs(norm - 1.0) > options.normalization) {
    std::ostringstream msg;
    msg << "reconstruction integrates to " << norm;
    emit(&out.warnings, "normalization", msg.str());
  }
  double edge = 0.0;
  double all = 0.0;
  idx = 0;
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int iz = 0; iz < nz; ++iz, ++idx) {
        const double a = std::abs(out.values[idx]);
        all += a;
        if (ix == 0 || iy == 0 || iz == 0 || ix == nx - 1 || iy == ny - 1 || iz == nz - 1) {
          edge += a;
        }
      }
    }
  }
  if (all > 0.0 && edge > options.boundary_mass * all) {
    std::ostringstream msg;
    msg << "fraction " << edge / all << " of |P| sits on the grid boundary; expect aliasing";
    emit(&out.warnings, "aliasing", msg.str());
  }
  return out;
}

// --- Monte-Carlo oracle -----------------------------------------------------------

PessGrid pess_mc_oracle(const CoherentEnsemble& ensemble, const Grid3& s_grid, std::int64_t n,
                        std::uint64_t seed) {
  validate_ensemble(ensemble);
  s_grid.validate();
  if (n < 10000) {
    throw ValidationError("Monte-Carlo oracle needs at least 10^4 samples");
  }
  std::mt19937_64 gen(seed);
  std::vector<std::int64_t> counts(s_grid.size(), 0);
  std::int64_t inside = 0;

  auto bin = [&](const Vec3& S) {
    std::array<int, 3> m{};
    for (int a = 0; a < 3; ++a) {
      const auto& ax = s_grid.axes[a];
      const double x = std::round((S[a] - ax.min) / ax.step());
      if (!(x >= 0.0 && x < ax.n)) {
        return;
      }
      m[a] = static_cast<int>(x);
    }
    ++counts[s_grid.index(m[0], m[1], m[2])];
    ++inside;
  };

  std::visit(overloaded{
                 [&](const std::vector<CoherentPoint>& points) {
                   std::vector<double> w;
                   for (const auto& p : points) {
                     w.push_back(p.weight);
                   }
                   std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
                   for (std::int64_t s = 0; s < n; ++s) {
                     const auto& p = points[pick(gen)];
                     bin(stokes_of(p.alpha, p.beta));
                   }
                 },
                 [&](const GaussianEnsemble& g) {
                   std::normal_distribution<double> normal(0.0, 1.0);
                   const double sa = std::sqrt(0.5 * g.nbar_a);
                   const double sb = std::sqrt(0.5 * g.nbar_b);
                   for (std::int64_t s = 0; s < n; ++s) {
                     const double x1 = normal(gen);
                     const double y1 = normal(gen);
                     const double x2 = normal(gen);
                     const double y2 = normal(gen);
                     const cplx alpha = g.alpha0 + sa * cplx(x1, y1);
                     const cplx beta = g.beta0 + sb * cplx(x2, y2);
                     bin(stokes_of(alpha, beta));
                   }
                 },
             },
             ensemble);

  if (inside == 0) {
    throw NumericError("no Monte-Carlo sample fell inside the grid");
  }
  PessGrid out;
  out.grid = s_grid;
  out.label = "histogram";
  out.values.resize(s_grid.size());
  const double scale = 1.0 / (static_cast<double>(inside) * s_grid.cell_volume());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out.values[i] = counts[i] * scale;
  }
  const double outside = 1.0 - static_cast<double>(inside) / static_cast<double>(n);
  if (outside > kDefaultTolerances.boundary_mass) {
    std::ostringstream msg;
    msg << "fraction " << outside << " of the samples fell outside the grid";
    emit(&out.warnings, "outside_grid", msg.str());
  }
  return out;
}

ClassicalityReport classicality_check(const PessGrid& p, double tol) {
  if (!(tol >= 0.0)) {
    throw ValidationError("classicality tolerance must be non-negative");
  }
  const double m = p.min_value();
  return {m, m >= -tol};
}

double l1_distance(const PessGrid& p, const PessGrid& q) {
  if (p.values.size() != q.values.size() || p.grid.size() != q.grid.size()) {
    throw ValidationError("L1 distance needs grids of equal shape");
  }
  const double np = p.integral();
  const double nq = q.integral();
  if (np == 0.0 || nq == 0.0) {
    throw NumericError("cannot normalize a grid with zero integral");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    s += std::abs(p.values[i] / np - q.values[i] / nq);
  }
  return s * p.grid.cell_volume();
}

double default_tau(const Grid3& s_grid) { return 0.5 / s_grid.radius(); }

double default_tau(const Grid3& s_grid, const CoherentEnsemble& ensemble) {
  return is_bounded(ensemble) ? 0.0 : default_tau(s_grid);
}

}  // namespace esscorr
