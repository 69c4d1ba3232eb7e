#include <cmath>
#include <sstream>

#include "esscorr/fock.hpp"

namespace esscorr {

namespace {

// Total photon number up to which blocks are generated by the recursion;
// beyond it rounding errors of the recursion grow past 1e-11.
constexpr int kRecursionLimit = 128;

// Block N as exp(i dGamma(H)) with W = exp(iH) the single-photon map
//   W = [[T, R], [-R*, T*]]  (columns: a^dagger, b^dagger in the output basis).
// dGamma(H) is Hermitian tridiagonal in |m, N-m>; a diagonal phase change makes
// it real, and its eigen decomposition is backward stable.
Eigen::MatrixXcd spectral_block(int N, cplx T, cplx R) {
  const double s = std::hypot(R.real(), R.imag(), T.imag());
  const double half_angle = std::atan2(s, T.real());
  Eigen::Vector3d axis(0.0, 0.0, 1.0);
  if (s > 0.0) {
    axis = Eigen::Vector3d(R.imag(), R.real(), T.imag()) / s;
  }
  // H = half_angle * axis . sigma; h01 = |h01| e^{i phi}
  const double h00 = half_angle * axis.z();
  const cplx h01 = half_angle * cplx(axis.x(), -axis.y());
  const double off = std::abs(h01);
  const double phi = std::arg(h01);
  Eigen::VectorXd diag(N + 1);
  Eigen::VectorXd sub(std::max(N, 1));
  sub.setZero();
  for (int m = 0; m <= N; ++m) {
    diag[m] = h00 * (2.0 * m - N);
    if (m < N) {
      sub[m] = off * std::sqrt(static_cast<double>(m + 1) * (N - m));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub.head(N), Eigen::ComputeEigenvectors);
  const Eigen::MatrixXd& Q = eig.eigenvectors();
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const Eigen::MatrixXd qc = Q * lam.array().cos().matrix().asDiagonal();
  const Eigen::MatrixXd qs = Q * lam.array().sin().matrix().asDiagonal();
  Eigen::MatrixXcd U(N + 1, N + 1);
  U.real().noalias() = qc * Q.transpose();
  U.imag().noalias() = qs * Q.transpose();
  for (int m = 0; m <= N; ++m) {
    for (int n = 0; n <= N; ++n) {
      U(m, n) *= std::polar(1.0, (m - n) * phi);
    }
  }
  return U;
}

// Generates the interferometer matrix block by block in total photon number.
// Column n of block N follows from block N-1 by one creation operator:
//   a^dagger -> T a_e^dagger - R* b_e^dagger,   b^dagger -> R a_e^dagger + T* b_e^dagger.
class BlockRecursion {
 public:
  BlockRecursion(cplx T, cplx R) : T_(T), R_(R), block_(1, 1) { block_(0, 0) = 1.0; }

  int total() const { return total_; }
  const Eigen::MatrixXcd& block() const { return block_; }

  void advance() {
    const int N = total_ + 1;
    Eigen::MatrixXcd next(N + 1, N + 1);
    const cplx Rc = std::conj(R_);
    const cplx Tc = std::conj(T_);
    for (int n = 0; n <= N; ++n) {
      // Raise whichever input mode is more populated; dividing by the larger
      // occupation keeps rounding errors from growing with N.
      if (2 * n >= N && n >= 1) {
        // |n, N-n> = a^dagger |n-1, N-n> / sqrt(n)
        const double inv = 1.0 / std::sqrt(static_cast<double>(n));
        for (int m = 0; m <= N; ++m) {
          cplx w = 0.0;
          if (m >= 1) {
            w += T_ * std::sqrt(static_cast<double>(m)) * block_(m - 1, n - 1);
          }
          if (m <= N - 1) {
            w -= Rc * std::sqrt(static_cast<double>(N - m)) * block_(m, n - 1);
          }
          next(m, n) = w * inv;
        }
      } else {
        // |n, N-n> = b^dagger |n, N-n-1> / sqrt(N-n)
        const double inv = 1.0 / std::sqrt(static_cast<double>(N - n));
        for (int m = 0; m <= N; ++m) {
          cplx w = 0.0;
          if (m >= 1) {
            w += R_ * std::sqrt(static_cast<double>(m)) * block_(m - 1, n);
          }
          if (m <= N - 1) {
            w += Tc * std::sqrt(static_cast<double>(N - m)) * block_(m, n);
          }
          next(m, n) = w * inv;
        }
      }
    }
    block_ = std::move(next);
    total_ = N;
  }

 private:
  cplx T_;
  cplx R_;
  Eigen::MatrixXcd block_;
  int total_ = 0;
};

void check_unitary(cplx T, cplx R, const Tolerances& tol) {
  const double norm2 = std::norm(T) + std::norm(R);
  if (std::abs(norm2 - 1.0) > tol.unitarity) {
    std::ostringstream msg;
    msg << "beam splitter not unitary: |T|^2 + |R|^2 = " << norm2;
    throw ValidationError(msg.str());
  }
}

bool is_identity(cplx T, cplx R) { return T == cplx(1.0, 0.0) && R == cplx(0.0, 0.0); }

// Largest n_a + n_b carrying a nonzero amplitude.
int max_total_number(const TwoModeState& state) {
  const int c = state.cutoff();
  int top = 0;
  for (const auto& v : state.components()) {
    for (int na = 0; na <= c; ++na) {
      for (int nb = 0; nb <= c; ++nb) {
        if (na + nb > top && v[state.index(na, nb)] != cplx(0.0, 0.0)) {
          top = na + nb;
        }
      }
    }
  }
  return top;
}

// Applies the interferometer to every component, block by block, and hands
// each output block |m, N-m>, m = 0..N, to `sink(component, N, out)`.
template <class Sink>
void transform_components(const TwoModeState& state, int max_total, cplx T, cplx R,
                          Sink&& sink) {
  const int c = state.cutoff();
  const auto& comps = state.components();
  BlockRecursion rec(T, R);
  Eigen::VectorXcd in;
  Eigen::VectorXcd out;
  Eigen::MatrixXcd spectral;
  for (int N = 0; N <= max_total; ++N) {
    const int lo = std::max(0, N - c);
    const int hi = std::min(N, c);
    const int len = hi - lo + 1;
    bool occupied = false;
    for (std::size_t k = 0; k < comps.size() && !occupied; ++k) {
      for (int i = 0; i < len && !occupied; ++i) {
        occupied = comps[k][state.index(lo + i, N - lo - i)] != cplx(0.0, 0.0);
      }
    }
    if (N <= kRecursionLimit) {
      while (rec.total() < N) {
        rec.advance();
      }
    } else if (occupied) {
      spectral = spectral_block(N, T, R);
    }
    if (!occupied) {
      continue;
    }
    const Eigen::MatrixXcd& block = N <= kRecursionLimit ? rec.block() : spectral;
    const auto sub = block.middleCols(lo, len);
    in.resize(len);
    for (std::size_t k = 0; k < comps.size(); ++k) {
      bool any = false;
      for (int i = 0; i < len; ++i) {
        in[i] = comps[k][state.index(lo + i, N - lo - i)];
        any = any || in[i] != cplx(0.0, 0.0);
      }
      if (!any) {
        continue;
      }
      out.noalias() = sub * in;
      sink(k, N, out);
    }
  }
}

}  // namespace

Eigen::MatrixXcd beam_splitter_block(int total_photons, cplx T, cplx R) {
  if (total_photons < 0) {
    throw ValidationError("total photon number must be non-negative");
  }
  check_unitary(T, R, kDefaultTolerances);
  if (total_photons > kRecursionLimit) {
    return spectral_block(total_photons, T, R);
  }
  BlockRecursion rec(T, R);
  while (rec.total() < total_photons) {
    rec.advance();
  }
  return rec.block();
}

int output_cutoff(const TwoModeState& state) {
  return std::max(state.cutoff(), max_total_number(state));
}

TwoModeState beam_splitter(const TwoModeState& state, cplx T, cplx R, const Tolerances& tol) {
  check_unitary(T, R, tol);
  const int max_total = max_total_number(state);
  const int oc = std::max(state.cutoff(), max_total);
  const int od = (oc + 1) * (oc + 1);
  std::vector<Eigen::VectorXcd> out(state.components().size(), Eigen::VectorXcd::Zero(od));
  if (is_identity(T, R)) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      for (int na = 0; na <= state.cutoff(); ++na) {
        for (int nb = 0; nb <= state.cutoff(); ++nb) {
          out[k][na * (oc + 1) + nb] = state.components()[k][state.index(na, nb)];
        }
      }
    }
  } else {
    transform_components(state, max_total, T, R,
                         [&](std::size_t k, int N, const Eigen::VectorXcd& block) {
                           for (int na = 0; na <= N; ++na) {
                             out[k][na * (oc + 1) + (N - na)] = block[na];
                           }
                         });
  }
  return TwoModeState::from_components(oc, std::move(out), state.leakage(), state.warnings());
}

JointPhotonDistribution joint_photon_distribution(const TwoModeState& state,
                                                  const MeasurementDirection& dir) {
  const int c = state.cutoff();
  const int max_total = max_total_number(state);
  const int oc = std::max(c, max_total);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(oc + 1, oc + 1);
  if (is_identity(dir.T(), dir.R())) {
    for (const auto& v : state.components()) {
      for (int na = 0; na <= c; ++na) {
        for (int nb = 0; nb <= c; ++nb) {
          p(na, nb) += std::norm(v[state.index(na, nb)]);
        }
      }
    }
  } else {
    transform_components(state, max_total, dir.T(), dir.R(),
                         [&](std::size_t, int N, const Eigen::VectorXcd& block) {
                           for (int na = 0; na <= N; ++na) {
                             p(na, N - na) += std::norm(block[na]);
                           }
                         });
  }
  return JointPhotonDistribution{std::move(p), dir, state.leakage()};
}

}  // namespace esscorr
