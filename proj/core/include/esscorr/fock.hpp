#pragma once

#include <complex>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "esscorr/error.hpp"
#include "esscorr/tolerances.hpp"

namespace esscorr {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;

// ---------------------------------------------------------------------------
// State specifications
// ---------------------------------------------------------------------------

struct Vacuum {};

/// Product coherent state |alpha, beta>.
struct Coherent {
  cplx alpha;
  cplx beta;
};

/// Two single photons, one per input port: |1,1>.
struct HomInput {};

/// Two-mode squeezed vacuum with squeezing parameter xi >= 0.
struct Tmsv {
  double xi = 0.0;
};

struct MixtureComponent {
  double weight = 0.0;
  cplx alpha;
  cplx beta;
};

/// Classical mixture of coherent states.
struct Mixture {
  std::vector<MixtureComponent> components;
};

using StateSpec = std::variant<Vacuum, Coherent, HomInput, Tmsv, Mixture>;

std::string_view kind_name(const StateSpec& spec);

enum class CutoffPolicy {
  /// Truncation of the input state only.
  kInput,
  /// Also keeps every interferometer output inside the Fock box.
  kAnyDirection,
};

/// Smallest per-mode cutoff whose truncation loss stays below `bound`. With
/// z_max > 1 the loss is weighted by z_max^N, which bounds the truncation
/// error of sum p(n_a, n_b) z_a^{n_a} z_b^{n_b} for |z_a|, |z_b| <= z_max.
int suggest_cutoff(const StateSpec& spec, double bound = kDefaultTolerances.leakage_bound,
                   CutoffPolicy policy = CutoffPolicy::kInput, double z_max = 1.0);

// ---------------------------------------------------------------------------
// Interferometer setting
// ---------------------------------------------------------------------------

/// Unit vector e on the Stokes sphere together with a beam splitter (T, R)
/// realizing it:
///   e = (2 Re(T R*), 2 Im(T R*), |T|^2 - |R|^2).
class MeasurementDirection {
 public:
  /// Inverts e = (sin th cos ph, sin th sin ph, cos th) with T = cos(th/2),
  /// R = sin(th/2) e^{-i ph}. The input is renormalized; ph = 0 on the poles.
  static MeasurementDirection from_vector(const Vec3& e);
  static MeasurementDirection from_beam_splitter(cplx T, cplx R,
                                                 const Tolerances& tol = kDefaultTolerances);

  const Vec3& e() const { return e_; }
  cplx T() const { return T_; }
  cplx R() const { return R_; }

 private:
  MeasurementDirection(Vec3 e, cplx T, cplx R) : e_(std::move(e)), T_(T), R_(R) {}

  Vec3 e_;
  cplx T_;
  cplx R_;
};

MeasurementDirection direction_to_beamsplitter(const Vec3& e);

Vec3 direction_from_beam_splitter(cplx T, cplx R);

// ---------------------------------------------------------------------------
// Two-mode states on a truncated Fock box 0 <= n_a, n_b <= cutoff
// ---------------------------------------------------------------------------

/// Density operator of a two-mode field. rho is held in ensemble form
/// rho = sum_k v_k v_k^dagger over joint Fock labels, index n_a*(cutoff+1)+n_b;
/// density_matrix() materializes the dense matrix.
class TwoModeState {
 public:
  static TwoModeState from_components(int cutoff, std::vector<Eigen::VectorXcd> components,
                                      double leakage, Warnings warnings = {});

  /// Accepts a dense Hermitian PSD rho of dimension (cutoff+1)^2.
  static TwoModeState from_density(int cutoff, const Eigen::MatrixXcd& rho, double leakage = 0.0,
                                   const Tolerances& tol = kDefaultTolerances);

  int cutoff() const { return cutoff_; }
  int dim() const { return (cutoff_ + 1) * (cutoff_ + 1); }
  int index(int na, int nb) const { return na * (cutoff_ + 1) + nb; }

  /// Estimated probability mass truncated away.
  double leakage() const { return leakage_; }
  double trace() const;

  const std::vector<Eigen::VectorXcd>& components() const { return components_; }
  Eigen::MatrixXcd density_matrix() const;

  /// <na, nb| rho |ma, mb>.
  cplx element(int na, int nb, int ma, int mb) const;

  const Warnings& warnings() const { return warnings_; }

 private:
  TwoModeState() = default;

  int cutoff_ = 0;
  std::vector<Eigen::VectorXcd> components_;
  double leakage_ = 0.0;
  Warnings warnings_;
};

/// Joint photon-number distribution p(n_a, n_b; e) at the interferometer
/// outputs, on the box 0 <= n <= output_cutoff(state).
struct JointPhotonDistribution {
  Eigen::MatrixXd p;
  MeasurementDirection direction;
  double leakage = 0.0;

  int cutoff() const { return static_cast<int>(p.rows()) - 1; }
  double total() const { return p.sum(); }
};

struct StokesVector {
  Vec3 S = Vec3::Zero();
  /// <N> = <a^dagger a + b^dagger b>.
  double S0 = 0.0;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

TwoModeState make_state(const StateSpec& spec, int cutoff,
                        const Tolerances& tol = kDefaultTolerances);

/// Output state of the four-port interferometer
///   a_e = T a + R b,  b_e = -R* a + T* b.
/// The output box has cutoff output_cutoff(state), so no amplitude is lost.
TwoModeState beam_splitter(const TwoModeState& state, cplx T, cplx R,
                           const Tolerances& tol = kDefaultTolerances);

/// max(cutoff, largest occupied n_a + n_b): the smallest box that holds every
/// interferometer output of the state.
int output_cutoff(const TwoModeState& state);

/// Matrix of the interferometer on the total-photon-number-N subspace, in
/// the basis |n, N-n>, n = 0..N (rows: outputs, columns: inputs).
Eigen::MatrixXcd beam_splitter_block(int total_photons, cplx T, cplx R);

JointPhotonDistribution joint_photon_distribution(const TwoModeState& state,
                                                  const MeasurementDirection& dir);

/// <z_a^{n_a,e} z_b^{n_b,e}> = sum p(n_a, n_b; e) z_a^{n_a} z_b^{n_b}.
cplx power_expectation(const JointPhotonDistribution& dist, cplx z_a, cplx z_b,
                       Warnings* warnings = nullptr,
                       const Tolerances& tol = kDefaultTolerances);
cplx power_expectation(const TwoModeState& state, const MeasurementDirection& dir, cplx z_a,
                       cplx z_b, Warnings* warnings = nullptr,
                       const Tolerances& tol = kDefaultTolerances);

/// Normally ordered moment <: n_a^p n_b^q :> of the output photon numbers.
double factorial_moment(const JointPhotonDistribution& dist, int p, int q);
double factorial_moment(const TwoModeState& state, const MeasurementDirection& dir, int p,
                        int q);

StokesVector stokes_mean(const TwoModeState& state,
                         const Tolerances& tol = kDefaultTolerances);

/// Classical Stokes vector of a coherent amplitude pair.
Vec3 stokes_of(cplx alpha, cplx beta);

}  // namespace esscorr
