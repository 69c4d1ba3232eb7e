#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "esscorr/fock.hpp"
#include "oracles.hpp"

using namespace esscorr;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double total_number_prob(const TwoModeState& s, int N) {
  double p = 0.0;
  const int c = s.cutoff();
  for (const auto& v : s.components()) {
    for (int na = std::max(0, N - c); na <= std::min(N, c); ++na) {
      p += std::norm(v[s.index(na, N - na)]);
    }
  }
  return p;
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

// ---------- make_state ----------

TEST(MakeState, VacuumHasSingleEntry) {
  const auto s = make_state(Vacuum{}, 4);
  const auto rho = s.density_matrix();
  EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(rho.cwiseAbs().sum(), 1.0, 1e-15);
  EXPECT_EQ(s.leakage(), 0.0);
}

TEST(MakeState, HomInputIsPureOneOne) {
  const auto s = make_state(HomInput{}, 2);
  const auto p = joint_photon_distribution(s, MeasurementDirection::from_vector(Vec3::UnitZ()));
  EXPECT_NEAR(p.p(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(p.total(), 1.0, 1e-15);
  EXPECT_THROW(make_state(HomInput{}, 0), ValidationError);
}

TEST(MakeState, TmsvPopulationsAreGeometric) {
  const double xi = std::atanh(0.5);
  const auto s = make_state(Tmsv{xi}, 40);
  EXPECT_NEAR(s.element(1, 1, 1, 1).real(), 0.1875, 1e-14);
  for (int n = 0; n <= 10; ++n) {
    EXPECT_NEAR(s.element(n, n, n, n).real(), 0.75 * std::pow(0.25, n), 1e-14) << "n=" << n;
  }
  EXPECT_NEAR(s.leakage(), std::pow(0.25, 41), 1e-30);
  EXPECT_NEAR(s.element(1, 1, 0, 0).real(), -0.5 * 0.75, 1e-14);
}

TEST(MakeState, CoherentAmplitudes) {
  const cplx a(0.7, -0.2);
  const cplx b(-0.3, 0.4);
  const auto s = make_state(Coherent{a, b}, 12);
  const double norm = std::exp(-0.5 * (std::norm(a) + std::norm(b)));
  for (int n = 0; n <= 4; ++n) {
    for (int m = 0; m <= 4; ++m) {
      const cplx amp =
          norm * std::pow(a, n) * std::pow(b, m) /
          std::sqrt(oracle::factorial(n) * oracle::factorial(m));
      EXPECT_NEAR(std::abs(s.element(n, m, n, m) - std::norm(amp)), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(s.element(n, m, 0, 0) - amp * std::conj(norm)), 0.0, 1e-14);
    }
  }
  EXPECT_LT(s.leakage(), 1e-10);
}

TEST(MakeState, RejectsBadInput) {
  EXPECT_THROW(make_state(Vacuum{}, -1), ValidationError);
  EXPECT_THROW(make_state(Mixture{{{0.5, 1.0, 0.0}, {0.4, 0.0, 1.0}}}, 10), ValidationError);
  EXPECT_THROW(make_state(Mixture{{{1.5, 1.0, 0.0}, {-0.5, 0.0, 1.0}}}, 10), ValidationError);
  EXPECT_THROW(make_state(Mixture{}, 10), ValidationError);
}

TEST(MakeState, TruncationWarningWhenCutoffTooSmall) {
  const auto s = make_state(Coherent{2.0, 0.0}, 3);
  ASSERT_FALSE(s.warnings().empty());
  EXPECT_EQ(s.warnings().front().code, "truncation");
  EXPECT_GT(s.leakage(), 1e-10);
}

TEST(MakeState, SuggestedCutoffMeetsBound) {
  const std::vector<StateSpec> specs = {Coherent{1.5, cplx(0.0, 0.7)}, Tmsv{std::atanh(0.6)},
                                        Mixture{{{0.3, 2.0, 0.0}, {0.7, 0.0, 1.0}}}};
  for (const auto& spec : specs) {
    const int c = suggest_cutoff(spec, 1e-10);
    const auto s = make_state(spec, c);
    EXPECT_LT(s.leakage(), 1e-10) << kind_name(spec);
    EXPECT_TRUE(s.warnings().empty());
    if (c > 0) {
      EXPECT_GE(make_state(spec, c - 1).leakage(), 1e-10) << kind_name(spec);
    }
  }
}

TEST(MakeState, WeightedCutoffBoundsLargeArguments) {
  const cplx a(1.1, -0.4), b(0.3, 0.8);
  const double z = 2.5;
  const int c = suggest_cutoff(Coherent{a, b}, 1e-12, CutoffPolicy::kInput, z);
  EXPECT_GT(c, suggest_cutoff(Coherent{a, b}, 1e-12));
  const auto s = make_state(Coherent{a, b}, c);
  const auto d = MeasurementDirection::from_vector(Vec3::UnitZ());
  const cplx za(z, 0.0), zb(0.0, -z);
  const cplx exact = std::exp(std::norm(a) * (za - 1.0) + std::norm(b) * (zb - 1.0));
  EXPECT_LT(std::abs(power_expectation(s, d, za, zb) - exact), 1e-11);
  EXPECT_THROW(suggest_cutoff(Tmsv{std::atanh(0.5)}, 1e-12, CutoffPolicy::kInput, 2.0),
               DomainError);
  EXPECT_THROW(suggest_cutoff(Vacuum{}, 1e-12, CutoffPolicy::kInput, 0.5), ValidationError);
}

TEST(MakeState, DensityInvariants) {
  std::mt19937_64 gen(11);
  const auto rho = oracle::random_density(3, gen);
  const auto s = TwoModeState::from_density(3, rho);
  EXPECT_LT(max_abs_diff(s.density_matrix(), rho), 1e-12);
  EXPECT_NEAR(s.trace(), 1.0, 1e-12);

  Eigen::MatrixXcd bad = rho;
  bad(0, 1) += 1e-6;
  EXPECT_THROW(TwoModeState::from_density(3, bad), ValidationError);
  Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(16, 16);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(TwoModeState::from_density(3, neg), ValidationError);
}

// ---------- directions ----------

TEST(Direction, NorthPoleIsIdentity) {
  const auto d = direction_to_beamsplitter(Vec3(0, 0, 1));
  EXPECT_EQ(d.T(), cplx(1.0, 0.0));
  EXPECT_EQ(d.R(), cplx(0.0, 0.0));
}

TEST(Direction, EquatorIsBalanced) {
  const auto d = direction_to_beamsplitter(Vec3(1, 0, 0));
  EXPECT_NEAR(std::abs(d.T() - std::cos(std::numbers::pi / 4)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.R() - std::sin(std::numbers::pi / 4)), 0.0, 1e-15);
  EXPECT_LT((direction_from_beam_splitter(d.T(), d.R()) - Vec3(1, 0, 0)).norm(), 1e-12);
}

TEST(Direction, SouthPoleUsesZeroAzimuth) {
  const auto d = direction_to_beamsplitter(Vec3(0, 0, -1));
  EXPECT_EQ(d.T(), cplx(0.0, 0.0));
  EXPECT_NEAR(std::abs(d.R() - 1.0), 0.0, 1e-15);
}

TEST(Direction, RoundTripOverRandomVectors) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 500; ++i) {
    const Vec3 e = oracle::random_unit(gen);
    const auto d = direction_to_beamsplitter(2.5 * e);
    EXPECT_NEAR(std::norm(d.T()) + std::norm(d.R()), 1.0, 1e-12);
    EXPECT_LT((direction_from_beam_splitter(d.T(), d.R()) - d.e()).norm(), 1e-12);
    EXPECT_LT((d.e() - e).norm(), 1e-12);
  }
  EXPECT_THROW(direction_to_beamsplitter(Vec3::Zero()), ValidationError);
}

TEST(Direction, RejectsNonUnitaryBeamSplitter) {
  EXPECT_THROW(MeasurementDirection::from_beam_splitter(1.0, 0.1), ValidationError);
}

// ---------- beam splitter ----------

TEST(BeamSplitter, IdentityLeavesStateUnchanged) {
  const auto s = make_state(HomInput{}, 2);
  const auto out = beam_splitter(s, 1.0, 0.0);
  EXPECT_LT(max_abs_diff(out.density_matrix(), s.density_matrix()), 1e-15);
}

TEST(BeamSplitter, BalancedHomOutput) {
  const auto s = make_state(HomInput{}, 2);
  const auto out = beam_splitter(s, kInvSqrt2, kInvSqrt2);
  ASSERT_EQ(out.components().size(), 1u);
  const auto& v = out.components()[0];
  EXPECT_NEAR(std::abs(v[out.index(2, 0)] - kInvSqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[out.index(1, 1)]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[out.index(0, 2)] + kInvSqrt2), 0.0, 1e-15);
}

TEST(BeamSplitter, GeneralHomOutputMatchesFormula) {
  const cplx T = std::polar(0.8, 0.3);
  const cplx R = std::polar(0.6, -1.1);
  const auto out = beam_splitter(make_state(HomInput{}, 2), T, R);
  const auto& v = out.components()[0];
  EXPECT_NEAR(std::abs(v[out.index(2, 0)] - std::sqrt(2.0) * T * R), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v[out.index(1, 1)] - (std::norm(T) - std::norm(R))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v[out.index(0, 2)] + std::sqrt(2.0) * std::conj(T) * std::conj(R)), 0.0,
              1e-14);
}

TEST(BeamSplitter, CoherentStaysCoherent) {
  const cplx a(0.9, 0.3);
  const cplx b(-0.4, 0.8);
  const cplx T = std::polar(0.6, 0.4);
  const cplx R = std::polar(0.8, 2.0);
  const int c = suggest_cutoff(Coherent{a, b}, 1e-22);
  const auto out = beam_splitter(make_state(Coherent{a, b}, c), T, R);
  const auto expected = make_state(
      Coherent{T * a + R * b, std::conj(T) * b - std::conj(R) * a}, out.cutoff());
  EXPECT_LT(max_abs_diff(out.density_matrix(), expected.density_matrix()), 1e-10);
}

TEST(BeamSplitter, BlocksMatchBinomialOracle) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 5; ++trial) {
    const double th = 0.5 * u(gen);
    const cplx T = std::polar(std::cos(th), u(gen));
    const cplx R = std::polar(std::sin(th), u(gen));
    for (int N = 0; N <= 14; ++N) {
      const auto B = beam_splitter_block(N, T, R);
      EXPECT_LT(max_abs_diff(B, oracle::binomial_block(N, T, R)), 1e-10) << "N=" << N;
      EXPECT_LT(max_abs_diff(B * B.adjoint(), Eigen::MatrixXcd::Identity(N + 1, N + 1)), 1e-12);
    }
  }
}

TEST(BeamSplitter, LargeBlocksStayUnitary) {
  for (int N : {100, 128, 129, 200, 450}) {
    const auto B =
        beam_splitter_block(N, std::polar(0.3, 0.2), std::polar(std::sqrt(0.91), 1.0));
    EXPECT_LT(max_abs_diff(B * B.adjoint(), Eigen::MatrixXcd::Identity(N + 1, N + 1)), 1e-11)
        << "N=" << N;
  }
}

TEST(BeamSplitter, LargeBlockEdgeColumnsMatchClosedForm) {
  // |N, 0> -> (T a_e^dagger - R* b_e^dagger)^N / sqrt(N!) |0>
  const cplx T = std::polar(0.6, -0.4);
  const cplx R = std::polar(0.8, 0.9);
  for (int N : {120, 160, 300}) {
    const auto B = beam_splitter_block(N, T, R);
    for (int m = 0; m <= N; ++m) {
      const double log_mag = 0.5 * (std::lgamma(N + 1.0) - std::lgamma(m + 1.0) -
                                    std::lgamma(N - m + 1.0)) +
                             m * std::log(std::abs(T)) + (N - m) * std::log(std::abs(R));
      const cplx ref = std::exp(log_mag) *
                       std::polar(1.0, m * std::arg(T) + (N - m) * std::arg(-std::conj(R)));
      EXPECT_NEAR(std::abs(B(m, N) - ref), 0.0, 1e-11) << "N=" << N << " m=" << m;
    }
  }
}

TEST(BeamSplitter, BrightCoherentStateUsesLargeBlocks) {
  const cplx a(5.0, 1.0);
  const cplx b(-3.0, 2.0);
  const cplx T = std::polar(0.8, 0.1);
  const cplx R = std::polar(0.6, -0.7);
  const int c = suggest_cutoff(Coherent{a, b}, 1e-22);
  const auto s = make_state(Coherent{a, b}, c);
  ASSERT_GT(output_cutoff(s), 128);
  const auto out = beam_splitter(s, T, R);
  const auto expected = make_state(
      Coherent{T * a + R * b, std::conj(T) * b - std::conj(R) * a}, out.cutoff());
  const auto& v = out.components()[0];
  const auto& w = expected.components()[0];
  EXPECT_LT((v - w).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BeamSplitter, InverseTransformRestoresState) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 5; ++trial) {
    const int c = 5;
    const auto s = TwoModeState::from_density(c, oracle::random_density(c, gen, 3));
    const auto d = MeasurementDirection::from_vector(oracle::random_unit(gen));
    // Keep the support inside the box under both maps: only N <= c populated.
    Eigen::MatrixXcd rho = s.density_matrix();
    for (int i = 0; i < s.dim(); ++i) {
      for (int j = 0; j < s.dim(); ++j) {
        const int ni = i / (c + 1) + i % (c + 1);
        const int nj = j / (c + 1) + j % (c + 1);
        if (ni > c || nj > c) {
          rho(i, j) = 0.0;
        }
      }
    }
    rho /= rho.trace().real();
    const auto low = TwoModeState::from_density(c, rho);
    const auto fwd = beam_splitter(low, d.T(), d.R());
    const auto back = beam_splitter(fwd, std::conj(d.T()), -d.R());
    EXPECT_LT(max_abs_diff(back.density_matrix(), low.density_matrix()), 1e-10);
    EXPECT_NEAR(fwd.trace(), low.trace(), 1e-12);
    for (int N = 0; N <= 2 * c; ++N) {
      EXPECT_NEAR(total_number_prob(fwd, N), total_number_prob(low, N), 1e-12);
    }
  }
}

TEST(BeamSplitter, OutputBoxHoldsEveryTotalNumber) {
  const auto s = make_state(Coherent{1.0, 1.0}, 2);
  EXPECT_EQ(output_cutoff(s), 4);
  const auto out = beam_splitter(s, kInvSqrt2, kInvSqrt2);
  EXPECT_EQ(out.cutoff(), 4);
  EXPECT_NEAR(out.trace(), s.trace(), 1e-12);
  EXPECT_EQ(out.leakage(), s.leakage());
  EXPECT_EQ(output_cutoff(make_state(HomInput{}, 2)), 2);
  EXPECT_EQ(beam_splitter(out, kInvSqrt2, -kInvSqrt2).cutoff(), 4);
}

TEST(BeamSplitter, RejectsNonUnitary) {
  EXPECT_THROW(beam_splitter(make_state(Vacuum{}, 1), 0.9, 0.9), ValidationError);
}

// ---------- joint distribution ----------

TEST(JointDistribution, Examples) {
  const auto vac = make_state(Vacuum{}, 3);
  EXPECT_NEAR(joint_photon_distribution(vac, direction_to_beamsplitter(Vec3(1, 2, 3))).p(0, 0),
              1.0, 1e-15);
  const auto hom = make_state(HomInput{}, 2);
  const auto z = joint_photon_distribution(hom, direction_to_beamsplitter(Vec3::UnitZ()));
  EXPECT_NEAR(z.p(1, 1), 1.0, 1e-15);
  const auto x = joint_photon_distribution(hom, direction_to_beamsplitter(Vec3::UnitX()));
  EXPECT_NEAR(x.p(2, 0), 0.5, 1e-15);
  EXPECT_NEAR(x.p(0, 2), 0.5, 1e-15);
  EXPECT_NEAR(x.p(1, 1), 0.0, 1e-15);
}

TEST(JointDistribution, MatchesDenseOracleAndTrace) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int c = 1 + trial % 4;
    const auto rho = oracle::random_density(c, gen);
    const auto s = TwoModeState::from_density(c, rho);
    const auto d = MeasurementDirection::from_vector(oracle::random_unit(gen));
    const auto p = joint_photon_distribution(s, d);
    const auto ref = oracle::dense_joint_distribution(rho, c, d.T(), d.R());
    ASSERT_EQ(p.cutoff(), 2 * c);
    EXPECT_LT((p.p - ref).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(p.p.minCoeff(), -1e-12);
    EXPECT_NEAR(p.total(), s.trace(), 1e-10);
  }
}

TEST(JointDistribution, IndependentOfOutputPhases) {
  std::mt19937_64 gen(29);
  const auto s = TwoModeState::from_density(3, oracle::random_density(3, gen));
  const auto d = MeasurementDirection::from_vector(oracle::random_unit(gen));
  const cplx ph = std::polar(1.0, 0.77);
  const auto d2 = MeasurementDirection::from_beam_splitter(d.T() * ph, d.R() * ph);
  EXPECT_LT((d2.e() - d.e()).norm(), 1e-12);
  const auto p1 = joint_photon_distribution(s, d);
  const auto p2 = joint_photon_distribution(s, d2);
  EXPECT_LT((p1.p - p2.p).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(JointDistribution, CoherentFactorizesIntoPoissons) {
  const cplx a(1.1, -0.3);
  const cplx b(0.2, 0.9);
  const int c = suggest_cutoff(Coherent{a, b}, 1e-13, CutoffPolicy::kAnyDirection);
  const auto s = make_state(Coherent{a, b}, c);
  std::mt19937_64 gen(31);
  const Vec3 S = oracle::stokes(a, b);
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = MeasurementDirection::from_vector(oracle::random_unit(gen));
    const double ma = 0.5 * (S.norm() + d.e().dot(S));
    const double mb = 0.5 * (S.norm() - d.e().dot(S));
    const auto p = joint_photon_distribution(s, d);
    for (int na = 0; na <= 6; ++na) {
      for (int nb = 0; nb <= 6; ++nb) {
        const double ref = std::exp(-ma - mb) * std::pow(ma, na) * std::pow(mb, nb) /
                           (oracle::factorial(na) * oracle::factorial(nb));
        EXPECT_NEAR(p.p(na, nb), ref, 1e-12);
      }
    }
  }
}

// ---------- power expectation / moments ----------

TEST(PowerExpectation, Examples) {
  const auto ez = direction_to_beamsplitter(Vec3::UnitZ());
  EXPECT_NEAR(std::abs(power_expectation(make_state(Vacuum{}, 2), ez, 0.3, cplx(0.1, 2.0)) - 1.0),
              0.0, 1e-15);
  EXPECT_NEAR(power_expectation(make_state(HomInput{}, 2), ez, 0.3, 0.7).real(), 0.21, 1e-15);
  const auto coh = make_state(Coherent{1.0, 0.0}, 30);
  EXPECT_NEAR(power_expectation(coh, ez, 0.5, 1.0).real(), std::exp(-0.5), 1e-12);
}

TEST(PowerExpectation, UnitArgumentsGiveTrace) {
  std::mt19937_64 gen(37);
  const auto s = TwoModeState::from_density(3, oracle::random_density(3, gen));
  const auto d = MeasurementDirection::from_vector(oracle::random_unit(gen));
  const auto p = joint_photon_distribution(s, d);
  EXPECT_NEAR(power_expectation(p, 1.0, 1.0).real(), p.total(), 1e-10);
}

TEST(PowerExpectation, WarnsBeyondUnitCircleForTruncatedStates) {
  const auto s = make_state(Coherent{1.0, 0.0}, 8);
  ASSERT_GT(s.leakage(), 1e-12);
  const auto p = joint_photon_distribution(s, direction_to_beamsplitter(Vec3::UnitZ()));
  Warnings w;
  power_expectation(p, 0.5, 0.5, &w);
  EXPECT_TRUE(w.empty());
  power_expectation(p, 1.5, 0.5, &w);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].code, "convergence");
  Warnings none;
  power_expectation(make_state(HomInput{}, 2), direction_to_beamsplitter(Vec3::UnitZ()), 3.0,
                    3.0, &none);
  EXPECT_TRUE(none.empty());
}

TEST(FactorialMoment, Examples) {
  const auto ez = direction_to_beamsplitter(Vec3::UnitZ());
  EXPECT_EQ(factorial_moment(make_state(Vacuum{}, 3), ez, 1, 0), 0.0);
  EXPECT_NEAR(factorial_moment(make_state(Coherent{2.0, 0.0}, 40), ez, 2, 0), 16.0, 1e-9);
  EXPECT_NEAR(factorial_moment(make_state(HomInput{}, 2), ez, 1, 1), 1.0, 1e-15);
  EXPECT_EQ(factorial_moment(make_state(HomInput{}, 2), ez, 2, 0), 0.0);
  EXPECT_THROW(factorial_moment(make_state(Vacuum{}, 1), ez, -1, 0), ValidationError);
}

// ---------- Stokes ----------

TEST(Stokes, Examples) {
  const auto v = stokes_mean(make_state(Vacuum{}, 2));
  EXPECT_LT(v.S.norm(), 1e-15);
  EXPECT_EQ(v.S0, 0.0);
  const auto c = stokes_mean(make_state(Coherent{1.0, 1.0}, 30));
  EXPECT_LT((c.S - Vec3(2, 0, 0)).norm(), 1e-10);
  EXPECT_NEAR(c.S0, 2.0, 1e-10);
  const auto h = stokes_mean(make_state(HomInput{}, 2));
  EXPECT_LT(h.S.norm(), 1e-15);
  EXPECT_NEAR(h.S0, 2.0, 1e-15);
}

TEST(Stokes, CoherentMatchesClassicalVector) {
  const cplx a(0.4, 0.9);
  const cplx b(-0.7, 0.2);
  const auto m = stokes_mean(make_state(Coherent{a, b}, 30));
  EXPECT_LT((m.S - oracle::stokes(a, b)).norm(), 1e-10);
  EXPECT_LT((stokes_of(a, b) - oracle::stokes(a, b)).norm(), 1e-15);
  EXPECT_NEAR(m.S0, m.S.norm(), 1e-10);
}
