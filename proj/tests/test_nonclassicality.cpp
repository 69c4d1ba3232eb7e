#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "esscorr/mgf.hpp"
#include "esscorr/nonclassicality.hpp"
#include "oracles.hpp"

using namespace esscorr;

namespace {

MeasurementDirection dir(const Vec3& e) { return MeasurementDirection::from_vector(e); }

const double kSqrt3 = std::sqrt(3.0);
const double kSqrt2 = std::sqrt(2.0);

Vec3 equator() { return Vec3::UnitX(); }

// (1 + 4 t^2 k) - (1 + t^2 k)^2 with k = 1 - 2 e_z^2
double hom_det(double ez, double t) {
  const double k = 1.0 - 2.0 * ez * ez;
  return (1.0 + 4.0 * k * t * t) - std::pow(1.0 + k * t * t, 2);
}

std::vector<MatrixPoint> random_points(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.0, 1.0);
  std::vector<MatrixPoint> pts;
  for (int i = 0; i < n; ++i) {
    cplx t(u(gen), u(gen));
    if (std::abs(t) > 1.0) {
      t /= std::abs(t);
    }
    pts.push_back({t, pos(gen)});
  }
  return pts;
}

}  // namespace

// ---------- matrix criterion ----------

TEST(MgfMatrix, VacuumIsAllOnes) {
  const auto s = make_state(Vacuum{}, 2);
  std::mt19937_64 gen(3);
  const auto m = mgf_matrix(s, MgfMatrixSpec{dir(oracle::random_unit(gen)), random_points(gen, 4)});
  EXPECT_LT((m - Eigen::MatrixXcd::Ones(4, 4)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(matrix_verdict(m).verdict, Verdict::kInconclusive);
}

TEST(MgfMatrix, CoherentIsRankOneGram) {
  const cplx a(0.7, -0.2);
  const cplx b(0.3, 0.5);
  const auto s = make_state(Coherent{a, b}, 14);
  const Vec3 e = Vec3(1.0, -2.0, 0.5).normalized();
  const std::vector<MatrixPoint> pts = {{0.4, 0.5}, {-0.3, 0.2}, {0.1, 0.0}};
  const auto m = mgf_matrix(s, MgfMatrixSpec{dir(e), pts});
  const Vec3 S = oracle::stokes(a, b);
  Eigen::VectorXd g(3);
  for (int r = 0; r < 3; ++r) {
    g[r] = std::exp(pts[r].t.real() * e.dot(S) - pts[r].tau * S.norm());
  }
  const Eigen::MatrixXd gram = g * g.transpose();
  EXPECT_LT((m.real() - gram).cwiseAbs().maxCoeff(), 1e-10);
  const auto rep = matrix_verdict(m);
  EXPECT_GE(rep.value, -1e-9);
  EXPECT_EQ(rep.verdict, Verdict::kInconclusive);
}

TEST(MgfMatrix, HomEquatorEntries) {
  const auto s = make_state(HomInput{}, 2);
  const auto m = mgf_matrix(s, MgfMatrixSpec{dir(equator()), {{-kSqrt3, 0.0}, {0.0, 0.0}}});
  // M(t; 0) = 1 + t^2 on the equator
  Eigen::MatrixXd expected(2, 2);
  expected << 13.0, 4.0, 4.0, 1.0;
  EXPECT_LT((m.real() - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(m.imag().cwiseAbs().maxCoeff(), 1e-12);
  const auto minors = sylvester_minors(m);
  ASSERT_EQ(minors.size(), 2u);
  EXPECT_NEAR(minors[0], 13.0, 1e-12);
  EXPECT_NEAR(minors[1], -3.0, 1e-11);
  EXPECT_EQ(matrix_verdict(m).verdict, Verdict::kNonclassical);
}

TEST(MgfMatrix, IsHermitianForComplexPoints) {
  std::mt19937_64 gen(11);
  const auto s = TwoModeState::from_density(3, oracle::random_density(3, gen));
  const auto m = mgf_matrix(s, MgfMatrixSpec{dir(oracle::random_unit(gen)), random_points(gen, 5)});
  EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(MgfMatrix, RejectsEmptyAndNegativeTau) {
  const auto s = make_state(Vacuum{}, 1);
  EXPECT_THROW(mgf_matrix(s, MgfMatrixSpec{dir(equator()), {}}), ValidationError);
  EXPECT_THROW(mgf_matrix(s, MgfMatrixSpec{dir(equator()), {{0.0, -0.1}}}), ValidationError);
}

TEST(MatrixVerdict, Identity) {
  const auto rep = matrix_verdict(Eigen::MatrixXcd::Identity(3, 3));
  EXPECT_EQ(rep.verdict, Verdict::kInconclusive);
  EXPECT_NEAR(rep.value, 1.0, 1e-15);
}

TEST(MatrixVerdict, IndefiniteTwoByTwo) {
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;
  const auto rep = matrix_verdict(m);
  EXPECT_EQ(rep.verdict, Verdict::kNonclassical);
  EXPECT_NEAR(rep.value, -1.0, 1e-14);
  ASSERT_TRUE(rep.witness.has_value());
  const Eigen::VectorXcd w = *rep.witness;
  EXPECT_NEAR((w.adjoint() * m * w)(0, 0).real(), -1.0, 1e-14);
}

TEST(MatrixVerdict, RejectsNonHermitian) {
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, 2.0, 2.1, 1.0;
  EXPECT_THROW(matrix_verdict(m), ValidationError);
  EXPECT_THROW(matrix_verdict(Eigen::MatrixXcd(2, 3)), ValidationError);
}

TEST(MatrixVerdict, ToleranceBoundary) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
  m(1, 1) = -5e-10;
  EXPECT_EQ(matrix_verdict(m).verdict, Verdict::kInconclusive);
  m(1, 1) = -2e-9;
  EXPECT_EQ(matrix_verdict(m).verdict, Verdict::kNonclassical);
  EXPECT_EQ(matrix_verdict(m, 1e-8).verdict, Verdict::kInconclusive);
  EXPECT_EQ(verdict_name(Verdict::kNonclassical), "nonclassical");
  EXPECT_EQ(verdict_name(Verdict::kInconclusive), "inconclusive");
}

TEST(MgfMatrixProperty, ClassicalStatesArePsd) {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> g(0.0, 0.6);
  std::uniform_int_distribution<int> size(1, 5);
  std::uniform_int_distribution<int> kind(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    StateSpec spec;
    switch (kind(gen)) {
      case 0:
        spec = Vacuum{};
        break;
      case 1:
        spec = Coherent{cplx(g(gen), g(gen)), cplx(g(gen), g(gen))};
        break;
      default: {
        Mixture mix;
        double w0 = 0.3 + 0.4 * std::uniform_real_distribution<double>()(gen);
        mix.components = {{w0, cplx(g(gen), g(gen)), cplx(g(gen), g(gen))},
                          {1.0 - w0, cplx(g(gen), g(gen)), cplx(g(gen), g(gen))}};
        spec = mix;
      }
    }
    // entries reach |1 +- t - tau| <= 3
    const auto s = make_state(spec, suggest_cutoff(spec, 1e-13, CutoffPolicy::kInput, 3.0));
    const auto m = mgf_matrix(s, MgfMatrixSpec{dir(oracle::random_unit(gen)),
                                               random_points(gen, size(gen))});
    EXPECT_GE(matrix_verdict(m).value, -1e-9) << "trial " << trial;
  }
}

// ---------- second-order determinant ----------

TEST(SecondOrderDet, HomExamples) {
  const auto s = make_state(HomInput{}, 2);
  EXPECT_NEAR(second_order_det(s, dir(equator()), kSqrt3, 0.0, 0.0, 0.0), -3.0, 1e-11);
  EXPECT_NEAR(second_order_det(s, dir(equator()), kSqrt2, 0.0, 0.0, 0.0), 0.0, 1e-11);
  EXPECT_NEAR(second_order_det(s, dir(Vec3::UnitZ()), kSqrt2, 0.0, 0.0, 0.0), -8.0, 1e-11);
}

TEST(SecondOrderDet, MatchesGenericMatrixDeterminant) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.0, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = TwoModeState::from_density(3, oracle::random_density(3, gen));
    const auto d = dir(oracle::random_unit(gen));
    const cplx t(u(gen), u(gen));
    const cplx t2(u(gen), u(gen));
    const double tau = pos(gen);
    const double tau2 = pos(gen);
    // the determinant form uses real diagonal arguments, so points carry Re t
    const cplx m12 = mgf(s, MgfQuery{d, std::conj(t) + t2, tau + tau2});
    Eigen::MatrixXcd m(2, 2);
    m << mgf(s, MgfQuery{d, 2.0 * t.real(), 2.0 * tau}), m12, std::conj(m12),
        mgf(s, MgfQuery{d, 2.0 * t2.real(), 2.0 * tau2});
    EXPECT_NEAR(second_order_det(s, d, t, tau, t2, tau2), m.determinant().real(), 1e-12);
    const auto mm = mgf_matrix(s, MgfMatrixSpec{d, {{t.real(), tau}, {t2.real(), tau2}}});
    EXPECT_NEAR(second_order_det(s, d, t.real(), tau, t2.real(), tau2),
                mm.determinant().real(), 1e-12);
  }
}

TEST(SecondOrderDet, HomCurveOverTransmissionAndPhases) {
  const auto s = make_state(HomInput{}, 2);
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i <= 20; ++i) {
    const double T2 = i / 20.0;
    const double ez = 2.0 * T2 - 1.0;
    const cplx T = std::polar(std::sqrt(T2), phase(gen));
    const cplx R = std::polar(std::sqrt(1.0 - T2), phase(gen));
    const auto d = MeasurementDirection::from_beam_splitter(T, R);
    for (double t : {0.3, 1.0, kSqrt2, 1.7}) {
      EXPECT_NEAR(second_order_det(s, d, t, 0.0, 0.0, 0.0), hom_det(ez, t), 1e-9)
          << "|T|^2 = " << T2 << ", t = " << t;
    }
  }
}

// ---------- characteristic function ----------

TEST(CharFnCriterion, Examples) {
  const auto coh = make_state(Coherent{cplx(0.8, 0.1), cplx(-0.4, 0.3)}, 16);
  const auto rc = char_fn_criterion(coh, Vec3(0.3, -1.2, 0.7));
  EXPECT_NEAR(rc.value, 0.0, 1e-10);
  EXPECT_EQ(rc.verdict, Verdict::kInconclusive);

  const auto hom = make_state(HomInput{}, 2);
  const auto rh = char_fn_criterion(hom, Vec3::UnitZ());
  EXPECT_NEAR(rh.value, -1.0, 1e-12);
  EXPECT_EQ(rh.verdict, Verdict::kNonclassical);

  const auto vac = make_state(Vacuum{}, 1);
  EXPECT_NEAR(char_fn_criterion(vac, Vec3(1.0, 2.0, 3.0)).value, 0.0, 1e-15);
}

// ---------- variances and cross-correlations ----------

TEST(Variance, CoherentAndVacuumVanish) {
  const auto coh = make_state(Coherent{cplx(1.1, 0.2), cplx(0.4, -0.6)}, 20);
  const auto vac = make_state(Vacuum{}, 1);
  std::mt19937_64 gen(8);
  for (int i = 0; i < 5; ++i) {
    const auto d = dir(oracle::random_unit(gen));
    const auto v = variance_criteria(coh, d);
    EXPECT_NEAR(v.var_S, 0.0, 1e-9);
    EXPECT_NEAR(v.var_N, 0.0, 1e-9);
    const auto w = variance_criteria(vac, d);
    EXPECT_EQ(w.var_S, 0.0);
    EXPECT_EQ(w.var_N, 0.0);
  }
}

TEST(Variance, HomTotalNumberIsSubPoissonian) {
  const auto s = make_state(HomInput{}, 2);
  const auto v = variance_criteria(s, dir(Vec3::UnitZ()));
  EXPECT_NEAR(v.var_N, -2.0, 1e-12);
  // <:(n_a - n_b)^2:> = -2 <n_a n_b> = -2
  EXPECT_NEAR(v.var_S, -2.0, 1e-12);
}

TEST(Variance, MixturesNonNegative) {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> g(0.0, 0.8);
  for (int trial = 0; trial < 20; ++trial) {
    Mixture mix;
    mix.components = {{0.5, cplx(g(gen), g(gen)), cplx(g(gen), g(gen))},
                      {0.5, cplx(g(gen), g(gen)), cplx(g(gen), g(gen))}};
    const auto s = make_state(mix, suggest_cutoff(mix, 1e-13));
    const auto v = variance_criteria(s, dir(oracle::random_unit(gen)));
    EXPECT_GE(v.var_N, -1e-10);
    EXPECT_GE(v.var_S, -1e-10);
  }
}

TEST(CrossCorrelation, CoherentAndVacuumVanish) {
  const auto coh = make_state(Coherent{cplx(0.9, 0.0), cplx(0.2, 0.7)}, 18);
  const auto c = cross_correlation_det(coh, dir(Vec3(0.2, 0.4, -0.9).normalized()));
  EXPECT_NEAR(c.stokes, 0.0, 1e-9);
  EXPECT_NEAR(c.photon_number, 0.0, 1e-9);
  const auto v = cross_correlation_det(make_state(Vacuum{}, 1), dir(equator()));
  EXPECT_EQ(v.stokes, 0.0);
  EXPECT_EQ(v.photon_number, 0.0);
}

TEST(CrossCorrelation, TmsvPhotonNumberMatchesDirectMoments) {
  const double xi = std::atanh(0.5);
  const auto s = make_state(Tmsv{xi}, 60);
  const auto c = cross_correlation_det(s, dir(Vec3::UnitZ()));
  // p(n, n) = (1 - q) q^n with q = tanh^2 xi
  const double q = 0.25;
  double f10 = 0.0, f20 = 0.0, f11 = 0.0;
  for (int n = 0; n < 400; ++n) {
    const double p = (1.0 - q) * std::pow(q, n);
    f10 += n * p;
    f20 += n * (n - 1.0) * p;
    f11 += double(n) * n * p;
  }
  const double var = f20 - f10 * f10;
  const double cov = f11 - f10 * f10;
  EXPECT_NEAR(c.photon_number, var * var - cov * cov, 1e-10);
  EXPECT_LT(c.photon_number, 0.0);
}

// ---------- Cauchy-Schwarz form ----------

TEST(CauchySchwarz, IsMinusDeterminant) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = TwoModeState::from_density(2, oracle::random_density(2, gen));
    const auto d = dir(oracle::random_unit(gen));
    const double t = u(gen), t2 = u(gen), tau = std::abs(u(gen)), tau2 = std::abs(u(gen));
    EXPECT_NEAR(cauchy_schwarz_violation(s, d, t, tau, t2, tau2),
                -second_order_det(s, d, t, tau, t2, tau2), 1e-12);
  }
}

TEST(CauchySchwarz, CoherentNeverViolates) {
  const auto s = make_state(Coherent{cplx(0.6, 0.3), cplx(-0.5, 0.1)}, 16);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = dir(oracle::random_unit(gen));
    EXPECT_LE(cauchy_schwarz_violation(s, d, u(gen), std::abs(u(gen)), u(gen), std::abs(u(gen))),
              1e-10);
  }
}

TEST(CauchySchwarz, HomViolation) {
  const auto s = make_state(HomInput{}, 2);
  // along e_z: M(t; tau) = (1 - tau)^2 - t^2
  EXPECT_NEAR(cauchy_schwarz_violation(s, dir(Vec3::UnitZ()), kSqrt2, 0.0, 0.0, 0.5),
              1.75 * 1.75, 1e-12);
  // equator, opposite points: |M(0)|^2 - M(2 sqrt3)^2 = 1 - 169
  EXPECT_NEAR(cauchy_schwarz_violation(s, dir(equator()), kSqrt3, 0.0, -kSqrt3, 0.0), -168.0,
              1e-10);
}

TEST(CauchySchwarz, VacuumAndProviso) {
  const auto vac = make_state(Vacuum{}, 1);
  EXPECT_NEAR(cauchy_schwarz_violation(vac, dir(equator()), 0.5, 0.5, -0.2, 0.1), 0.0, 1e-15);
  EXPECT_THROW(cauchy_schwarz_violation(vac, dir(equator()), 0.5, 0.5, 0.0, 0.0),
               ValidationError);
}
