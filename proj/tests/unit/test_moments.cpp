#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "slabtest/error.hpp"
#include "slabtest/moments.hpp"
#include "slabtest/thresholds.hpp"
#include "slabtest/weight_mmle.hpp"

using namespace slabtest;

namespace {

// Overflow-safe β(x)/(1 + wβ(x)) from the quasi-Cauchy closed form.
double oracle_beta_w(double x, double w) {
  const double b = oracle::qc_beta(x);
  if (std::isinf(b)) return 1.0 / w;
  return b > 0.0 ? 1.0 / (1.0 / b + w) : b / (1.0 + w * b);
}

double trapezoid_moment(double tau, double w, int power) {
  return oracle::trapezoid(
      [&](double t) { return std::pow(oracle_beta_w(t, w), power) * oracle::phi(t - tau); },
      tau - 40.0, tau + 40.0, 1000000);
}

class QuasiCauchyMoments : public ::testing::Test {
 protected:
  QuasiCauchyPrior qc;
  MomentContext ctx{qc};
};

TEST(MomentContextTest, ToleranceRange) {
  const QuasiCauchyPrior qc;
  EXPECT_THROW(MomentContext(qc, 0.0), DomainError);
  EXPECT_THROW(MomentContext(qc, 1e-3), DomainError);
  EXPECT_NO_THROW(MomentContext(qc, 1e-6));
}

// Reference values: 30-digit tanh-sinh quadrature of the closed-form integrand.
TEST_F(QuasiCauchyMoments, FrozenValues) {
  EXPECT_NEAR(ctx.m_tilde(1e-6), 0.136079813717048735, 1e-10);
  EXPECT_NEAR(ctx.m_tilde(1e-4), 0.16185223699590999231, 1e-10);
  EXPECT_NEAR(ctx.m_tilde(1e-2), 0.21641912174557030365, 1e-10);
  EXPECT_NEAR(ctx.m_tilde(0.5), 0.40755704361445895571, 1e-10);
  EXPECT_NEAR(ctx.m_tilde(1.0), 0.61237534868548834335, 1e-10);
  EXPECT_NEAR(ctx.m_tilde(1e-10), 0.10875377432865686, 1e-10);
  EXPECT_NEAR(ctx.m1(3.0, 0.01) / 24.457337651307628969, 1.0, 1e-9);
  EXPECT_NEAR(ctx.m2(3.0, 0.01) / 1582.5998621159972826, 1.0, 1e-9);
  EXPECT_NEAR(ctx.m1(6.0, 1e-4) / 8317.3619165504717178, 1.0, 1e-9);
  EXPECT_NEAR(ctx.m2(6.0, 1e-4) / 78158688.440632326261, 1.0, 1e-9);
  EXPECT_NEAR(ctx.m1(2.0, 0.3) / 0.85125799324716691206, 1.0, 1e-9);
  EXPECT_NEAR(ctx.m2(2.0, 0.3) / 2.1896664387166506705, 1.0, 1e-9);
  EXPECT_NEAR(ctx.m2(0.0, 0.01) / 1.9103625807113429673, 1.0, 1e-9);
}

TEST_F(QuasiCauchyMoments, AgreesWithTrapezoid) {
  for (double w : {1e-5, 1e-3, 0.1, 0.7}) {
    for (double tau : {0.0, 1.5, 4.0, 8.0}) {
      const double m1 = ctx.m1(tau, w);
      const double m2 = ctx.m2(tau, w);
      EXPECT_NEAR(m1 / trapezoid_moment(tau, w, 1), 1.0, 1e-6) << tau << " " << w;
      EXPECT_NEAR(m2 / trapezoid_moment(tau, w, 2), 1.0, 1e-6) << tau << " " << w;
    }
    EXPECT_NEAR(ctx.m_tilde(w) / -trapezoid_moment(0.0, w, 1), 1.0, 1e-6);
  }
}

// m̃ decays only logarithmically as w → 0: at w = 1e-10 it is still ≈ 0.109.
TEST_F(QuasiCauchyMoments, MTildeIncreasingAndVanishingSlowly) {
  double prev = 0.0;
  for (double w = 1e-14; w <= 1.0; w *= 10.0) {
    const double m = ctx.m_tilde(w);
    EXPECT_GT(m, prev) << w;
    EXPECT_GT(m, 0.0);
    prev = m;
  }
  EXPECT_LT(ctx.m_tilde(1e-14), ctx.m_tilde(1e-10));
  EXPECT_THROW(ctx.m_tilde(0.0), DomainError);
  EXPECT_THROW(ctx.m_tilde(1.5), DomainError);
}

TEST_F(QuasiCauchyMoments, MTildeTracksTwiceSlabTail) {
  const ThresholdContext tc(qc);
  const double w = 1e-6;
  const double ratio = ctx.m_tilde(w) / (2.0 * qc.tail(tc.zeta(w)));
  EXPECT_GE(ratio, 0.9);
  EXPECT_LE(ratio, 1.1);
}

TEST_F(QuasiCauchyMoments, M1Structure) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> utau(-10.0, 10.0), ulw(-6.0, 0.0);
  for (int k = 0; k < 40; ++k) {
    const double tau = utau(gen);
    const double w = std::pow(10.0, ulw(gen));
    const double m1 = ctx.m1(tau, w);
    EXPECT_NEAR(m1, ctx.m1(-tau, w), 1e-9 * std::max(1.0, std::abs(m1)));
    EXPECT_GE(ctx.m2(tau, w), m1 * m1 * (1 - 1e-9));
    EXPECT_LE(ctx.m2(tau, w), 1.0 / (std::min(w, 0.5) * std::min(w, 0.5)));
  }
  for (double w : {1e-8, 1e-4, 0.01, 0.5, 1.0}) {
    EXPECT_NEAR(ctx.m1(0.0, w) / -ctx.m_tilde(w), 1.0, 1e-8);
    double prev = ctx.m1(0.0, w);
    for (double tau = 0.5; tau <= 12.0; tau += 0.5) {
      const double cur = ctx.m1(tau, w);
      EXPECT_GE(cur, prev * (1 - 1e-12) - 1e-12) << tau << " " << w;
      prev = cur;
    }
  }
}

TEST_F(QuasiCauchyMoments, M1DecreasingInWeight) {
  for (double tau : {0.0, 2.0, 5.0, 9.0}) {
    double prev = ctx.m1(tau, 1e-7);
    for (double w = 1e-6; w <= 1.0; w *= 10.0) {
      const double cur = ctx.m1(tau, w);
      EXPECT_LT(cur, prev) << tau << " " << w;
      prev = cur;
    }
  }
}

TEST_F(QuasiCauchyMoments, LargeSignalPlateau) {
  const ThresholdContext tc(qc);
  const double w = 1e-4;
  const double wm1 = w * ctx.m1(1.5 * tc.zeta(w), w);
  EXPECT_GE(wm1, 0.8);
  EXPECT_LE(wm1, 1.0);
}

// m₂ reaches the 1/w² plateau for large τ, so the sharp bound is
// m₂ ≤ C·m₁/w for τ bounded away from 0; near τ = 0 it is far below 1/w.
TEST_F(QuasiCauchyMoments, M2AgainstFirstMoment) {
  for (double w : {1e-6, 1e-4, 1e-2}) {
    for (double tau : {0.0, 0.5, 1.0}) {
      EXPECT_LE(ctx.m2(tau, w), 1.0 / w) << tau << " " << w;
    }
    for (double tau : {3.0, 6.0, 10.0, 20.0}) {
      EXPECT_LE(w * ctx.m2(tau, w), 2.0 * ctx.m1(tau, w)) << tau << " " << w;
    }
  }
}

TEST_F(QuasiCauchyMoments, ExpectedScoreUnderNull) {
  std::mt19937_64 gen(99);
  std::normal_distribution<double> z;
  constexpr int draws = 100000;
  for (double w : {1e-3, 0.05, 0.5}) {
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double b = slabtest::beta_w(qc, z(gen), w);
      sum += b;
      sum2 += b * b;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
    EXPECT_NEAR(mean, -ctx.m_tilde(w), 4.0 * se) << w;
  }
}

TEST_F(QuasiCauchyMoments, WStar) {
  const auto big = ctx.solve_wstar(10000000, 10000);
  EXPECT_FALSE(big.saturated);
  EXPECT_NEAR(big.w, 0.0049066836977060662036, 1e-10);
  EXPECT_NEAR((1e7 - 1e4) * big.w * ctx.m_tilde(big.w) / 1e4, 1.0, 1e-7);
  EXPECT_LT(ctx.solve_wstar(10000000, 1000).w, big.w);
  const auto small = ctx.solve_wstar(10000, 10);
  EXPECT_GT(small.w, 10.0 / 10000);
  EXPECT_LT(small.w, 1.0);
  const auto full = ctx.solve_wstar(10, 9);
  EXPECT_TRUE(full.saturated);
  EXPECT_EQ(full.w, 1.0);
  EXPECT_THROW(ctx.solve_wstar(10, 10), DomainError);
  EXPECT_THROW(ctx.solve_wstar(10, 0), DomainError);
}

TEST_F(QuasiCauchyMoments, FnValues) {
  // (1 − w)/(1 + wβ) integrated above χ by 30-digit quadrature.
  EXPECT_NEAR(ctx.f_n(0.2, 1e-4), 0.68402797507528632, 1e-9);
  for (double w : {1e-6, 1e-4, 1e-2, 0.2}) {
    double prev = 0.0;
    for (double u = 0.02; u < std::min(0.98, 1.0 - w); u += 0.04) {
      const double f = ctx.f_n(u, w);
      EXPECT_GT(f, 0.0);
      EXPECT_LE(f, 1.0);
      EXPECT_GT(f, prev) << u << " " << w;
      prev = f;
    }
  }
  EXPECT_THROW(ctx.f_n(0.95, 0.2), DomainError);
  EXPECT_THROW(ctx.f_n(0.0, 0.2), DomainError);
}

// 1 − fₙ(0.2) scaled by ζ(w)²/log log(1/w) stays in 3.46..3.64 for
// w ∈ [1e-6, 1e-3] (reference quadrature); the band is frozen at [3, 4].
TEST_F(QuasiCauchyMoments, FnGapScaling) {
  const ThresholdContext tc(qc);
  for (double w : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const double z = tc.zeta(w);
    const double scaled = (1.0 - ctx.f_n(0.2, w)) * z * z / std::log(std::log(1.0 / w));
    EXPECT_GE(scaled, 3.0) << w;
    EXPECT_LE(scaled, 4.0) << w;
  }
}

TEST_F(QuasiCauchyMoments, FnLevelAtStrongSignalWeight) {
  const double w = ctx.solve_wstar(10000000, 10000).w;
  const double u = ctx.solve_f_n_level(0.2, w);
  EXPECT_GT(u, 0.2);
  EXPECT_LT(u, 0.4);
  EXPECT_NEAR(u * ctx.f_n(u, w), 0.2, 1e-9);
}

TEST(LaplaceMoments, BasicStructure) {
  const auto p = make_prior("laplace:0.5");
  const MomentContext ctx(*p);
  double prev = 0.0;
  for (double w = 1e-8; w <= 1.0; w *= 10.0) {
    const double m = ctx.m_tilde(w);
    EXPECT_GT(m, prev);
    prev = m;
    EXPECT_NEAR(ctx.m1(0.0, w) / -m, 1.0, 1e-8);
  }
}

}  // namespace
