#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "slabtest/error.hpp"
#include "slabtest/slab_prior.hpp"
#include "slabtest/stdnorm.hpp"

using namespace slabtest;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<std::shared_ptr<const SlabPrior>> all_priors() {
  return {make_prior("quasi-cauchy"), make_prior("laplace:0.5"), make_prior("laplace:2"),
          make_prior("quadrature:cauchy")};
}

TEST(MakePrior, Identifiers) {
  EXPECT_EQ(make_prior("quasi-cauchy")->id(), "quasi-cauchy");
  EXPECT_EQ(make_prior("laplace:0.5")->id(), "laplace:0.5");
  EXPECT_EQ(make_prior("quadrature:laplace:0.5")->id(), "quadrature:laplace:0.5");
  EXPECT_THROW(make_prior("cauchy-exact"), DomainError);
  EXPECT_THROW(make_prior("laplace:-1"), DomainError);
  EXPECT_THROW(make_prior("laplace:abc"), DomainError);
  try {
    make_prior("cauchy-exact");
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("quasi-cauchy"), std::string::npos);
  }
}

TEST(QuasiCauchy, DensityNearZero) {
  const QuasiCauchyPrior qc;
  EXPECT_NEAR(qc.density(0.0), 0.19947114020071635, 1e-15);
  // Series branch and direct formula meet smoothly.
  for (double x : {1e-8, 5e-4, 9.99e-4, 1.001e-3, 2e-3}) {
    EXPECT_LT(rel_err(qc.density(x), oracle::qc_g(x)), 1e-9) << x;
  }
  EXPECT_EQ(qc.density(-1.7), qc.density(1.7));
  EXPECT_NEAR(make_prior("quadrature:quasi-cauchy")->density(0.0), qc.density(0.0), 1e-10);
}

TEST(QuasiCauchy, BetaClosedForm) {
  const QuasiCauchyPrior qc;
  EXPECT_NEAR(qc.beta(0.0), -0.5, 1e-15);
  EXPECT_LT(rel_err(qc.beta(2.0), 0.59726402473266255681), 1e-13);
  for (double x : {0.3, 1.0, 4.0, 5.5, 9.0, 20.0}) {
    EXPECT_LT(rel_err(qc.beta(x), oracle::qc_beta(x)), 1e-12) << x;
  }
}

TEST(QuasiCauchy, TailClosedFormMatchesQuadrature) {
  const QuasiCauchyPrior qc;
  EXPECT_NEAR(qc.tail(5.0), 0.079788445387955467922, 1e-12);
  // Independent check: Simpson on [5, 400] plus the 1/x² asymptotic tail.
  const double body = oracle::simpson(oracle::qc_g, 5.0, 400.0, 400000);
  const double rest = oracle::phi(0.0) / 400.0;
  EXPECT_NEAR(qc.tail(5.0), body + rest, 1e-7);
}

TEST(QuasiCauchy, RawDensity) {
  const QuasiCauchyPrior qc;
  EXPECT_NEAR(qc.raw_density(0.0), 0.3989422804014327, 1e-15);
  for (double u : {0.5, 2.0, 7.0, 15.0}) {
    EXPECT_LT(rel_err(qc.raw_density(u), oracle::qc_gamma(u)), 1e-11) << u;
  }
  // ∫γ = 1: Simpson on [0, 20] plus the asymptotic tail φ(0)(1/u² − 3/u⁴ + 15/u⁶).
  const double body = oracle::simpson([&](double u) { return qc.raw_density(u); }, 0.0, 20.0,
                                      200000);
  const double L = 20.0;
  const double rest = oracle::phi(0.0) * (1.0 / L - 1.0 / std::pow(L, 3) + 3.0 / std::pow(L, 5));
  EXPECT_NEAR(2.0 * (body + rest), 1.0, 1e-8);
}

TEST(Laplace, ClosedForms) {
  const LaplacePrior lp(0.5);
  EXPECT_EQ(lp.raw_density(0.0), 0.25);
  EXPECT_NEAR(lp.density(0.0), 0.17480941736019903491, 1e-6);
  EXPECT_LT(rel_err(lp.density(0.0), 0.17480941736019903491), 1e-13);
  EXPECT_LT(rel_err(lp.tail(3.0), 0.12639397732668949972), 1e-12);
  EXPECT_LT(rel_err(lp.half_conv_neg(2.0), 0.0047817789406494317519), 1e-12);
  // γ ⋆ φ at 0 by Simpson as an independent check.
  const double g0 = oracle::simpson(
      [](double u) { return 0.25 * std::exp(-0.5 * std::abs(u)) * oracle::phi(u); }, -40.0,
      40.0, 400000);
  EXPECT_NEAR(lp.density(0.0), g0, 1e-10);
}

TEST(AllPriors, TailAtZeroAndSymmetry) {
  for (const auto& p : all_priors()) {
    EXPECT_NEAR(p->tail(0.0), 0.5, 1e-10) << p->id();
    for (double x : {0.3, 2.0, 6.0}) {
      EXPECT_NEAR(p->density(x), p->density(-x), 1e-15 * p->density(x)) << p->id();
      EXPECT_NEAR(p->raw_density(x), p->raw_density(-x), 1e-15) << p->id();
    }
  }
}

TEST(AllPriors, HalfConvolution) {
  for (const auto& p : all_priors()) {
    EXPECT_NEAR(p->half_conv_neg(0.0), 0.5 * p->density(0.0), 1e-10) << p->id();
    const double gamma0 = p->raw_density(0.0);
    for (double x = 0.0; x <= 8.0; x += 0.25) {
      const double gm = p->half_conv_neg(x);
      const double sum = gm + p->half_conv_neg(-x);
      EXPECT_LT(rel_err(sum, p->density(x)), 1e-8) << p->id() << " x=" << x;
      // γ(0)Φ̄(x) ≥ g₋(x) ≥ γ(−1)(Φ̄(x) − Φ̄(x + 1)).
      EXPECT_LE(gm, gamma0 * stdnorm::upper_tail(x) * (1 + 1e-10)) << p->id() << " x=" << x;
      EXPECT_GE(gm, p->raw_density(-1.0) *
                        (stdnorm::upper_tail(x) - stdnorm::upper_tail(x + 1.0)))
          << p->id() << " x=" << x;
      // The sharper γ(0)φ(x)/2 form needs Φ̄(x)/φ(x) ≤ 1/2.
      if (stdnorm::mills_ratio(x) <= 0.5) {
        EXPECT_LE(gm, 0.5 * gamma0 * stdnorm::phi(x)) << p->id() << " x=" << x;
      }
    }
  }
}

TEST(AllPriors, HalfPhiBoundFailsNearZero) {
  // g₋(0) = g(0)/2 exceeds γ(0)φ(0)/2 for both shipped slabs.
  for (const char* id : {"quasi-cauchy", "laplace:0.5"}) {
    const auto p = make_prior(id);
    EXPECT_GT(p->half_conv_neg(0.0), 0.5 * p->raw_density(0.0) * stdnorm::phi(0.0)) << id;
  }
}

TEST(AllPriors, ClosedFormsAgreeWithQuadrature) {
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"quasi-cauchy", "quadrature:quasi-cauchy"}, {"laplace:0.5", "quadrature:laplace:0.5"}};
  for (const auto& [closed_id, quad_id] : pairs) {
    const auto closed = make_prior(closed_id);
    const auto quad = make_prior(quad_id);
    for (double x = 0.5; x <= 10.0; x += 0.5) {
      EXPECT_LT(rel_err(closed->density(x), quad->density(x)), 1e-7) << closed_id << " " << x;
      EXPECT_LT(rel_err(closed->tail(x), quad->tail(x)), 1e-7) << closed_id << " " << x;
      EXPECT_LT(rel_err(closed->half_conv_neg(x), quad->half_conv_neg(x)), 1e-7)
          << closed_id << " " << x;
    }
  }
}

TEST(AllPriors, MonotoneRatios) {
  for (const auto& p : all_priors()) {
    double prev_ratio = p->log_density_ratio(0.0);
    double prev_tail_ratio = 0.0;
    EXPECT_LT(p->density_ratio(0.0), 1.0) << p->id();
    for (int i = 1; i <= 1000; ++i) {
      const double x = 10.0 * i / 1000.0;
      const double r = p->log_density_ratio(x);
      EXPECT_GT(r, prev_ratio) << p->id() << " x=" << x;
      prev_ratio = r;
      const double tr = p->log_tail(x) - stdnorm::log_upper_tail(x);
      EXPECT_GT(tr, prev_tail_ratio) << p->id() << " x=" << x;
      prev_tail_ratio = tr;
    }
  }
}

TEST(AllPriors, BetaIncreasingAndLogSpaceConsistent) {
  for (const auto& p : all_priors()) {
    double prev = p->beta(0.0);
    EXPECT_GT(prev, -1.0);
    for (double x = 0.05; x <= 12.0; x += 0.05) {
      const double b = p->beta(x);
      EXPECT_GT(b, prev) << p->id() << " x=" << x;
      prev = b;
    }
    EXPECT_TRUE(std::isfinite(p->log_density_ratio(60.0))) << p->id();
  }
}

TEST(AllPriors, TailLaw) {
  for (const auto& p : all_priors()) {
    const double kappa = p->tail_index();
    for (double y = 5.0; y <= 30.0; y += 1.0) {
      const double ratio = p->tail(y) / (p->density(y) * std::pow(y, kappa - 1.0));
      EXPECT_GE(ratio, 1.0 / 3.0) << p->id() << " y=" << y;
      EXPECT_LE(ratio, 3.0) << p->id() << " y=" << y;
    }
  }
  EXPECT_EQ(QuasiCauchyPrior().tail_index(), 2.0);
  EXPECT_EQ(QuasiCauchyPrior().lipschitz(), 1.0);
  EXPECT_EQ(LaplacePrior(0.5).lipschitz(), 0.5);
  EXPECT_EQ(LaplacePrior(0.5).tail_index(), 1.0);
}

// Empirical exceedance frequencies of the samplers against Γ̄.
TEST(AllPriors, SamplerMatchesSlabTail) {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::vector<std::pair<std::string, std::unique_ptr<SlabKernel>>> kernels = [] {
    std::vector<std::pair<std::string, std::unique_ptr<SlabKernel>>> v;
    v.emplace_back("quasi-cauchy", make_quasi_cauchy_kernel());
    v.emplace_back("laplace:0.5", make_laplace_kernel(0.5));
    return v;
  }();
  for (const auto& [id, kernel] : kernels) {
    const auto prior = make_prior(id);
    const int draws = 200000;
    for (double c : {0.5, 1.0, 3.0, 10.0}) {
      int hits = 0;
      gen.seed(99);
      for (int i = 0; i < draws; ++i) {
        double u1 = unif(gen), u2 = unif(gen);
        if (u1 == 0.0) u1 = 0.5;
        hits += std::abs(prior->sample(u1, u2)) > c;
      }
      const double expected = 2.0 * kernel->tail(c);
      const double sd = std::sqrt(expected * (1.0 - expected) / draws);
      EXPECT_NEAR(static_cast<double>(hits) / draws, expected, 4.0 * sd) << id << " c=" << c;
    }
  }
}

}  // namespace
