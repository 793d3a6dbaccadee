#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "slabtest/error.hpp"
#include "slabtest/metrics.hpp"
#include "slabtest/procedures.hpp"

using namespace slabtest;

namespace {

TestOutcome with_mask(std::vector<std::uint8_t> reject) {
  TestOutcome out;
  out.values.assign(reject.size(), 0.0);
  out.reject = std::move(reject);
  return out;
}

TEST(FdpFnp, Examples) {
  const std::vector<double> truth{5.0, 0.0, 0.0, 0.0};
  auto r = fdp_fnp(with_mask({1, 1, 0, 0}), truth);
  EXPECT_DOUBLE_EQ(r.fdp, 0.5);
  EXPECT_DOUBLE_EQ(r.fnp, 0.0);
  EXPECT_EQ(r.rejections, 2u);
  EXPECT_EQ(r.true_rejections, 1u);
  EXPECT_EQ(r.sigma0, 1u);
  EXPECT_EQ(r.n, 4u);

  r = fdp_fnp(with_mask({0, 0, 0, 0}), truth);
  EXPECT_EQ(r.fdp, 0.0);
  EXPECT_EQ(r.fnp, 1.0);

  const std::vector<double> null(4, 0.0);
  r = fdp_fnp(with_mask({1, 0, 1, 1}), null);
  EXPECT_EQ(r.fdp, 1.0);
  EXPECT_EQ(r.fnp, 0.0);

  r = fdp_fnp(with_mask({0, 0, 0, 0}), null);
  EXPECT_EQ(r.fdp, 0.0);
  EXPECT_EQ(r.fnp, 0.0);

  const std::vector<double> negative{-3.0, 0.0, 2.0};
  r = fdp_fnp(with_mask({1, 0, 0}), negative);
  EXPECT_EQ(r.fdp, 0.0);
  EXPECT_DOUBLE_EQ(r.fnp, 0.5);
}

TEST(FdpFnp, LengthMismatch) {
  const std::vector<double> truth{1.0, 0.0};
  EXPECT_THROW(fdp_fnp(with_mask({1, 0, 0}), truth), DomainError);
}

TEST(MakeRecord, Consistency) {
  const auto r = make_record(100, 10, 8, 6);
  EXPECT_DOUBLE_EQ(r.fdp, 2.0 / 8.0);
  EXPECT_DOUBLE_EQ(r.fnp, 4.0 / 10.0);
  EXPECT_THROW(make_record(100, 10, 5, 6), DomainError);
  EXPECT_THROW(make_record(100, 4, 8, 6), DomainError);
  EXPECT_THROW(make_record(5, 10, 8, 6), DomainError);
  EXPECT_THROW(make_record(5, 2, 8, 1), DomainError);
}

TEST(Aggregate, SingleRecordHasNoStandardError) {
  const std::vector<MetricsRecord> one{make_record(10, 2, 3, 1)};
  const auto agg = aggregate(one);
  EXPECT_DOUBLE_EQ(agg.fdr, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(agg.fnr, 0.5);
  EXPECT_FALSE(agg.fdr_se.has_value());
  EXPECT_FALSE(agg.fnr_se.has_value());
  EXPECT_EQ(agg.reps, 1u);
  EXPECT_DOUBLE_EQ(agg.mean_rejections, 3.0);
}

TEST(Aggregate, TwoRecordsHandComputed) {
  const std::vector<MetricsRecord> two{make_record(10, 1, 0, 0), make_record(10, 1, 2, 0)};
  const auto agg = aggregate(two);
  EXPECT_DOUBLE_EQ(agg.fdr, 0.5);
  ASSERT_TRUE(agg.fdr_se.has_value());
  EXPECT_DOUBLE_EQ(*agg.fdr_se, 0.5);
  EXPECT_DOUBLE_EQ(agg.fnr, 1.0);
  EXPECT_DOUBLE_EQ(*agg.fnr_se, 0.0);
  EXPECT_DOUBLE_EQ(agg.fwer, 0.5);
  EXPECT_DOUBLE_EQ(agg.mean_rejections, 1.0);
}

TEST(Aggregate, EmptyThrows) {
  const std::vector<MetricsRecord> none;
  EXPECT_THROW(aggregate(none), DomainError);
}

std::vector<MetricsRecord> random_records(std::size_t count, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::vector<MetricsRecord> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t sigma0 = gen() % 20;
    const std::size_t tr = sigma0 ? gen() % (sigma0 + 1) : 0;
    const std::size_t rej = tr + gen() % 5;
    out.push_back(make_record(1000, sigma0, rej, tr));
  }
  return out;
}

TEST(Aggregate, RiskAndPermutationInvariance) {
  auto records = random_records(500, 3);
  const auto a = aggregate(records);
  EXPECT_NEAR(a.risk, a.fdr + a.fnr, 1e-12);
  std::mt19937_64 gen(8);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(records.begin(), records.end(), gen);
    const auto b = aggregate(records);
    EXPECT_EQ(a.fdr, b.fdr);
    EXPECT_EQ(a.fnr, b.fnr);
    EXPECT_EQ(*a.fdr_se, *b.fdr_se);
    EXPECT_EQ(*a.fnr_se, *b.fnr_se);
    EXPECT_EQ(a.mean_rejections, b.mean_rejections);
  }
}

TEST(Aggregate, SampleStandardDeviation) {
  const auto records = random_records(200, 11);
  double mean = 0.0;
  for (const auto& r : records) mean += r.fdp;
  mean /= records.size();
  double ss = 0.0;
  for (const auto& r : records) ss += (r.fdp - mean) * (r.fdp - mean);
  const double se = std::sqrt(ss / (records.size() - 1)) / std::sqrt(records.size());
  const auto agg = aggregate(records);
  EXPECT_NEAR(agg.fdr, mean, 1e-14);
  EXPECT_NEAR(*agg.fdr_se, se, 1e-14);
}

// Under θ₀ = 0 every rejection is false, so FDR is the family-wise error rate.
TEST(Aggregate, GlobalNullFdrIsFamilyWiseError) {
  const QuasiCauchyPrior qc;
  std::mt19937_64 gen(123);
  std::normal_distribution<double> z;
  std::vector<MetricsRecord> records;
  int any = 0;
  const std::vector<double> truth(2000, 0.0);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<double> x(2000);
    for (auto& v : x) v = z(gen);
    const ObservationBatch b(x);
    const auto out = bh_procedure(b, 0.2);
    any += out.rejections() > 0;
    records.push_back(fdp_fnp(out, truth));
  }
  const auto agg = aggregate(records);
  EXPECT_DOUBLE_EQ(agg.fdr, any / 300.0);
  EXPECT_DOUBLE_EQ(agg.fwer, agg.fdr);
  EXPECT_GT(any, 0);
}

}  // namespace
