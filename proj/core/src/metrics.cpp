#include "slabtest/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "slabtest/error.hpp"

namespace slabtest {
namespace {

struct MeanSe {
  double mean = 0.0;
  std::optional<double> se;
};

// Values are summed in sorted order so the result does not depend on the
// order of the records.
template <class Get>
MeanSe mean_se(std::span<const MetricsRecord> records, Get get) {
  std::vector<double> v(records.size());
  std::transform(records.begin(), records.end(), v.begin(), get);
  std::sort(v.begin(), v.end());
  const double k = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  MeanSe out;
  out.mean = sum / k;
  if (v.size() >= 2) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
  }
  return out;
}

}  // namespace

MetricsRecord make_record(std::size_t n, std::size_t sigma0, std::size_t rejections,
                          std::size_t true_rejections) {
  if (true_rejections > std::min(rejections, sigma0) || rejections > n || sigma0 > n) {
    throw DomainError("metrics: inconsistent counts (n=" + std::to_string(n) +
                      ", sigma0=" + std::to_string(sigma0) +
                      ", rejections=" + std::to_string(rejections) +
                      ", true_rejections=" + std::to_string(true_rejections) + ")");
  }
  MetricsRecord rec;
  rec.n = n;
  rec.sigma0 = sigma0;
  rec.rejections = rejections;
  rec.true_rejections = true_rejections;
  rec.fdp = static_cast<double>(rejections - true_rejections) /
            static_cast<double>(std::max<std::size_t>(rejections, 1));
  rec.fnp = static_cast<double>(sigma0 - true_rejections) /
            static_cast<double>(std::max<std::size_t>(sigma0, 1));
  return rec;
}

MetricsRecord fdp_fnp(const TestOutcome& outcome, std::span<const double> truth) {
  if (truth.size() != outcome.reject.size()) {
    throw DomainError("fdp_fnp: truth has length " + std::to_string(truth.size()) +
                      " but the outcome has " + std::to_string(outcome.reject.size()));
  }
  std::size_t rejections = 0;
  std::size_t true_rejections = 0;
  std::size_t sigma0 = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool signal = truth[i] != 0.0;
    const bool rejected = outcome.reject[i] != 0;
    sigma0 += signal;
    rejections += rejected;
    true_rejections += signal && rejected;
  }
  return make_record(truth.size(), sigma0, rejections, true_rejections);
}

AggregateMetrics aggregate(std::span<const MetricsRecord> records) {
  if (records.empty()) throw DomainError("aggregate: empty record list");
  AggregateMetrics out;
  out.reps = records.size();
  const auto fdr = mean_se(records, [](const MetricsRecord& r) { return r.fdp; });
  const auto fnr = mean_se(records, [](const MetricsRecord& r) { return r.fnp; });
  out.fdr = fdr.mean;
  out.fdr_se = fdr.se;
  out.fnr = fnr.mean;
  out.fnr_se = fnr.se;
  out.risk = out.fdr + out.fnr;
  double rejections = 0.0;
  std::size_t any_false = 0;
  for (const auto& r : records) {
    rejections += static_cast<double>(r.rejections);
    any_false += r.rejections > r.true_rejections;
  }
  const double k = static_cast<double>(records.size());
  out.mean_rejections = rejections / k;
  out.fwer = static_cast<double>(any_false) / k;
  return out;
}

}  // namespace slabtest
