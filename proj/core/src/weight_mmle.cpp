#include "slabtest/weight_mmle.hpp"

#include <cmath>
#include <string>

#include "slabtest/error.hpp"
#include "slabtest/stdnorm.hpp"

namespace slabtest {
namespace {

constexpr int kMaxBisections = 120;
constexpr double kWeightTol = 1e-12;

void check_weight(double w, const char* where) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw DomainError(std::string(where) + ": weight must lie in [0, 1], got " +
                      std::to_string(w));
  }
}

inline double shrunk_beta(double b, double w) {
  if (std::isinf(b)) return 1.0 / w;
  return b / (1.0 + w * b);
}

}  // namespace

double beta_w(const SlabPrior& prior, double x, double w) {
  check_weight(w, "beta_w");
  return shrunk_beta(prior.beta(x), w);
}

MarginalLikelihood::MarginalLikelihood(const SlabPrior& prior,
                                       std::span<const double> x) {
  log_ratio_.reserve(x.size());
  beta_.reserve(x.size());
  for (double xi : x) {
    const double lr = prior.log_density_ratio(xi);
    log_ratio_.push_back(lr);
    beta_.push_back(std::expm1(lr));
    sum_log_phi_ += stdnorm::log_phi(xi);
  }
}

double MarginalLikelihood::score(double w) const {
  check_weight(w, "score");
  double s = 0.0;
  for (double b : beta_) s += shrunk_beta(b, w);
  return s;
}

double MarginalLikelihood::log_marginal(double w) const {
  check_weight(w, "log_marginal");
  if (w == 0.0) return sum_log_phi_;
  const double log_w = std::log(w);
  const double log_1mw = std::log1p(-w);
  double s = sum_log_phi_;
  for (double lr : log_ratio_) {
    // log((1 − w) + w e^{lr})
    const double a = log_1mw;
    const double b = log_w + lr;
    const double hi = std::max(a, b);
    s += hi + std::log1p(std::exp(std::min(a, b) - hi));
  }
  return s;
}

WeightEstimate MarginalLikelihood::estimate(double lower) const {
  if (!(lower > 0.0 && lower < 1.0)) {
    throw DomainError("estimate_weight: lower bound must lie in (0, 1), got " +
                      std::to_string(lower));
  }
  WeightEstimate est;
  est.lower = lower;

  const double s_lower = score(lower);
  if (s_lower <= 0.0) {
    est.w_hat = lower;
    est.at_lower_boundary = true;
    est.score_at_root = s_lower;
    return est;
  }
  const double s_upper = score(1.0);
  if (s_upper >= 0.0) {
    est.w_hat = 1.0;
    est.at_upper_boundary = true;
    est.score_at_root = s_upper;
    return est;
  }

  double lo = lower;
  double hi = 1.0;
  for (int it = 0; it < kMaxBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (score(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= kWeightTol * std::min(1.0, lo)) break;
  }
  est.w_hat = 0.5 * (lo + hi);
  est.score_at_root = score(est.w_hat);
  return est;
}

double score(const SlabPrior& prior, const ObservationBatch& batch, double w) {
  return MarginalLikelihood(prior, batch.x()).score(w);
}

double log_marginal(const SlabPrior& prior, const ObservationBatch& batch, double w) {
  return MarginalLikelihood(prior, batch.x()).log_marginal(w);
}

WeightEstimate estimate_weight(const SlabPrior& prior, const ObservationBatch& batch,
                               std::optional<double> lower) {
  const double lo = lower.value_or(1.0 / static_cast<double>(batch.size()));
  if (batch.size() == 1 && !lower) {
    // [1/n, 1] collapses to {1}.
    WeightEstimate est;
    est.w_hat = 1.0;
    est.lower = 1.0;
    est.at_upper_boundary = true;
    est.score_at_root = score(prior, batch, 1.0);
    return est;
  }
  return MarginalLikelihood(prior, batch.x()).estimate(lo);
}

double zeta_lower_bound(const SlabPrior& prior, std::size_t n) {
  if (n < 2) throw DomainError("zeta_lower_bound: n must be at least 2");
  const double b = prior.beta(std::sqrt(2.0 * std::log(static_cast<double>(n))));
  if (!(b > 0.0)) return 1.0;
  return std::min(1.0, 1.0 / b);
}

}  // namespace slabtest
