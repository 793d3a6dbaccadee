#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "slabtest/observation.hpp"
#include "slabtest/slab_prior.hpp"

namespace slabtest {

/// Outcome of maximising the marginal likelihood over [lower, 1].
struct WeightEstimate {
  double w_hat = 1.0;
  double lower = 0.0;
  bool at_lower_boundary = false;
  bool at_upper_boundary = false;
  /// S(w_hat); zero up to bisection precision for interior roots.
  double score_at_root = 0.0;

  bool interior() const noexcept {
    return !at_lower_boundary && !at_upper_boundary;
  }
};

/// β(x, w) = β(x) / (1 + w β(x)).
double beta_w(const SlabPrior& prior, double x, double w);

/// Marginal log-likelihood of the batch as a function of the spike weight.
///
/// β(Xᵢ) and log(g/φ)(Xᵢ) are computed once on construction; score and
/// log_marginal only combine the cached values. Immutable afterwards.
class MarginalLikelihood {
 public:
  MarginalLikelihood(const SlabPrior& prior, std::span<const double> x);

  std::size_t size() const noexcept { return log_ratio_.size(); }

  /// log(g/φ)(Xᵢ) for every coordinate.
  std::span<const double> log_ratio() const noexcept { return log_ratio_; }
  std::span<const double> beta() const noexcept { return beta_; }

  /// S(w) = Σ β(Xᵢ, w). Requires w ∈ [0, 1].
  double score(double w) const;

  /// L(w) = Σ log φ(Xᵢ) + Σ log(1 + w β(Xᵢ)). Requires w ∈ [0, 1].
  double log_marginal(double w) const;

  /// argmax of L over [lower, 1] via bisection on the decreasing score.
  WeightEstimate estimate(double lower) const;

 private:
  std::vector<double> log_ratio_;
  std::vector<double> beta_;
  double sum_log_phi_ = 0.0;
};

double score(const SlabPrior& prior, const ObservationBatch& batch, double w);
double log_marginal(const SlabPrior& prior, const ObservationBatch& batch, double w);

/// MMLE of the spike weight over [lower, 1]; lower defaults to 1/n.
WeightEstimate estimate_weight(const SlabPrior& prior, const ObservationBatch& batch,
                               std::optional<double> lower = std::nullopt);

/// Alternative lower bound ζ⁻¹(√(2 log n)) = 1/β(√(2 log n)).
double zeta_lower_bound(const SlabPrior& prior, std::size_t n);

}  // namespace slabtest
