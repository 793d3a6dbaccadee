#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace slabtest {

/// Observation vector X ∈ ℝⁿ, optionally with the true mean vector θ₀ when it
/// comes from a simulation.
class ObservationBatch {
 public:
  /// Throws DomainError if x is empty, holds a non-finite value, or truth has
  /// a different length.
  explicit ObservationBatch(std::vector<double> x,
                            std::optional<std::vector<double>> truth = std::nullopt);

  std::size_t size() const noexcept { return x_.size(); }
  std::span<const double> x() const noexcept { return x_; }
  double operator[](std::size_t i) const noexcept { return x_[i]; }

  bool has_truth() const noexcept { return truth_.has_value(); }
  /// Empty span when no truth is attached.
  std::span<const double> truth() const noexcept;

  /// Number of nonzero entries of θ₀; 0 without truth.
  std::size_t sparsity() const noexcept;

 private:
  std::vector<double> x_;
  std::optional<std::vector<double>> truth_;
};

}  // namespace slabtest
