#include "slabtest/observation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slabtest/error.hpp"

namespace slabtest {

ObservationBatch::ObservationBatch(std::vector<double> x,
                                   std::optional<std::vector<double>> truth)
    : x_(std::move(x)), truth_(std::move(truth)) {
  if (x_.empty()) throw DomainError("ObservationBatch: empty observation vector");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i])) {
      throw DomainError("ObservationBatch: non-finite observation at index " +
                        std::to_string(i));
    }
  }
  if (truth_ && truth_->size() != x_.size()) {
    throw DomainError("ObservationBatch: truth has length " +
                      std::to_string(truth_->size()) + ", expected " +
                      std::to_string(x_.size()));
  }
}

std::span<const double> ObservationBatch::truth() const noexcept {
  if (!truth_) return {};
  return *truth_;
}

std::size_t ObservationBatch::sparsity() const noexcept {
  if (!truth_) return 0;
  return static_cast<std::size_t>(
      std::count_if(truth_->begin(), truth_->end(), [](double v) { return v != 0.0; }));
}

}  // namespace slabtest
