#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "slabtest/procedures.hpp"

namespace slabtest {

/// Error proportions of one replication.
struct MetricsRecord {
  double fdp = 0.0;
  double fnp = 0.0;
  std::size_t rejections = 0;
  std::size_t true_rejections = 0;
  std::size_t n = 0;
  std::size_t sigma0 = 0;
};

/// Builds a record from counts; throws DomainError on inconsistent counts.
MetricsRecord make_record(std::size_t n, std::size_t sigma0, std::size_t rejections,
                          std::size_t true_rejections);

/// FDP and FNP of a rejection mask against θ₀ (nonzero entries are signals).
MetricsRecord fdp_fnp(const TestOutcome& outcome, std::span<const double> truth);

/// Monte Carlo summary of a list of records.
struct AggregateMetrics {
  double fdr = 0.0;
  double fnr = 0.0;
  /// Sample standard deviation over √reps; absent when reps < 2.
  std::optional<double> fdr_se;
  std::optional<double> fnr_se;
  std::size_t reps = 0;
  double mean_rejections = 0.0;
  /// FDR + FNR.
  double risk = 0.0;
  /// Fraction of replications with at least one false rejection.
  double fwer = 0.0;
};

/// Throws DomainError for an empty list.
AggregateMetrics aggregate(std::span<const MetricsRecord> records);

}  // namespace slabtest
