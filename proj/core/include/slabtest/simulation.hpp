#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slabtest/metrics.hpp"
#include "slabtest/observation.hpp"
#include "slabtest/procedures.hpp"
#include "slabtest/slab_prior.hpp"

namespace slabtest {

/// How the nonzero means of a simulated batch are chosen.
enum class Scenario {
  /// θᵢ = μ for i < s.
  constant,
  /// θᵢ ~ Uniform(0, 2μ) for i < s.
  uniform_random,
  /// θᵢ = μ·√(2 log(n/s)) for i < s; μ plays the role of the multiplier.
  large_class,
  /// θᵢ drawn i.i.d. from the spike-and-slab prior with weight w; s unused.
  bayes,
};

/// How the spike weight fed to the procedures is obtained.
enum class WeightPolicy {
  /// MMLE over [1/n, 1].
  mmle,
  /// MMLE over [ζ⁻¹(√(2 log n)), 1].
  mmle_wn,
  /// The cell's w.
  fixed,
  /// The deterministic w solving s = (n − s)·w·m̃(w).
  wstar,
};

std::string_view to_string(Scenario s);
std::string_view to_string(WeightPolicy p);
/// Both throw DomainError listing the accepted names.
Scenario parse_scenario(std::string_view name);
WeightPolicy parse_weight_policy(std::string_view name);

/// One Monte Carlo configuration.
struct SimulationCell {
  std::size_t n = 10000;
  std::size_t s = 10;
  double mu = 0.0;
  Scenario scenario = Scenario::constant;
  std::string prior = "quasi-cauchy";
  std::vector<ProcedureSpec> procedures;
  std::size_t reps = 2000;
  std::uint64_t seed = 0;
  WeightPolicy w_policy = WeightPolicy::mmle;
  /// Weight for the fixed policy and the bayes scenario.
  std::optional<double> w;

  friend bool operator==(const SimulationCell&, const SimulationCell&) = default;
};

/// Throws DomainError describing the first violated constraint.
void validate(const SimulationCell& cell);

/// Short human-readable description used in diagnostics.
std::string describe(const SimulationCell& cell);

/// Hash of the fields that determine the data (procedures excluded), so
/// cells differing only in their procedures see identical batches.
std::uint64_t data_hash(const SimulationCell& cell);

/// Replication `rep` of the cell: θ₀ per scenario, X = θ₀ + N(0, 1) noise.
/// Depends only on (seed, data fields, rep).
ObservationBatch generate(const SimulationCell& cell, std::size_t rep);
ObservationBatch generate(const SimulationCell& cell, const SlabPrior& prior,
                          std::size_t rep);

/// Weight used for every replication under the fixed and wstar policies;
/// absent for the MMLE policies.
std::optional<double> cell_weight(const SimulationCell& cell, const SlabPrior& prior);

/// Procedure failure inside a replication.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, std::string cell, std::size_t rep)
      : std::runtime_error(what), cell_(std::move(cell)), rep_(rep) {}

  const std::string& cell() const noexcept { return cell_; }
  std::size_t rep() const noexcept { return rep_; }

 private:
  std::string cell_;
  std::size_t rep_;
};

/// Aggregates of one cell, in the order of cell.procedures.
struct CellResult {
  SimulationCell cell;
  std::vector<AggregateMetrics> metrics;
};

/// Runs every replication of the cell on up to `workers` threads. The result
/// does not depend on the number of workers. A failing replication stops the
/// run and is rethrown as SimulationError for the lowest failing rep.
CellResult run_cell(const SimulationCell& cell, std::size_t workers = 1);

/// Runs the cells in order, stopping at the first error.
std::vector<CellResult> sweep(const std::vector<SimulationCell>& cells,
                              std::size_t workers = 1);

/// Signal grid {0.01, 0.5, 1, 2, …, 10}.
std::vector<double> mu_grid();

/// Preset sweeps: "1" and "3" (ℓ- and q-value rules; constant and uniform
/// alternatives), "2" and "4" (the q0 and hybrid rules), "sc" (SC rule) and
/// "sc-table" (SC at n = 10⁷ with the wstar weight). Throws DomainError for
/// an unknown name.
std::vector<SimulationCell> figure_preset(std::string_view name);
std::vector<std::string> known_figures();

}  // namespace slabtest
