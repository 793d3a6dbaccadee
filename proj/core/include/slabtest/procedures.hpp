#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slabtest/observation.hpp"
#include "slabtest/slab_prior.hpp"
#include "slabtest/weight_mmle.hpp"

namespace slabtest {

enum class ProcedureId {
  ebayes_l,
  ebayes_q,
  ebayes_q0,
  ebayes_hybrid,
  sc,
  mci,
  bh,
  bonferroni,
};

std::string_view to_string(ProcedureId id);
/// Throws DomainError listing the known identifiers.
ProcedureId parse_procedure_id(std::string_view name);
std::vector<std::string> known_procedures();

/// Result of one multiple-testing procedure on one batch.
struct TestOutcome {
  ProcedureId procedure = ProcedureId::ebayes_l;
  double t = 0.0;
  /// Spike weight plugged into the values; absent for BH and Bonferroni.
  std::optional<double> w_used;
  /// The values that were thresholded (ℓ-, q-, m- or p-values).
  std::vector<double> values;
  /// 1 where H₀,ᵢ is rejected.
  std::vector<std::uint8_t> reject;
  /// |x| cut-off equivalent to the rule, when it is a thresholding rule.
  std::optional<double> effective_abs_threshold;
  /// ωₙ for the EBayesq.0 / hybrid rules.
  std::optional<double> omega_n;
  /// True when the hybrid rule fell back to Bonferroni.
  bool used_bonferroni = false;
  /// True when w_used = 1, in which case every ℓ- and q-value is 0.
  bool degenerate_weight = false;

  std::size_t rejections() const noexcept;
};

/// A batch prepared for testing: cached log(g/φ)(Xᵢ) and the spike weight
/// shared by every procedure run on it. Holds references to prior and batch,
/// which must outlive it.
class TestingContext {
 public:
  /// Estimates ŵ by MMLE over [1/n, 1].
  TestingContext(const SlabPrior& prior, const ObservationBatch& batch);
  /// Uses the supplied weight instead of estimating it.
  TestingContext(const SlabPrior& prior, const ObservationBatch& batch,
                 WeightEstimate weight);
  /// Reuses a likelihood already built from batch.
  TestingContext(const SlabPrior& prior, const ObservationBatch& batch,
                 MarginalLikelihood likelihood, WeightEstimate weight);

  static TestingContext with_fixed_weight(const SlabPrior& prior,
                                          const ObservationBatch& batch, double w);

  const SlabPrior& prior() const noexcept { return *prior_; }
  const ObservationBatch& batch() const noexcept { return *batch_; }
  const MarginalLikelihood& likelihood() const noexcept { return likelihood_; }
  const WeightEstimate& weight() const noexcept { return weight_; }
  double w() const noexcept { return weight_.w_hat; }

 private:
  const SlabPrior* prior_;
  const ObservationBatch* batch_;
  MarginalLikelihood likelihood_;
  WeightEstimate weight_;
};

// Per-coordinate posterior quantities at weight w.

/// ℓ(x; w) = (1 − w)φ(x) / ((1 − w)φ(x) + w g(x)).
std::vector<double> l_values(const SlabPrior& prior, const ObservationBatch& batch,
                             double w);
/// ℓ-values from precomputed log(g/φ)(Xᵢ).
std::vector<double> l_values_from_log_ratio(std::span<const double> log_ratio,
                                            double w);
/// q(x; w) = (1 − w)Φ̄(|x|) / ((1 − w)Φ̄(|x|) + w Ḡ(|x|)).
std::vector<double> q_values(const SlabPrior& prior, const ObservationBatch& batch,
                             double w);
/// m(x; w) = ((1 − w)φ(x) + w g₋(|x|)) / ((1 − w)φ(x) + w g(x)); w < 1.
std::vector<double> m_values(const SlabPrior& prior, const ObservationBatch& batch,
                             double w);

/// ωₙ = L / (n Ḡ(√(2.1 log n))).
double omega_n(const SlabPrior& prior, std::size_t n, double L);
/// Lₙ = log log n. Throws DomainError for n ≤ 2.
double default_omega_scale(std::size_t n);

// Procedures on a prepared context.

TestOutcome ebayes_l(const TestingContext& ctx, double t);
TestOutcome ebayes_q(const TestingContext& ctx, double t);
TestOutcome ebayes_q0(const TestingContext& ctx, double t,
                      std::optional<double> L = std::nullopt);
TestOutcome ebayes_hybrid(const TestingContext& ctx, double t,
                          std::optional<double> L = std::nullopt);
TestOutcome sc_procedure(const TestingContext& ctx, double t);
TestOutcome mci_procedure(const TestingContext& ctx, double t);

// Convenience forms that estimate ŵ by MMLE over [1/n, 1].

TestOutcome ebayes_l(const SlabPrior& prior, const ObservationBatch& batch, double t);
TestOutcome ebayes_q(const SlabPrior& prior, const ObservationBatch& batch, double t);
TestOutcome ebayes_q0(const SlabPrior& prior, const ObservationBatch& batch, double t,
                      std::optional<double> L = std::nullopt);
TestOutcome ebayes_hybrid(const SlabPrior& prior, const ObservationBatch& batch,
                          double t, std::optional<double> L = std::nullopt);
TestOutcome sc_procedure(const SlabPrior& prior, const ObservationBatch& batch,
                         double t);
TestOutcome mci_procedure(const SlabPrior& prior, const ObservationBatch& batch,
                          double t);

// Frequentist baselines on two-sided p-values.

TestOutcome bh_procedure(const ObservationBatch& batch, double alpha);
TestOutcome bonferroni_procedure(const ObservationBatch& batch, double alpha);

/// Procedure identifier plus its level and optional ωₙ scale.
struct ProcedureSpec {
  ProcedureId id = ProcedureId::ebayes_q;
  double t = 0.1;
  std::optional<double> L;

  friend bool operator==(const ProcedureSpec&, const ProcedureSpec&) = default;
};

/// Checks t against the procedure's admissible range; throws DomainError.
void validate(const ProcedureSpec& spec);

TestOutcome run_procedure(const TestingContext& ctx, const ProcedureSpec& spec);

}  // namespace slabtest
