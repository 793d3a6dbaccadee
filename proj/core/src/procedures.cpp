#include "slabtest/procedures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "slabtest/error.hpp"
#include "slabtest/stdnorm.hpp"
#include "slabtest/thresholds.hpp"

namespace slabtest {
namespace {

constexpr std::array<std::pair<ProcedureId, std::string_view>, 8> kNames{{
    {ProcedureId::ebayes_l, "ebayes-l"},
    {ProcedureId::ebayes_q, "ebayes-q"},
    {ProcedureId::ebayes_q0, "ebayes-q0"},
    {ProcedureId::ebayes_hybrid, "ebayes-hybrid"},
    {ProcedureId::sc, "sc"},
    {ProcedureId::mci, "mci"},
    {ProcedureId::bh, "bh"},
    {ProcedureId::bonferroni, "bonferroni"},
}};

void check_level(double t, const char* where) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError(std::string(where) + ": level must lie in (0, 1), got " +
                      std::to_string(t));
  }
}

void check_weight(double w, const char* where) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw DomainError(std::string(where) + ": weight must lie in [0, 1], got " +
                      std::to_string(w));
  }
}

// log(w / (1 − w)), ±inf at the endpoints.
double log_odds(double w) {
  if (w == 0.0) return -std::numeric_limits<double>::infinity();
  if (w == 1.0) return std::numeric_limits<double>::infinity();
  return std::log(w) - std::log1p(-w);
}

// 1 / (1 + e^z).
double logistic_complement(double z) {
  if (z > 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

std::vector<std::uint8_t> mask_at_most(std::span<const double> values, double t) {
  std::vector<std::uint8_t> mask(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mask[i] = values[i] <= t;
  return mask;
}

std::vector<double> q_values_impl(const SlabPrior& prior, std::span<const double> x,
                                  double w) {
  const double lo = log_odds(w);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    out[i] = logistic_complement(lo + prior.log_tail(a) - stdnorm::log_upper_tail(a));
  }
  return out;
}

std::vector<double> m_values_impl(const SlabPrior& prior, std::span<const double> x,
                                  std::span<const double> log_ratio, double w) {
  if (!(w >= 0.0 && w < 1.0)) {
    throw DomainError("m_values: weight must lie in [0, 1), got " + std::to_string(w));
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    // Numerator and denominator divided by φ(x).
    const double ratio = std::exp(log_ratio[i]);
    const double neg = prior.half_conv_neg_ratio(std::abs(x[i]));
    const double num = (1.0 - w) + w * neg;
    const double den = (1.0 - w) + w * ratio;
    out[i] = std::isinf(den) ? 0.0 : std::min(1.0, num / den);
  }
  return out;
}

std::vector<double> p_values(std::span<const double> x) {
  std::vector<double> p(x.size());
  std::transform(x.begin(), x.end(), p.begin(), stdnorm::p_value);
  return p;
}

double resolve_L(std::size_t n, std::optional<double> L) {
  if (!L) return default_omega_scale(n);
  if (!(std::isfinite(*L) && *L > 0.0)) {
    throw DomainError("omega scale L must be positive, got " + std::to_string(*L));
  }
  return *L;
}

// Indices of the k smallest values, ties broken by index.
std::vector<std::size_t> ascending_order(std::span<const double> values,
                                         std::vector<std::size_t> idx) {
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
  return idx;
}

// Largest k with (v₍₁₎ + … + v₍ₖ₎) ≤ k·t over the given ascending order.
std::size_t largest_running_mean_prefix(std::span<const double> values,
                                        std::span<const std::size_t> order, double t) {
  long double sum = 0.0L;
  std::size_t k_hat = 0;
  for (std::size_t k = 1; k <= order.size(); ++k) {
    sum += values[order[k - 1]];
    if (sum <= static_cast<long double>(t) * static_cast<long double>(k)) k_hat = k;
  }
  return k_hat;
}

}  // namespace

std::string_view to_string(ProcedureId id) {
  for (const auto& [key, name] : kNames) {
    if (key == id) return name;
  }
  return "unknown";
}

ProcedureId parse_procedure_id(std::string_view name) {
  for (const auto& [key, n] : kNames) {
    if (n == name) return key;
  }
  std::string msg = "unknown procedure '" + std::string(name) + "'; known procedures:";
  for (const auto& [key, n] : kNames) msg += " " + std::string(n);
  throw DomainError(msg);
}

std::vector<std::string> known_procedures() {
  std::vector<std::string> out;
  for (const auto& [key, name] : kNames) out.emplace_back(name);
  return out;
}

std::size_t TestOutcome::rejections() const noexcept {
  return static_cast<std::size_t>(std::count(reject.begin(), reject.end(), 1));
}

// ------------------------------------------------------------ TestingContext

TestingContext::TestingContext(const SlabPrior& prior, const ObservationBatch& batch)
    : prior_(&prior), batch_(&batch), likelihood_(prior, batch.x()) {
  if (batch.size() == 1) {
    weight_.w_hat = 1.0;
    weight_.lower = 1.0;
    weight_.at_upper_boundary = true;
    weight_.score_at_root = likelihood_.score(1.0);
  } else {
    weight_ = likelihood_.estimate(1.0 / static_cast<double>(batch.size()));
  }
}

TestingContext::TestingContext(const SlabPrior& prior, const ObservationBatch& batch,
                               WeightEstimate weight)
    : prior_(&prior), batch_(&batch), likelihood_(prior, batch.x()), weight_(weight) {
  check_weight(weight_.w_hat, "TestingContext");
}

TestingContext::TestingContext(const SlabPrior& prior, const ObservationBatch& batch,
                               MarginalLikelihood likelihood, WeightEstimate weight)
    : prior_(&prior), batch_(&batch), likelihood_(std::move(likelihood)), weight_(weight) {
  if (likelihood_.size() != batch.size()) {
    throw DomainError("TestingContext: likelihood and batch sizes differ");
  }
  check_weight(weight_.w_hat, "TestingContext");
}

TestingContext TestingContext::with_fixed_weight(const SlabPrior& prior,
                                                 const ObservationBatch& batch,
                                                 double w) {
  WeightEstimate est;
  est.w_hat = w;
  est.lower = w;
  return TestingContext(prior, batch, est);
}

// -------------------------------------------------------------- value vectors

std::vector<double> l_values_from_log_ratio(std::span<const double> log_ratio,
                                            double w) {
  check_weight(w, "l_values");
  const double lo = log_odds(w);
  std::vector<double> out(log_ratio.size());
  for (std::size_t i = 0; i < log_ratio.size(); ++i) {
    out[i] = logistic_complement(lo + log_ratio[i]);
  }
  return out;
}

std::vector<double> l_values(const SlabPrior& prior, const ObservationBatch& batch,
                             double w) {
  check_weight(w, "l_values");
  std::vector<double> lr(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) lr[i] = prior.log_density_ratio(batch[i]);
  return l_values_from_log_ratio(lr, w);
}

std::vector<double> q_values(const SlabPrior& prior, const ObservationBatch& batch,
                             double w) {
  check_weight(w, "q_values");
  return q_values_impl(prior, batch.x(), w);
}

std::vector<double> m_values(const SlabPrior& prior, const ObservationBatch& batch,
                             double w) {
  std::vector<double> lr(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) lr[i] = prior.log_density_ratio(batch[i]);
  return m_values_impl(prior, batch.x(), lr, w);
}

double default_omega_scale(std::size_t n) {
  if (n <= 2) {
    throw DomainError("omega_n: log log n requires n > 2, got n=" + std::to_string(n));
  }
  return std::log(std::log(static_cast<double>(n)));
}

double omega_n(const SlabPrior& prior, std::size_t n, double L) {
  if (n <= 2) {
    throw DomainError("omega_n: requires n > 2, got n=" + std::to_string(n));
  }
  const double dn = static_cast<double>(n);
  return L / (dn * prior.tail(std::sqrt(2.1 * std::log(dn))));
}

// ----------------------------------------------------------------- procedures

TestOutcome ebayes_l(const TestingContext& ctx, double t) {
  check_level(t, "ebayes_l");
  TestOutcome out;
  out.procedure = ProcedureId::ebayes_l;
  out.t = t;
  const double w = ctx.w();
  out.w_used = w;
  out.values = l_values_from_log_ratio(ctx.likelihood().log_ratio(), w);
  out.reject = mask_at_most(out.values, t);
  if (w >= 1.0) {
    out.degenerate_weight = true;
    out.effective_abs_threshold = 0.0;
  } else if (w > 0.0) {
    const ThresholdContext thresholds(ctx.prior());
    const double r = mixing_ratio(w, t);
    out.effective_abs_threshold =
        r >= thresholds.xi_upper_bound() ? 0.0 : thresholds.xi(r);
  }
  return out;
}

TestOutcome ebayes_q(const TestingContext& ctx, double t) {
  check_level(t, "ebayes_q");
  TestOutcome out;
  out.procedure = ProcedureId::ebayes_q;
  out.t = t;
  const double w = ctx.w();
  out.w_used = w;
  out.values = q_values_impl(ctx.prior(), ctx.batch().x(), w);
  out.reject = mask_at_most(out.values, t);
  if (w >= 1.0) {
    out.degenerate_weight = true;
    out.effective_abs_threshold = 0.0;
  } else if (w > 0.0) {
    const ThresholdContext thresholds(ctx.prior());
    const double r = mixing_ratio(w, t);
    out.effective_abs_threshold = r >= 1.0 ? 0.0 : thresholds.chi(r);
  }
  return out;
}

TestOutcome ebayes_q0(const TestingContext& ctx, double t, std::optional<double> L) {
  check_level(t, "ebayes_q0");
  const std::size_t n = ctx.batch().size();
  const double omega = omega_n(ctx.prior(), n, resolve_L(n, L));
  if (ctx.w() > omega) {
    TestOutcome out = ebayes_q(ctx, t);
    out.procedure = ProcedureId::ebayes_q0;
    out.omega_n = omega;
    return out;
  }
  TestOutcome out;
  out.procedure = ProcedureId::ebayes_q0;
  out.t = t;
  out.w_used = ctx.w();
  out.omega_n = omega;
  out.values = q_values_impl(ctx.prior(), ctx.batch().x(), ctx.w());
  out.reject.assign(n, 0);
  return out;
}

TestOutcome ebayes_hybrid(const TestingContext& ctx, double t, std::optional<double> L) {
  check_level(t, "ebayes_hybrid");
  const std::size_t n = ctx.batch().size();
  const double omega = omega_n(ctx.prior(), n, resolve_L(n, L));
  TestOutcome out;
  if (ctx.w() > omega) {
    out = ebayes_q(ctx, t);
  } else {
    out = bonferroni_procedure(ctx.batch(), t);
    out.used_bonferroni = true;
    out.w_used = ctx.w();
  }
  out.procedure = ProcedureId::ebayes_hybrid;
  out.omega_n = omega;
  return out;
}

TestOutcome sc_procedure(const TestingContext& ctx, double t) {
  check_level(t, "sc_procedure");
  TestOutcome out;
  out.procedure = ProcedureId::sc;
  out.t = t;
  const double w = ctx.w();
  out.w_used = w;
  out.degenerate_weight = w >= 1.0;
  out.values = l_values_from_log_ratio(ctx.likelihood().log_ratio(), w);
  const std::span<const double> values = out.values;
  const std::size_t n = values.size();

  // The running mean of ascending values is nondecreasing, so if it already
  // exceeds t within the candidates {ℓ ≤ cut}, k̂ lies among them. Otherwise
  // widen to every coordinate.
  std::vector<std::size_t> order;
  std::size_t k_hat = 0;
  for (double cut : {std::min(1.0, 4.0 * t), 2.0}) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < n; ++i) {
      if (values[i] <= cut) candidates.push_back(i);
    }
    order = ascending_order(values, std::move(candidates));
    k_hat = largest_running_mean_prefix(values, order, t);
    if (k_hat < order.size() || order.size() == n) break;
  }

  out.reject.assign(n, 0);
  for (std::size_t k = 0; k < k_hat; ++k) out.reject[order[k]] = 1;
  return out;
}

TestOutcome mci_procedure(const TestingContext& ctx, double t) {
  if (!(t > 0.0 && t < 0.5)) {
    throw DomainError("mci_procedure: level must lie in (0, 1/2), got " +
                      std::to_string(t));
  }
  TestOutcome out;
  out.procedure = ProcedureId::mci;
  out.t = t;
  out.w_used = ctx.w();
  out.values = m_values_impl(ctx.prior(), ctx.batch().x(),
                             ctx.likelihood().log_ratio(), ctx.w());
  out.reject.resize(out.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) out.reject[i] = out.values[i] < t;
  return out;
}

TestOutcome ebayes_l(const SlabPrior& prior, const ObservationBatch& batch, double t) {
  return ebayes_l(TestingContext(prior, batch), t);
}
TestOutcome ebayes_q(const SlabPrior& prior, const ObservationBatch& batch, double t) {
  return ebayes_q(TestingContext(prior, batch), t);
}
TestOutcome ebayes_q0(const SlabPrior& prior, const ObservationBatch& batch, double t,
                      std::optional<double> L) {
  return ebayes_q0(TestingContext(prior, batch), t, L);
}
TestOutcome ebayes_hybrid(const SlabPrior& prior, const ObservationBatch& batch,
                          double t, std::optional<double> L) {
  return ebayes_hybrid(TestingContext(prior, batch), t, L);
}
TestOutcome sc_procedure(const SlabPrior& prior, const ObservationBatch& batch,
                         double t) {
  return sc_procedure(TestingContext(prior, batch), t);
}
TestOutcome mci_procedure(const SlabPrior& prior, const ObservationBatch& batch,
                          double t) {
  return mci_procedure(TestingContext(prior, batch), t);
}

TestOutcome bh_procedure(const ObservationBatch& batch, double alpha) {
  check_level(alpha, "bh_procedure");
  TestOutcome out;
  out.procedure = ProcedureId::bh;
  out.t = alpha;
  out.values = p_values(batch.x());
  const std::size_t n = out.values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto order = ascending_order(out.values, std::move(idx));
  std::size_t k_hat = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (out.values[order[k - 1]] <=
        static_cast<double>(k) * alpha / static_cast<double>(n)) {
      k_hat = k;
    }
  }
  out.reject.assign(n, 0);
  for (std::size_t k = 0; k < k_hat; ++k) out.reject[order[k]] = 1;
  return out;
}

TestOutcome bonferroni_procedure(const ObservationBatch& batch, double alpha) {
  check_level(alpha, "bonferroni_procedure");
  TestOutcome out;
  out.procedure = ProcedureId::bonferroni;
  out.t = alpha;
  out.values = p_values(batch.x());
  const double n = static_cast<double>(batch.size());
  out.reject = mask_at_most(out.values, alpha / n);
  out.effective_abs_threshold = stdnorm::upper_tail_inv(alpha / (2.0 * n));
  return out;
}

void validate(const ProcedureSpec& spec) {
  check_level(spec.t, to_string(spec.id).data());
  if (spec.id == ProcedureId::mci && !(spec.t < 0.5)) {
    throw DomainError("mci: level must lie in (0, 1/2), got " + std::to_string(spec.t));
  }
  if (spec.L && !(std::isfinite(*spec.L) && *spec.L > 0.0)) {
    throw DomainError("omega scale L must be positive");
  }
}

TestOutcome run_procedure(const TestingContext& ctx, const ProcedureSpec& spec) {
  switch (spec.id) {
    case ProcedureId::ebayes_l: return ebayes_l(ctx, spec.t);
    case ProcedureId::ebayes_q: return ebayes_q(ctx, spec.t);
    case ProcedureId::ebayes_q0: return ebayes_q0(ctx, spec.t, spec.L);
    case ProcedureId::ebayes_hybrid: return ebayes_hybrid(ctx, spec.t, spec.L);
    case ProcedureId::sc: return sc_procedure(ctx, spec.t);
    case ProcedureId::mci: return mci_procedure(ctx, spec.t);
    case ProcedureId::bh: return bh_procedure(ctx.batch(), spec.t);
    case ProcedureId::bonferroni: return bonferroni_procedure(ctx.batch(), spec.t);
  }
  throw DomainError("run_procedure: unhandled procedure");
}

}  // namespace slabtest
