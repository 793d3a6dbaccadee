#pragma once

#include <cstddef>

#include "slabtest/slab_prior.hpp"
#include "slabtest/thresholds.hpp"

namespace slabtest {

/// Weight solving (n − s)·w·m̃(w) = s.
struct WStar {
  double w = 1.0;
  /// Set when (n − s)·m̃(1) < s, in which case w = 1.
  bool saturated = false;
};

/// Moments of the per-coordinate score β(X, w) = β(X)/(1 + wβ(X)) under
/// X ~ N(τ, 1), by adaptive quadrature. Immutable; safe to share.
class MomentContext {
 public:
  /// rel_tol must lie in (0, 1e-3).
  explicit MomentContext(const SlabPrior& prior, double rel_tol = 1e-9);

  const SlabPrior& prior() const noexcept { return *prior_; }
  double rel_tol() const noexcept { return rel_tol_; }

  /// m̃(w) = −E₀ β(X, w), w ∈ (0, 1].
  double m_tilde(double w) const;
  /// m₁(τ, w) = E_τ β(X, w).
  double m1(double tau, double w) const;
  /// m₂(τ, w) = E_τ β(X, w)².
  double m2(double tau, double w) const;

  /// Requires 1 ≤ s < n.
  WStar solve_wstar(std::size_t n, std::size_t s) const;

  /// Average ℓ-value of the coordinates a q-value rule at level u rejects
  /// under the null, relative to Φ̄ at that threshold:
  ///   fₙ(u) = ∫_{χ(r)}^∞ ℓ(x; w) φ(x) dx / Φ̄(χ(r)),  r = r(w, u) ≤ 1.
  double f_n(double u, double w) const;

  /// u ∈ [t, 1 − w] with u·fₙ(u) = t.
  double solve_f_n_level(double t, double w) const;

 private:
  double beta_w(double x, double w) const;
  double zeta(double w) const;

  const SlabPrior* prior_;
  double rel_tol_;
  ThresholdContext thresholds_;
};

}  // namespace slabtest
