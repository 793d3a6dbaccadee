#pragma once

#include <map>
#include <utility>

#include "slabtest/slab_prior.hpp"

namespace slabtest {

/// r(w, t) = wt / ((1 − w)(1 − t)). Throws DomainError unless w, t ∈ [0, 1).
double mixing_ratio(double w, double t);

/// Thresholds converting ℓ-value, β and q-value rules into |x| cut-offs:
///
///   xi(u)   : unique x ≥ 0 with φ(x)/g(x) = u,      u ∈ (0, (φ/g)(0)]
///   zeta(w) : unique x ≥ 0 with β(x) = 1/w,         w ∈ (0, 1]
///   chi(u)  : unique x ≥ 0 with Φ̄(x)/Ḡ(x) = u,     u ∈ (0, 1]
///
/// Each is found by bracketed bisection on the log of the forward map, which
/// is monotone for any admissible slab.
///
/// With memoize = true the context caches roots and must then be confined to
/// one thread. Without it the context is stateless and freely shareable.
class ThresholdContext {
 public:
  explicit ThresholdContext(const SlabPrior& prior, bool memoize = false);

  const SlabPrior& prior() const noexcept { return *prior_; }

  /// (φ/g)(0), the upper end of the domain of xi.
  double xi_upper_bound() const noexcept { return xi_bound_; }

  double xi(double u) const;
  double zeta(double w) const;
  double chi(double u) const;

 private:
  enum class Kind { xi, zeta, chi };

  template <class Solve>
  double cached(Kind kind, double arg, Solve&& solve) const;

  const SlabPrior* prior_;
  double xi_bound_;
  bool memoize_;
  mutable std::map<std::pair<Kind, double>, double> cache_;
};

}  // namespace slabtest
