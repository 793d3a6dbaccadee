#include "slabtest/thresholds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "slabtest/error.hpp"
#include "slabtest/stdnorm.hpp"

namespace slabtest {
namespace {

constexpr int kMaxIterations = 200;

// Root of an increasing function f on [0, ∞) with f(0) ≤ 0. The upper bracket
// grows geometrically from the asymptotic guess.
template <class F>
double bisect_increasing(F&& f, double guess) {
  double lo = 0.0;
  double hi = std::max(guess, 1.0);
  int grow = 0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 60) throw DomainError("threshold inversion: bracket not found");
  }
  for (int it = 0; it < kMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return 0.5 * (lo + hi);
}

double asymptotic_guess(double u) {
  return u < 1.0 ? std::sqrt(2.0 * std::log(1.0 / u)) + 5.0 : 5.0;
}

}  // namespace

double mixing_ratio(double w, double t) {
  if (!(w >= 0.0 && w < 1.0) || !(t >= 0.0 && t < 1.0)) {
    throw DomainError("mixing_ratio: w and t must lie in [0, 1), got w=" +
                      std::to_string(w) + " t=" + std::to_string(t));
  }
  return (w * t) / ((1.0 - w) * (1.0 - t));
}

ThresholdContext::ThresholdContext(const SlabPrior& prior, bool memoize)
    : prior_(&prior),
      xi_bound_(1.0 / prior.density_ratio(0.0)),
      memoize_(memoize) {}

template <class Solve>
double ThresholdContext::cached(Kind kind, double arg, Solve&& solve) const {
  if (!memoize_) return solve();
  const auto key = std::make_pair(kind, arg);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const double root = solve();
  cache_.emplace(key, root);
  return root;
}

double ThresholdContext::xi(double u) const {
  if (!(u > 0.0 && u <= xi_bound_)) {
    throw ThresholdRangeError("xi: argument must lie in (0, (phi/g)(0)] = (0, " +
                                  std::to_string(xi_bound_) + "], got " +
                                  std::to_string(u),
                              xi_bound_);
  }
  if (u == xi_bound_) return 0.0;
  return cached(Kind::xi, u, [&] {
    const double target = -std::log(u);
    return bisect_increasing(
        [&](double x) { return prior_->log_density_ratio(x) - target; },
        asymptotic_guess(u));
  });
}

double ThresholdContext::zeta(double w) const {
  if (!(w > 0.0 && w <= 1.0)) {
    throw DomainError("zeta: weight must lie in (0, 1], got " + std::to_string(w));
  }
  return cached(Kind::zeta, w, [&] {
    const double target = std::log1p(1.0 / w);
    return bisect_increasing(
        [&](double x) { return prior_->log_density_ratio(x) - target; },
        asymptotic_guess(w));
  });
}

double ThresholdContext::chi(double u) const {
  if (!(u > 0.0 && u <= 1.0)) {
    throw ThresholdRangeError(
        "chi: argument must lie in (0, 1], got " + std::to_string(u), 1.0);
  }
  if (u == 1.0) return 0.0;
  return cached(Kind::chi, u, [&] {
    const double target = std::log(u);
    // log Φ̄ − log Ḡ decreases from 0, so its negation increases.
    return bisect_increasing(
        [&](double x) {
          return target - (stdnorm::log_upper_tail(x) - prior_->log_tail(x));
        },
        asymptotic_guess(u));
  });
}

}  // namespace slabtest
