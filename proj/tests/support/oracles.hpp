#pragma once

// Independent reference computations for the tests: plain composite rules
// and bisection on closed forms, sharing no code with the library.

#include <cmath>
#include <cstddef>
#include <numbers>

namespace oracle {

inline double phi(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Composite trapezoid rule with n intervals.
template <class F>
double trapezoid(F&& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double sum = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < n; ++i) sum += f(a + h * static_cast<double>(i));
  return sum * h;
}

// Composite Simpson rule with n (even) intervals.
template <class F>
double simpson(F&& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  }
  return sum * h / 3.0;
}

// Root of f on [lo, hi] where f changes sign, by plain bisection.
template <class F>
double bisect(F&& f, double lo, double hi) {
  const bool rising = f(lo) < 0.0;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if ((f(mid) < 0.0) == rising) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Quasi-Cauchy closed forms.
inline double qc_g(double x) {
  if (x == 0.0) return 0.5 / std::sqrt(2.0 * std::numbers::pi);
  return -std::expm1(-0.5 * x * x) / (x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double qc_beta(double x) {
  if (x == 0.0) return -0.5;
  return std::expm1(0.5 * x * x) / (x * x) - 1.0;
}

inline double qc_gamma(double u) {
  const double a = std::abs(u);
  return (1.0 - a * upper_tail(a) / phi(a)) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace oracle
