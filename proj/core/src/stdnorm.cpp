#include "slabtest/stdnorm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "slabtest/error.hpp"

namespace slabtest::stdnorm {
namespace {

// 1/√2 split into a double and its rounding error.
constexpr double kSqrtHalfHi = 0.70710678118654757;
constexpr double kSqrtHalfLo = -4.8336466567264565e-17;
constexpr double kTwoOverSqrtPi = 1.1283791670955126;

// Below this point erfc stays in the normal range and the direct ratio is
// accurate; above it the continued fraction converges in a handful of terms.
constexpr double kContinuedFractionCut = 30.0;

double mills_continued_fraction(double x) {
  double t = x;
  for (int k = 40; k >= 1; --k) t = x + k / t;
  return 1.0 / t;
}

}  // namespace

double phi(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double log_phi(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double upper_tail(double x) {
  const double z = x * kSqrtHalfHi;
  // z carries a rounding error delta; first-order correction of erfc(z + delta).
  const double delta = std::fma(x, kSqrtHalfHi, -z) + x * kSqrtHalfLo;
  const double base = std::erfc(z);
  const double corr = kTwoOverSqrtPi * std::exp(-z * z) * delta;
  return 0.5 * (base - corr);
}

double log_upper_tail(double x) {
  if (x < kContinuedFractionCut) return std::log(upper_tail(x));
  return log_phi(x) + std::log(mills_continued_fraction(x));
}

double mills_ratio(double x) {
  if (x >= kContinuedFractionCut) return mills_continued_fraction(x);
  if (x < -37.0) return std::exp(log_mills_ratio(x));
  return upper_tail(x) / phi(x);
}

double log_mills_ratio(double x) {
  if (x >= kContinuedFractionCut) return std::log(mills_continued_fraction(x));
  if (x < -37.0) return std::log(upper_tail(x)) - log_phi(x);
  return std::log(upper_tail(x) / phi(x));
}

namespace {

// Lower-tail quantile Φ⁻¹(p) by Wichura's AS 241 (PPND16) rational
// approximations; relative accuracy about 1e−16 for p ≥ DBL_MIN.
double lower_quantile_as241(double p) {
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
            1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    value = num / den;
  }
  return q < 0.0 ? -value : value;
}

// Safeguarded Newton on the log-tail, for subnormal p.
double upper_tail_inv_newton(double p) {
  const double log_p = std::log(p);
  double lo = 0.0;
  double hi = std::sqrt(-2.0 * std::log(2.0 * p));
  double x = std::sqrt(-2.0 * log_p - std::log(-4.0 * std::numbers::pi * log_p));
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double f = log_upper_tail(x) - log_p;
    if (f > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x + f * mills_ratio(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x) return next;
    x = next;
  }
  return x;
}

}  // namespace

double upper_tail_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("upper_tail_inv: probability must lie in (0, 1), got " +
                      std::to_string(p));
  }
  if (p < std::numeric_limits<double>::min()) return upper_tail_inv_newton(p);
  // Φ̄⁻¹(p) = −Φ⁻¹(p); 1 − p is formed only where it is exact.
  return -lower_quantile_as241(p);
}

double p_value(double x) { return std::min(1.0, 2.0 * upper_tail(std::abs(x))); }

}  // namespace slabtest::stdnorm
