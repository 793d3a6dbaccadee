#pragma once

// Standard normal kernels. All functions are pure and thread-safe.

namespace slabtest::stdnorm {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

/// Density (2π)^{-1/2} exp(-x²/2).
double phi(double x);
double log_phi(double x);

/// Upper tail 1 - Φ(x), accurate in relative terms for large positive x.
double upper_tail(double x);

/// log(1 - Φ(x)); finite for every finite x.
double log_upper_tail(double x);

/// Mills ratio (1 - Φ(x)) / φ(x). Overflows to +inf for x below about -37.
double mills_ratio(double x);
double log_mills_ratio(double x);

/// Inverse of upper_tail on (0, 1). Throws DomainError outside.
double upper_tail_inv(double p);

/// Two-sided p-value 2(1 - Φ(|x|)).
double p_value(double x);

}  // namespace slabtest::stdnorm
