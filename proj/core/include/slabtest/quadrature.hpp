#pragma once

#include <functional>
#include <initializer_list>

namespace slabtest::quadrature {

using Integrand = std::function<double(double)>;

inline constexpr double kDefaultRelTol = 1e-11;

/// Adaptive 15-point Gauss–Kronrod integration of f over [a, b], split at
/// every breakpoint strictly inside (a, b).
double integrate(const Integrand& f, double a, double b,
                 std::initializer_list<double> breaks = {},
                 double rel_tol = kDefaultRelTol);

/// Integral of f over [a, +inf) via the exp-sinh transform.
double integrate_to_infinity(const Integrand& f, double a,
                             double rel_tol = kDefaultRelTol);

}  // namespace slabtest::quadrature
