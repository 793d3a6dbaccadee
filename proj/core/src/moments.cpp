#include "slabtest/moments.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "slabtest/error.hpp"
#include "slabtest/quadrature.hpp"
#include "slabtest/stdnorm.hpp"

namespace slabtest {
namespace {

// Half-width of the integration window around the Gaussian centre.
constexpr double kWindow = 40.0;

void check_weight(double w, const char* where) {
  if (!(w > 0.0 && w <= 1.0)) {
    throw DomainError(std::string(where) + ": weight must lie in (0, 1], got " +
                      std::to_string(w));
  }
}

}  // namespace

MomentContext::MomentContext(const SlabPrior& prior, double rel_tol)
    : prior_(&prior), rel_tol_(rel_tol), thresholds_(prior) {
  if (!(rel_tol > 0.0 && rel_tol < 1e-3)) {
    throw DomainError("MomentContext: tolerance must lie in (0, 1e-3), got " +
                      std::to_string(rel_tol));
  }
}

double MomentContext::beta_w(double x, double w) const {
  const double b = prior_->beta(x);
  if (std::isinf(b)) return 1.0 / w;
  return b / (1.0 + w * b);
}

// β(·, w) crosses from ≈ β to the 1/w plateau around ζ(w).
double MomentContext::zeta(double w) const {
  return w >= 1.0 ? thresholds_.zeta(1.0) : thresholds_.zeta(w);
}

double MomentContext::m_tilde(double w) const {
  check_weight(w, "m_tilde");
  const double z = zeta(w);
  const double half = quadrature::integrate(
      [&](double t) { return beta_w(t, w) * stdnorm::phi(t); }, 0.0, kWindow, {z},
      rel_tol_);
  // Beyond the window β(t, w) ≈ 1/w.
  return -2.0 * (half + stdnorm::upper_tail(kWindow) / w);
}

double MomentContext::m1(double tau, double w) const {
  check_weight(w, "m1");
  const double z = zeta(w);
  return quadrature::integrate(
      [&](double t) { return beta_w(t, w) * stdnorm::phi(t - tau); }, tau - kWindow,
      tau + kWindow, {-z, 0.0, tau, z}, rel_tol_);
}

double MomentContext::m2(double tau, double w) const {
  check_weight(w, "m2");
  const double z = zeta(w);
  return quadrature::integrate(
      [&](double t) {
        const double b = beta_w(t, w);
        return b * b * stdnorm::phi(t - tau);
      },
      tau - kWindow, tau + kWindow, {-z, 0.0, tau, z}, rel_tol_);
}

WStar MomentContext::solve_wstar(std::size_t n, std::size_t s) const {
  if (s == 0 || s >= n) {
    throw DomainError("solve_wstar: requires 1 <= s < n, got n=" + std::to_string(n) +
                      " s=" + std::to_string(s));
  }
  const double nulls = static_cast<double>(n - s);
  const double signals = static_cast<double>(s);
  const double top = m_tilde(1.0);
  if (nulls * top < signals) return {1.0, true};

  const auto residual = [&](double w) { return nulls * w * m_tilde(w) - signals; };
  // w·m̃(w) ≤ w·m̃(1) puts the root above lo.
  double lo = signals / (nulls * top);
  double hi = 1.0;
  if (residual(lo) >= 0.0) return {lo, false};
  for (int it = 0; it < 200 && hi - lo > 1e-13 * lo; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (residual(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {std::sqrt(lo * hi), false};
}

double MomentContext::f_n(double u, double w) const {
  if (!(u > 0.0 && u < 1.0) || !(w > 0.0 && w < 1.0)) {
    throw DomainError("f_n: u and w must lie in (0, 1), got u=" + std::to_string(u) +
                      " w=" + std::to_string(w));
  }
  const double r = mixing_ratio(w, u);
  if (r > 1.0) {
    throw DomainError("f_n: r(w, u) = " + std::to_string(r) +
                      " exceeds 1, where chi is undefined");
  }
  const double c = r == 1.0 ? 0.0 : thresholds_.chi(r);
  // ℓ(x; w) = (1 − w)/(1 + wβ(x)).
  const double num = quadrature::integrate(
      [&](double x) {
        const double b = prior_->beta(x);
        const double l = std::isinf(b) ? 0.0 : (1.0 - w) / (1.0 + w * b);
        return l * stdnorm::phi(x);
      },
      c, c + kWindow, {zeta(w)}, rel_tol_);
  return num / stdnorm::upper_tail(c);
}

double MomentContext::solve_f_n_level(double t, double w) const {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("solve_f_n_level: t must lie in (0, 1), got " + std::to_string(t));
  }
  // The largest u with r(w, u) ≤ 1, stepped inside so χ stays defined.
  const double u_max = std::nextafter(1.0 - w, 0.0);
  if (t >= u_max || u_max * f_n(u_max, w) < t) {
    throw DomainError("solve_f_n_level: no u in (0, 1 - w) reaches level " +
                      std::to_string(t));
  }
  double lo = t;
  double hi = u_max;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid * f_n(mid, w) < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace slabtest
