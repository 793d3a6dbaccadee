#include "slabtest/slab_prior.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>

#include "slabtest/error.hpp"
#include "slabtest/quadrature.hpp"
#include "slabtest/stdnorm.hpp"

namespace slabtest {
namespace {

using stdnorm::kInvSqrt2Pi;
using stdnorm::log_mills_ratio;
using stdnorm::log_phi;
using stdnorm::mills_ratio;
using stdnorm::phi;
using stdnorm::upper_tail;

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kSeriesCut = 1e-3;
constexpr double kExpOverflow = 700.0;
constexpr double kWindow = 40.0;
constexpr double kMixtureTol = 1e-11;

double log_add_exp(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

// 1 − a·R(a) for a ≥ 10 without cancellation, from the continued fraction
// R(a) = 1/(a + 1/(a + 2/(a + 3/(a + ...)))).
double one_minus_a_mills(double a) {
  double t = a;
  for (int k = 80; k >= 2; --k) t = a + k / t;
  const double c = 1.0 / t;
  return c / (a + c);
}

double sample_quasi_cauchy(double u1, double u2) {
  // θ | V ~ N(0, 1/V − 1) with V = U².
  const double z = stdnorm::upper_tail_inv(u2);
  return z * std::sqrt((1.0 - u1) * (1.0 + u1)) / u1;
}

double sample_laplace(double a, double u1, double u2) {
  const double magnitude = -std::log(u1) / a;
  return u2 < 0.5 ? -magnitude : magnitude;
}

class CauchyKernel final : public SlabKernel {
 public:
  std::string id() const override { return "cauchy"; }
  double density(double u) const override {
    return 1.0 / (std::numbers::pi * (1.0 + u * u));
  }
  double tail(double y) const override {
    return std::atan2(1.0, y) / std::numbers::pi;
  }
  double lipschitz() const override { return 1.0; }
  double tail_index() const override { return 2.0; }
  double sample(double u1, double) const override {
    return std::tan(std::numbers::pi * (u1 - 0.5));
  }
};

class LaplaceKernel final : public SlabKernel {
 public:
  explicit LaplaceKernel(double a) : a_(a) {}
  std::string id() const override { return "laplace:" + format_real(a_); }
  double density(double u) const override {
    return 0.5 * a_ * std::exp(-a_ * std::abs(u));
  }
  double tail(double y) const override { return 0.5 * std::exp(-a_ * y); }
  double lipschitz() const override { return a_; }
  double tail_index() const override { return 1.0; }
  double sample(double u1, double u2) const override {
    return sample_laplace(a_, u1, u2);
  }

 private:
  double a_;
};

class QuasiCauchyKernel final : public SlabKernel {
 public:
  std::string id() const override { return "quasi-cauchy"; }
  double density(double u) const override { return prior_.raw_density(u); }
  double tail(double y) const override {
    return quadrature::integrate_to_infinity(
        [this](double u) { return prior_.raw_density(u); }, y, 1e-12);
  }
  double lipschitz() const override { return 1.0; }
  double tail_index() const override { return 2.0; }
  double sample(double u1, double u2) const override {
    return sample_quasi_cauchy(u1, u2);
  }

 private:
  QuasiCauchyPrior prior_;
};

double parse_positive(std::string_view text, std::string_view full_id) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() ||
      !std::isfinite(value) || value <= 0.0) {
    throw DomainError("invalid scale in prior '" + std::string(full_id) +
                      "': expected a positive real");
  }
  return value;
}

[[noreturn]] void unknown_prior(std::string_view id) {
  std::string msg = "unknown prior '" + std::string(id) + "'; known priors:";
  for (const auto& k : known_priors()) msg += " " + k;
  throw DomainError(msg);
}

std::unique_ptr<SlabKernel> make_kernel(std::string_view name,
                                        std::string_view full_id) {
  if (name == "quasi-cauchy") return make_quasi_cauchy_kernel();
  if (name == "cauchy") return make_cauchy_kernel();
  if (name.starts_with("laplace:")) {
    return make_laplace_kernel(parse_positive(name.substr(8), full_id));
  }
  unknown_prior(full_id);
}

}  // namespace

// ---------------------------------------------------------------- SlabPrior

double SlabPrior::log_tail(double x) const { return std::log(tail(x)); }

double SlabPrior::half_conv_neg_ratio(double x) const {
  return std::exp(std::log(half_conv_neg(x)) - log_phi(x));
}

double SlabPrior::beta(double x) const {
  if (std::abs(x) <= 5.0) return density_ratio(x) - 1.0;
  return std::expm1(log_density_ratio(x));
}

// ---------------------------------------------------------- QuasiCauchyPrior

double QuasiCauchyPrior::raw_density(double u) const {
  const double a = std::abs(u);
  if (a < 10.0) return kInvSqrt2Pi * (1.0 - a * mills_ratio(a));
  return kInvSqrt2Pi * one_minus_a_mills(a);
}

double QuasiCauchyPrior::density(double x) const {
  const double y = x * x;
  if (std::abs(x) < kSeriesCut) {
    return kInvSqrt2Pi * (0.5 - y / 8.0 + y * y / 48.0);
  }
  return kInvSqrt2Pi * (-std::expm1(-0.5 * y)) / y;
}

double QuasiCauchyPrior::density_ratio(double x) const {
  const double y = x * x;
  if (std::abs(x) < kSeriesCut) return 0.5 + y / 8.0 + y * y / 48.0;
  if (0.5 * y > kExpOverflow) return std::numeric_limits<double>::infinity();
  return std::expm1(0.5 * y) / y;
}

double QuasiCauchyPrior::log_density_ratio(double x) const {
  const double y = x * x;
  if (0.5 * y <= kExpOverflow) return std::log(density_ratio(x));
  return 0.5 * y + std::log(-std::expm1(-0.5 * y)) - std::log(y);
}

double QuasiCauchyPrior::tail(double x) const {
  const double a = std::abs(x);
  const double upper =
      a == 0.0 ? 0.5 : upper_tail(a) + kInvSqrt2Pi * (-std::expm1(-0.5 * a * a)) / a;
  return x >= 0.0 ? upper : 1.0 - upper;
}

double QuasiCauchyPrior::half_conv_neg(double x) const {
  // ∫₀¹ v φ(xv) Φ̄(x√(1−v²)) dv with v = sin s.
  return quadrature::integrate(
      [x](double s) {
        const double sn = std::sin(s);
        const double cs = std::cos(s);
        return sn * cs * phi(x * sn) * upper_tail(x * cs);
      },
      0.0, kHalfPi, {}, kMixtureTol);
}

double QuasiCauchyPrior::half_conv_neg_ratio(double x) const {
  if (x < 0.0) return SlabPrior::half_conv_neg_ratio(x);
  return kInvSqrt2Pi *
         quadrature::integrate(
             [x](double s) {
               return std::sin(s) * std::cos(s) * mills_ratio(x * std::cos(s));
             },
             0.0, kHalfPi, {}, kMixtureTol);
}

double QuasiCauchyPrior::sample(double u1, double u2) const {
  return sample_quasi_cauchy(u1, u2);
}

// -------------------------------------------------------------- LaplacePrior

LaplacePrior::LaplacePrior(double scale) : a_(scale) {
  if (!(std::isfinite(scale) && scale > 0.0)) {
    throw DomainError("LaplacePrior: scale must be positive and finite");
  }
}

std::string LaplacePrior::id() const { return "laplace:" + format_real(a_); }

double LaplacePrior::raw_density(double u) const {
  return 0.5 * a_ * std::exp(-a_ * std::abs(u));
}

double LaplacePrior::density(double x) const {
  const double v = std::abs(x);
  // e^{a²/2 + av} Φ̄(a + v) is rewritten as φ(v) R(a + v) to avoid overflow.
  return 0.5 * a_ *
         (std::exp(0.5 * a_ * a_ - a_ * v) * upper_tail(a_ - v) +
          std::exp(log_phi(v) + log_mills_ratio(a_ + v)));
}

double LaplacePrior::density_ratio(double x) const {
  const double v = std::abs(x);
  return 0.5 * a_ * (mills_ratio(a_ - v) + mills_ratio(a_ + v));
}

double LaplacePrior::log_density_ratio(double x) const {
  const double v = std::abs(x);
  return std::log(0.5 * a_) +
         log_add_exp(log_mills_ratio(a_ - v), log_mills_ratio(a_ + v));
}

double LaplacePrior::tail(double x) const {
  const double v = std::abs(x);
  const double upper =
      0.5 * (std::exp(0.5 * a_ * a_ - a_ * v) * upper_tail(a_ - v) -
             std::exp(log_phi(v) + log_mills_ratio(a_ + v))) +
      upper_tail(v);
  return x >= 0.0 ? upper : 1.0 - upper;
}

double LaplacePrior::half_conv_neg(double x) const {
  return 0.5 * a_ * std::exp(log_phi(x) + log_mills_ratio(x + a_));
}

double LaplacePrior::half_conv_neg_ratio(double x) const {
  return 0.5 * a_ * mills_ratio(x + a_);
}

double LaplacePrior::sample(double u1, double u2) const {
  return sample_laplace(a_, u1, u2);
}

// ----------------------------------------------------------- QuadraturePrior

std::unique_ptr<SlabKernel> make_cauchy_kernel() {
  return std::make_unique<CauchyKernel>();
}

std::unique_ptr<SlabKernel> make_laplace_kernel(double scale) {
  if (!(std::isfinite(scale) && scale > 0.0)) {
    throw DomainError("laplace kernel: scale must be positive and finite");
  }
  return std::make_unique<LaplaceKernel>(scale);
}

std::unique_ptr<SlabKernel> make_quasi_cauchy_kernel() {
  return std::make_unique<QuasiCauchyKernel>();
}

QuadraturePrior::QuadraturePrior(std::unique_ptr<SlabKernel> kernel,
                                 double rel_tol)
    : kernel_(std::move(kernel)), rel_tol_(rel_tol) {
  if (!kernel_) throw DomainError("QuadraturePrior: null kernel");
}

std::string QuadraturePrior::id() const {
  return "quadrature:" + kernel_->id();
}

double QuadraturePrior::density(double x) const {
  return quadrature::integrate(
      [this, x](double u) { return kernel_->density(u) * phi(x - u); },
      x - kWindow, x + kWindow, {0.0, x}, rel_tol_);
}

double QuadraturePrior::density_ratio(double x) const {
  if (std::abs(x) <= 5.0) return density(x) / phi(x);
  return std::exp(log_density_ratio(x));
}

double QuadraturePrior::log_density_ratio(double x) const {
  return std::log(density(x)) - log_phi(x);
}

double QuadraturePrior::tail(double x) const {
  const double v = std::abs(x);
  // Below v − 40 the factor Φ̄(v − u) is below 1e−300; above v + 40 it is 1.
  const double upper =
      quadrature::integrate(
          [this, v](double u) { return kernel_->density(u) * upper_tail(v - u); },
          v - kWindow, v + kWindow, {0.0, v}, rel_tol_) +
      kernel_->tail(v + kWindow);
  return x >= 0.0 ? upper : 1.0 - upper;
}

double QuadraturePrior::half_conv_neg(double x) const {
  return quadrature::integrate(
      [this, x](double u) { return kernel_->density(u) * phi(x - u); },
      std::min(x, 0.0) - kWindow, 0.0, {x}, rel_tol_);
}

// ------------------------------------------------------------------ factory

std::vector<std::string> known_priors() {
  return {"quasi-cauchy", "laplace:<a>", "quadrature:quasi-cauchy",
          "quadrature:cauchy", "quadrature:laplace:<a>"};
}

std::shared_ptr<const SlabPrior> make_prior(std::string_view id) {
  if (id == "quasi-cauchy") return std::make_shared<QuasiCauchyPrior>();
  if (id.starts_with("laplace:")) {
    return std::make_shared<LaplacePrior>(parse_positive(id.substr(8), id));
  }
  if (id.starts_with("quadrature:")) {
    return std::make_shared<QuadraturePrior>(make_kernel(id.substr(11), id));
  }
  unknown_prior(id);
}

}  // namespace slabtest
