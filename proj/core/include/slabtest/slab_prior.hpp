#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace slabtest {

/// Slab component of a spike-and-slab prior.
///
/// The slab has raw density γ (the prior on a nonzero mean) and induces the
/// marginal density g = γ ⋆ φ of an observation whose mean is drawn from the
/// slab. Implementations are immutable after construction, so a single
/// instance can be shared freely across threads.
///
/// Every implementation must provide a symmetric, positive, differentiable g
/// with g/φ increasing on [0, ∞) and (g/φ)(0) < 1. The threshold inversions
/// rely on that monotonicity.
class SlabPrior {
 public:
  virtual ~SlabPrior() = default;

  /// Canonical identifier, e.g. "quasi-cauchy" or "laplace:0.5".
  virtual std::string id() const = 0;

  /// γ(u).
  virtual double raw_density(double u) const = 0;

  /// g(x).
  virtual double density(double x) const = 0;

  /// g(x)/φ(x); may overflow to +inf for very large |x|.
  virtual double density_ratio(double x) const = 0;

  /// log(g(x)/φ(x)); finite for every finite x.
  virtual double log_density_ratio(double x) const = 0;

  /// Ḡ(x) = ∫ₓ^∞ g.
  virtual double tail(double x) const = 0;

  /// log Ḡ(x).
  virtual double log_tail(double x) const;

  /// g₋(x) = ∫_{-∞}^0 φ(x − u) γ(u) du.
  virtual double half_conv_neg(double x) const = 0;

  /// g₋(x)/φ(x); bounded by γ(0)/2 for x ≥ 0.
  virtual double half_conv_neg_ratio(double x) const;

  /// Lipschitz constant Λ of log γ.
  virtual double lipschitz() const = 0;

  /// Tail index κ in Γ̄(y) ≍ γ(y) y^{κ−1}.
  virtual double tail_index() const = 0;

  /// Draw from γ given two independent uniforms in (0, 1).
  virtual double sample(double u1, double u2) const = 0;

  /// β(x) = g(x)/φ(x) − 1, evaluated in log space for |x| > 5.
  double beta(double x) const;
};

/// Parameter-free slab with g(x) = (2π)^{-1/2} x^{-2} (1 − e^{-x²/2}).
class QuasiCauchyPrior final : public SlabPrior {
 public:
  std::string id() const override { return "quasi-cauchy"; }
  double raw_density(double u) const override;
  double density(double x) const override;
  double density_ratio(double x) const override;
  double log_density_ratio(double x) const override;
  double tail(double x) const override;
  double half_conv_neg(double x) const override;
  double half_conv_neg_ratio(double x) const override;
  double lipschitz() const override { return 1.0; }
  double tail_index() const override { return 2.0; }
  double sample(double u1, double u2) const override;
};

/// Laplace slab γ(u) = (a/2) e^{-a|u|}.
class LaplacePrior final : public SlabPrior {
 public:
  explicit LaplacePrior(double scale);

  double scale() const noexcept { return a_; }

  std::string id() const override;
  double raw_density(double u) const override;
  double density(double x) const override;
  double density_ratio(double x) const override;
  double log_density_ratio(double x) const override;
  double tail(double x) const override;
  double half_conv_neg(double x) const override;
  double half_conv_neg_ratio(double x) const override;
  double lipschitz() const override { return a_; }
  double tail_index() const override { return 1.0; }
  double sample(double u1, double u2) const override;

 private:
  double a_;
};

/// Raw slab density used by QuadraturePrior.
class SlabKernel {
 public:
  virtual ~SlabKernel() = default;
  virtual std::string id() const = 0;
  virtual double density(double u) const = 0;
  /// Γ̄(y) = ∫_y^∞ γ for y ≥ 0.
  virtual double tail(double y) const = 0;
  virtual double lipschitz() const = 0;
  virtual double tail_index() const = 0;
  virtual double sample(double u1, double u2) const = 0;
};

std::unique_ptr<SlabKernel> make_cauchy_kernel();
std::unique_ptr<SlabKernel> make_laplace_kernel(double scale);
std::unique_ptr<SlabKernel> make_quasi_cauchy_kernel();

/// Generic slab whose g, Ḡ and g₋ are computed by adaptive quadrature of γ.
/// Slow; intended as an independent check of the closed forms and for slabs
/// without them.
class QuadraturePrior final : public SlabPrior {
 public:
  explicit QuadraturePrior(std::unique_ptr<SlabKernel> kernel,
                           double rel_tol = 1e-11);

  std::string id() const override;
  double raw_density(double u) const override { return kernel_->density(u); }
  double density(double x) const override;
  double density_ratio(double x) const override;
  double log_density_ratio(double x) const override;
  double tail(double x) const override;
  double half_conv_neg(double x) const override;
  double lipschitz() const override { return kernel_->lipschitz(); }
  double tail_index() const override { return kernel_->tail_index(); }
  double sample(double u1, double u2) const override {
    return kernel_->sample(u1, u2);
  }

 private:
  std::unique_ptr<SlabKernel> kernel_;
  double rel_tol_;
};

/// Builds a prior from "quasi-cauchy", "laplace:<a>" or "quadrature:<γ-name>"
/// where γ-name is "quasi-cauchy", "cauchy" or "laplace:<a>".
/// Throws DomainError naming the known identifiers on failure.
std::shared_ptr<const SlabPrior> make_prior(std::string_view id);

/// Identifier patterns accepted by make_prior.
std::vector<std::string> known_priors();

}  // namespace slabtest
