#pragma once

#include "dekreg/dataset.hpp"
#include "dekreg/kernel.hpp"

namespace dekreg {

enum class GrowthKind { Exponential, SubExponential };

/// First-order growth law g' = lambda g (exponential) or g' = lambda g^alpha
/// with alpha in (0, 1) (sub-exponential).
class GrowthLaw {
 public:
  static GrowthLaw exponential(double lambda);
  static GrowthLaw sub_exponential(double lambda, double alpha);

  GrowthKind kind() const noexcept { return kind_; }
  double lambda() const noexcept { return lambda_; }
  /// 1 for the exponential law.
  double alpha() const noexcept { return alpha_; }

  /// g'(x0) implied by the law at level g = g(x0).
  double first_derivative(double g) const;
  /// g''(x0) implied by the law: lambda^2 g, or alpha lambda^2 g^(2 alpha - 1).
  double second_derivative(double g) const;

 private:
  GrowthLaw(GrowthKind kind, double lambda, double alpha);

  GrowthKind kind_;
  double lambda_;
  double alpha_;
};

/// Closed-form solution g(x) = {(1 - alpha)(lambda x + g0)}^(1 / (1 - alpha)).
/// Throws DomainError for a non-positive base raised to a non-integer power.
double subexp_solution(const GrowthLaw& law, double x, double g0);

/// Log-scale local growth fit at x0.
///
/// With G = log g and d = x_i - x0 the predictors are
///   order 1: G + lambda e^{(alpha-1) G} d
///   order 2: order 1 + (1/2) lambda^2 (alpha-1) e^{2 (alpha-1) G} d^2
/// and the returned G minimises sum_i (z_i - P(G; d_i))^2 K_h(d_i). Newton
/// iterations start from the local constant estimate of z; a step that raises
/// the objective is halved up to 30 times before falling back to a
/// golden-section search on [G_start - 5, G_start + 5].
double local_subexp_fit(const Dataset& log_data, int order, const GrowthLaw& law, double h,
                        const Kernel& kernel, double x0);

struct ExponentialFit {
  double c = 0.0;
  double lambda = 0.0;
  double sse = 0.0;
  int iterations = 0;
};

/// Least squares on log(max(y, 1e-8)) versus x, i.e. the log-linear start of
/// the exponential NLS fit. Returns {c, lambda} with c = exp(intercept).
ExponentialFit loglinear_exponential(const Dataset& data);

/// Two-parameter NLS fit of y = c e^{lambda x} by Levenberg-Marquardt, started
/// from loglinear_exponential.
ExponentialFit fit_nls_exponential(const Dataset& data);

/// alpha-hat = 1 - 1 / slope of the OLS fit of log y on log x, clamped to
/// [1e-6, 1 - 1e-6]. Throws EstimationError when the slope is not positive.
double estimate_alpha(const Dataset& data);

/// 1-D NLS for lambda in y = {(1 - alpha) lambda x}^(1 / (1 - alpha)).
/// A log-spaced scan brackets the minimum, golden section narrows it and
/// Newton polishes it to relative tolerance 1e-10.
double estimate_lambda_subexp(const Dataset& data, double alpha_hat);

/// Residual sum of squares minimised by estimate_lambda_subexp.
double subexp_sse(const Dataset& data, double alpha, double lambda);

}  // namespace dekreg
