#pragma once

#include "dekreg/dataset.hpp"
#include "dekreg/kernel.hpp"

namespace dekreg {

/// Relative kernel-weight floor: observation i takes part in a local fit when
/// K_h(x_i - x0) > kWeightFloor * max_j K_h(x_j - x0).
inline constexpr double kWeightFloor = 1e-12;
/// Absolute floor for the denominators of ratio estimators.
inline constexpr double kDenominatorFloor = 1e-300;
inline constexpr int kMaxTaylorDegree = 5;

/// Truncated exponential series S_k(u) = sum_{p=0}^{k} (lambda u)^p / p!.
///
/// This is the local Taylor weight implied by g' = lambda g: every derivative
/// g^(p)(x0) equals lambda^p g(x0), so g(x0 + u) is approximated by g(x0) S_k(u).
class TaylorWeight {
 public:
  TaylorWeight(int degree, double lambda);

  double operator()(double u) const noexcept;
  int degree() const noexcept { return degree_; }
  double lambda() const noexcept { return lambda_; }

 private:
  int degree_;
  double lambda_;
};

/// Intercept of the kernel-weighted polynomial least-squares fit of the given
/// degree centred at x0: 0 = NW, 1 = LL, 2 = LQ, 3 = LC.
///
/// Degree 0 is the plain weighted mean. Higher degrees solve the weight-scaled
/// design system by column-pivoted QR. Throws UndefinedAtPoint when fewer than
/// degree + 1 observations carry weight above the floor or the system is rank
/// deficient.
double local_poly_fit(const Dataset& data, int degree, double h, const Kernel& kernel, double x0);

/// DE1-k estimator for the exponential law g' = lambda g:
///
///   sum_i y_i S_k(x_i - x0) K_h(x_i - x0) / sum_i S_k(x_i - x0)^2 K_h(x_i - x0)
///
/// With lambda = 0 it performs exactly the arithmetic of local_poly_fit at
/// degree 0.
double de1k_fit(const Dataset& data, int k, double lambda, double h, const Kernel& kernel,
                double x0);

}  // namespace dekreg
