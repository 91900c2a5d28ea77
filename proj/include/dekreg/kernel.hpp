#pragma once

#include <array>
#include <string>

namespace dekreg {

enum class KernelKind { Gaussian, Epanechnikov };

/// A symmetric probability density K used as a smoothing weight.
///
/// The gaussian has unbounded support; quadrature treats [-8, 8] (times the
/// scale) as its effective support. A kernel may be stretched by `scale`,
/// K_s(w) = K(w / s) / s, which multiplies mu_2 by s^2.
class Kernel {
 public:
  static Kernel gaussian(double scale = 1.0);
  static Kernel epanechnikov(double scale = 1.0);
  /// "gaussian" or "epanechnikov"; throws InputError otherwise.
  static Kernel from_name(const std::string& name);

  double operator()(double w) const noexcept;
  double evaluate(double w) const noexcept { return (*this)(w); }

  double support_lo() const noexcept { return -half_width_; }
  double support_hi() const noexcept { return half_width_; }
  bool compact() const noexcept { return kind_ == KernelKind::Epanechnikov; }

  KernelKind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  std::string name() const;

 private:
  Kernel(KernelKind kind, double scale);

  KernelKind kind_;
  double scale_;
  double half_width_;
};

/// Moment functionals of a kernel, indexed 0..6.
struct KernelMoments {
  std::array<double, 7> mu{};  // mu_k = int w^k K(w) dw
  std::array<double, 7> v{};   // v_k  = int w^k K(w)^2 dw
  double rk = 0.0;             // R(K) = int K(w)^2 dw
  int max_order = 6;
};

/// Moments up to max_order (<= 6) by adaptive Simpson at absolute tolerance
/// 1e-10. Orders above max_order are left at zero.
KernelMoments kernel_moments(const Kernel& kernel, int max_order = 6);

/// V = int {(K*K)(v) - (K1*K1)(v) / mu_2}^2 dv with K1(u) = u K(u), the
/// variance constant of the double-smoothing estimator.
///
/// The convolutions are discrete sums on a uniform grid across the effective
/// support, starting at 4096 points and doubling until two successive values
/// agree to 1e-6.
double ds_variance_constant(const Kernel& kernel);

/// Same constant evaluated on a single grid with `points` nodes; exposed so
/// callers can inspect refinement behaviour.
double ds_variance_constant_on_grid(const Kernel& kernel, int points);

/// K_h(u) = K(u / h) / h. Throws InputError when h <= 0.
double kh_weight(const Kernel& kernel, double h, double u);

}  // namespace dekreg
