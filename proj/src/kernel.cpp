#include "dekreg/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dekreg/errors.hpp"
#include "dekreg/numerics.hpp"

namespace dekreg {

namespace {

constexpr double kGaussianHalfWidth = 8.0;
constexpr double kQuadTol = 1e-10;
constexpr int kDsStartPoints = 4096;
constexpr int kDsMaxPoints = 32768;
constexpr double kDsConvergence = 1e-6;

}  // namespace

Kernel::Kernel(KernelKind kind, double scale) : kind_(kind), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InputError("kernel scale must be positive and finite");
  }
  half_width_ = scale * (kind == KernelKind::Gaussian ? kGaussianHalfWidth : 1.0);
}

Kernel Kernel::gaussian(double scale) { return Kernel(KernelKind::Gaussian, scale); }

Kernel Kernel::epanechnikov(double scale) { return Kernel(KernelKind::Epanechnikov, scale); }

Kernel Kernel::from_name(const std::string& name) {
  if (name == "gaussian") return gaussian();
  if (name == "epanechnikov") return epanechnikov();
  throw InputError("unknown kernel '" + name + "' (expected gaussian or epanechnikov)");
}

double Kernel::operator()(double w) const noexcept {
  const double t = w / scale_;
  switch (kind_) {
    case KernelKind::Gaussian:
      return std::exp(-0.5 * t * t) / (std::sqrt(2.0 * std::numbers::pi) * scale_);
    case KernelKind::Epanechnikov:
      return std::abs(t) < 1.0 ? 0.75 * (1.0 - t * t) / scale_ : 0.0;
  }
  return 0.0;
}

std::string Kernel::name() const {
  std::string base = kind_ == KernelKind::Gaussian ? "gaussian" : "epanechnikov";
  if (scale_ != 1.0) base += "(scale=" + std::to_string(scale_) + ")";
  return base;
}

KernelMoments kernel_moments(const Kernel& kernel, int max_order) {
  if (max_order < 0 || max_order > 6) throw InputError("kernel_moments: max_order must be in 0..6");
  KernelMoments m;
  m.max_order = max_order;
  const double lo = kernel.support_lo();
  const double hi = kernel.support_hi();
  for (int k = 0; k <= max_order; ++k) {
    auto mu_integrand = [&kernel, k](double w) { return std::pow(w, k) * kernel(w); };
    auto v_integrand = [&kernel, k](double w) {
      const double kw = kernel(w);
      return std::pow(w, k) * kw * kw;
    };
    try {
      m.mu[static_cast<std::size_t>(k)] = adaptive_simpson(mu_integrand, lo, hi, kQuadTol);
    } catch (const QuadratureError& e) {
      throw QuadratureError("moment mu_" + std::to_string(k) + " failed: " + e.what());
    }
    try {
      m.v[static_cast<std::size_t>(k)] = adaptive_simpson(v_integrand, lo, hi, kQuadTol);
    } catch (const QuadratureError& e) {
      throw QuadratureError("moment v_" + std::to_string(k) + " failed: " + e.what());
    }
  }
  m.rk = m.v[0];
  return m;
}

double ds_variance_constant_on_grid(const Kernel& kernel, int points) {
  if (points < 3) throw InputError("ds_variance_constant_on_grid: need at least 3 points");
  const double mu2 = kernel_moments(kernel, 2).mu[2];
  const double lo = kernel.support_lo();
  const double hi = kernel.support_hi();
  const auto n = static_cast<std::size_t>(points);
  const double du = (hi - lo) / static_cast<double>(n - 1);

  std::vector<double> k0(n), k1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = lo + du * static_cast<double>(i);
    k0[i] = kernel(u);
    k1[i] = u * k0[i];
  }
  // Output node j sits at v = 2 lo + j du, so v - u_i = u_{j-i}.
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < 2 * n; ++j) {
    const std::size_t i_lo = j >= n ? j - n + 1 : 0;
    const std::size_t i_hi = std::min(j, n - 1);
    double conv0 = 0.0;
    double conv1 = 0.0;
    for (std::size_t i = i_lo; i <= i_hi; ++i) {
      conv0 += k0[i] * k0[j - i];
      conv1 += k1[i] * k1[j - i];
    }
    const double diff = (conv0 - conv1 / mu2) * du;
    total += diff * diff;
  }
  return total * du;
}

double ds_variance_constant(const Kernel& kernel) {
  double previous = ds_variance_constant_on_grid(kernel, kDsStartPoints);
  for (int points = 2 * kDsStartPoints; points <= kDsMaxPoints; points *= 2) {
    const double current = ds_variance_constant_on_grid(kernel, points);
    if (std::abs(current - previous) < kDsConvergence) return current;
    previous = current;
  }
  throw NonConvergence("ds_variance_constant: grid refinement did not converge by " +
                       std::to_string(kDsMaxPoints) + " points");
}

double kh_weight(const Kernel& kernel, double h, double u) {
  if (!(h > 0.0)) throw InputError("bandwidth h must be positive");
  return kernel(u / h) / h;
}

}  // namespace dekreg
