#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "dekreg/dataset.hpp"

namespace dekreg::testing {

/// Plain golden-section search written independently of the library's
/// minimiser; used as an oracle.
inline double golden_argmin(const std::function<double(double)>& f, double lo, double hi,
                            double tol = 1e-12) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Golden-section search followed by one parabolic interpolation step through
/// x - d, x, x + d. Exact up to rounding when f is quadratic.
inline double golden_argmin_quadratic(const std::function<double(double)>& f, double lo,
                                      double hi, double d = 1.0) {
  const double x = golden_argmin(f, lo, hi);
  const double fm = f(x - d), f0 = f(x), fp = f(x + d);
  const double curv = fp - 2.0 * f0 + fm;
  return curv > 0.0 ? x - 0.5 * d * (fp - fm) / curv : x;
}

/// Coarse scan of f on n points over [lo, hi] followed by golden-section
/// polishing around the best scan point.
inline double scan_then_polish(const std::function<double(double)>& f, double lo, double hi,
                               int n = 2001) {
  double best_x = lo, best_f = f(lo);
  const double step = (hi - lo) / (n - 1);
  for (int i = 1; i < n; ++i) {
    const double x = lo + step * i;
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
  }
  return golden_argmin(f, std::max(lo, best_x - step), std::min(hi, best_x + step));
}

inline double gauss_pdf(double w) { return std::exp(-0.5 * w * w) / std::sqrt(2.0 * M_PI); }

inline Dataset random_dataset(std::mt19937_64& rng, int n, double lo = 0.0, double hi = 1.0,
                              double noise = 0.2) {
  std::uniform_real_distribution<double> ux(lo, hi);
  std::normal_distribution<double> nz(0.0, noise);
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = ux(rng);
    y[i] = std::exp(x[i]) + nz(rng);
  }
  return Dataset(std::move(x), std::move(y));
}

}  // namespace dekreg::testing
