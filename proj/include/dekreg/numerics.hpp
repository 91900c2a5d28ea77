#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "dekreg/errors.hpp"

namespace dekreg {

using ScalarFunction = std::function<double(double)>;

/// Adaptive Simpson quadrature of f over [a, b].
///
/// Each panel is split until the Richardson estimate |S_left + S_right - S| / 15
/// falls below its share of abs_tol. Throws QuadratureError if a panel still
/// fails after max_depth bisections or the integrand turns non-finite.
double adaptive_simpson(const ScalarFunction& f, double a, double b, double abs_tol = 1e-10,
                        int max_depth = 60);

struct MinimizeResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section search for a minimum of f on [lo, hi]; stops once the
/// bracket width is below tol * max(1, |x|).
MinimizeResult golden_section_minimize(const ScalarFunction& f, double lo, double hi,
                                       double tol = 1e-10, int max_iter = 500);

/// Median of a copy of values; even lengths average the two central order
/// statistics. Throws InputError when empty.
double median(std::span<const double> values);

/// Ordinary least squares of y on x; returns {intercept, slope}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};
LineFit ols_line(std::span<const double> x, std::span<const double> y);

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, int n);

}  // namespace dekreg
