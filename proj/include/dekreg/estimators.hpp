#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dekreg/dataset.hpp"
#include "dekreg/kernel.hpp"

namespace dekreg {

enum class MethodTag {
  NW,         // local constant
  LL,         // local linear
  LQ,         // local quadratic
  LC,         // local cubic
  DE1,        // DE1-k, exponential law
  SubExp1,    // first-order local growth, log scale
  SubExp2,    // second-order local growth, log scale
  NLS,        // global c e^{lambda x}
  NLSSubExp,  // global sub-exponential solution, log scale
};

/// An estimator together with its global parameters.
///
/// lambda / alpha left empty are estimated from the data by
/// resolve_parameters: DE1 takes the log-linear slope; the sub-exponential
/// methods take estimate_alpha then estimate_lambda_subexp on (x, e^z).
/// SubExp1, SubExp2 and NLSSubExp expect log-scale responses z = log y and
/// return log-scale values.
struct Method {
  MethodTag tag = MethodTag::NW;
  int k = 1;
  std::optional<double> lambda;
  std::optional<double> alpha;

  static Method nw() { return {MethodTag::NW, 1, std::nullopt, std::nullopt}; }
  static Method ll() { return {MethodTag::LL, 1, std::nullopt, std::nullopt}; }
  static Method lq() { return {MethodTag::LQ, 1, std::nullopt, std::nullopt}; }
  static Method lc() { return {MethodTag::LC, 1, std::nullopt, std::nullopt}; }
  static Method de1(int k, std::optional<double> lambda = std::nullopt) {
    return {MethodTag::DE1, k, lambda, std::nullopt};
  }
  static Method subexp(int order, std::optional<double> lambda = std::nullopt,
                       std::optional<double> alpha = std::nullopt) {
    return {order == 1 ? MethodTag::SubExp1 : MethodTag::SubExp2, order, lambda, alpha};
  }
  static Method nls() { return {MethodTag::NLS, 1, std::nullopt, std::nullopt}; }
  static Method nls_subexp(std::optional<double> lambda = std::nullopt,
                           std::optional<double> alpha = std::nullopt) {
    return {MethodTag::NLSSubExp, 1, lambda, alpha};
  }

  /// Tag as printed in reports: "NW", "DE1-3", "SUBEXP-2", "NLS", ...
  std::string label() const;
  /// Whether the estimator depends on a bandwidth.
  bool uses_bandwidth() const noexcept;
  /// Whether every global parameter the method needs is present.
  bool resolved() const noexcept;
};

/// Fill in missing global parameters from the data (see Method).
Method resolve_parameters(const Dataset& data, const Method& method);

/// Pointwise estimate at x0. The method must be resolved. Global methods fit
/// the whole dataset on every call; prefer fit_curve for many points.
double fit_point(const Dataset& data, const Method& method, double h, const Kernel& kernel,
                 double x0);

/// Estimator output over an evaluation grid. Points where the estimator is
/// undefined carry defined[i] == false and a NaN value.
struct FitCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<bool> defined;
  double h = 0.0;
  std::string method;

  std::size_t defined_count() const;
};

/// Evaluate the (resolved or resolvable) method at every grid value. Throws
/// the last UndefinedAtPoint if no grid point is defined.
FitCurve fit_curve(const Dataset& data, const Method& method, double h, const Kernel& kernel,
                   const std::vector<double>& grid);

/// n equispaced points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace dekreg
