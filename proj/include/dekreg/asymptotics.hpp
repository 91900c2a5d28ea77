#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dekreg/kernel.hpp"

namespace dekreg {

/// Covariate density f with its first two derivatives.
struct DesignDensity {
  std::function<double(double)> pdf;
  std::function<double(double)> dpdf;
  std::function<double(double)> d2pdf;
  double lo = 0.0;
  double hi = 1.0;
  std::string name;

  static DesignDensity uniform(double lo = 0.0, double hi = 1.0);
  static DesignDensity beta(double a, double b);
};

enum class AsymptoticMethod { NW, LL, LQ, LC, DS, DE1 };

struct BiasVariance {
  double bias = 0.0;
  double variance = 0.0;
};

/// Leading-order conditional bias of the DE1-k estimator at an interior x.
///   odd k:  lambda^{k+1} g h^{k+1} mu_{k+1} / (k+1)!
///   even k: lambda^{k+1} g h^{k+2} mu_{k+2} (lambda + f'/f) / (k+1)!
double de1k_bias(int k, double lambda, double g_at_x, double h, const KernelMoments& moments,
                 const DesignDensity& density, double x);

/// sigma^2 R(K) / (n h f(x)); the same for every k.
double de1k_variance(double sigma, long n, double h, const KernelMoments& moments,
                     const DesignDensity& density, double x);

/// Inputs shared by the correct-model table rows. The truth is the
/// exponential law, so g^(p)(x) = lambda^p g(x).
struct AsymptoticSetup {
  AsymptoticMethod method = AsymptoticMethod::NW;
  int k = 1;  // DE1 degree
  double lambda = 1.0;
  double sigma = 0.1;
  long n = 100;
  double h = 0.1;
  /// Required for the DS row; computed from the kernel when absent.
  std::optional<double> ds_constant;
};

/// Evaluate one row of the correct-model asymptotic summary: NW, LL, LQ, LC,
/// DS, or DE1-k. The DS row needs setup.ds_constant.
BiasVariance leading_bias_variance(const AsymptoticSetup& setup, double g_at_x,
                                  const DesignDensity& density, const KernelMoments& moments,
                                  double x);

/// Truth g(x) = exp(lambda1 x - lambda2 x^2) fitted with the law g' = lambda1 g.
struct MisspecifiedTruth {
  double lambda1 = 1.0;
  double lambda2 = 0.0;

  MisspecifiedTruth(double l1, double l2);
  double g(double x) const;
  double g1(double x) const;
  /// Second derivative. `printed` reproduces the published expression
  /// ((l1 - 2 x l2)^2 - 2 x l2) g; otherwise the calculus result
  /// ((l1 - 2 x l2)^2 - 2 l2) g.
  double g2(double x, bool printed) const;
};

/// Bias rows of the misspecified-model summary for NW, LL and DE1-1.
double misspecified_bias(AsymptoticMethod method, const MisspecifiedTruth& truth,
                         const DesignDensity& density, const KernelMoments& moments, double h,
                         double x, bool printed_second_derivative = true);

/// Same rows with the truth's derivatives passed explicitly; the
/// correct-model rows reduce to this with g1 = lambda g, g2 = lambda^2 g.
double nw_bias_from_derivatives(double g1, double g2, double f, double df, double h, double mu2);

struct VarianceRatioResult {
  std::vector<double> design;  // sampled x values
  std::vector<double> ratios;  // Var(DE1-k) / Var(NW) at each design point, NaN when excluded
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double h = 0.0;
  int excluded = 0;
};

/// Exact finite-sample conditional variance ratio Var(DE1-k) / Var(NW) at
/// each of n uniform design points on [0, 1]; sigma cancels. With no h the
/// half-median-spacing rule is applied to the drawn design.
VarianceRatioResult variance_ratio_study(int n, double lambda, int k, std::optional<double> h,
                                         const Kernel& kernel, std::uint64_t seed);

/// One ratio evaluated directly from its definition at x0.
double finite_sample_variance_ratio(const std::vector<double>& design, double lambda, int k,
                                    double h, const Kernel& kernel, double x0);

std::string to_string(AsymptoticMethod method);

}  // namespace dekreg
