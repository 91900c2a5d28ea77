#include "dekreg/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "dekreg/bandwidth.hpp"
#include "dekreg/errors.hpp"
#include "dekreg/local_fit.hpp"

namespace dekreg {

namespace {

struct DensityAt {
  double f;
  double df;
  double d2f;
};

DensityAt density_at(const DesignDensity& density, double x) {
  const double f = density.pdf(x);
  if (!(f > 0.0) || !std::isfinite(f)) {
    throw DomainError("design density is not positive at x = " + std::to_string(x));
  }
  return {f, density.dpdf(x), density.d2pdf(x)};
}

double factorial(int k) {
  double out = 1.0;
  for (int p = 2; p <= k; ++p) out *= p;
  return out;
}

double mu(const KernelMoments& m, int order) {
  if (order > m.max_order) {
    throw InputError("kernel moment mu_" + std::to_string(order) + " was not computed");
  }
  return m.mu[static_cast<std::size_t>(order)];
}

// (1/2) g'' h^2 mu_2, the LL bias and the leading term of NW and DE1-1.
double second_order_bias(double g2, double h, double mu2) { return 0.5 * g2 * (h * h) * mu2; }

double degenerate_guard(const KernelMoments& m) {
  const double mu2 = mu(m, 2);
  const double d = mu2 * mu2 - mu(m, 4);
  if (d == 0.0) throw DomainError("degenerate kernel: mu_2^2 == mu_4");
  return d;
}

}  // namespace

DesignDensity DesignDensity::uniform(double lo, double hi) {
  if (!(hi > lo)) throw InputError("uniform density needs lo < hi");
  const double height = 1.0 / (hi - lo);
  DesignDensity d;
  d.pdf = [lo, hi, height](double x) { return (x >= lo && x <= hi) ? height : 0.0; };
  d.dpdf = [](double) { return 0.0; };
  d.d2pdf = [](double) { return 0.0; };
  d.lo = lo;
  d.hi = hi;
  d.name = "uniform";
  return d;
}

DesignDensity DesignDensity::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("beta density needs positive shapes");
  const double norm = 1.0 / std::beta(a, b);
  DesignDensity d;
  auto pdf = [a, b, norm](double x) {
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    return norm * std::pow(x, a - 1.0) * std::pow(1.0 - x, b - 1.0);
  };
  // log-derivative u(x) = (a-1)/x - (b-1)/(1-x); f' = f u, f'' = f (u^2 + u').
  auto score = [a, b](double x) { return (a - 1.0) / x - (b - 1.0) / (1.0 - x); };
  d.pdf = pdf;
  d.dpdf = [pdf, score](double x) { return pdf(x) == 0.0 ? 0.0 : pdf(x) * score(x); };
  d.d2pdf = [pdf, score, a, b](double x) {
    if (pdf(x) == 0.0) return 0.0;
    const double u = score(x);
    const double du = -(a - 1.0) / (x * x) - (b - 1.0) / ((1.0 - x) * (1.0 - x));
    return pdf(x) * (u * u + du);
  };
  d.lo = 0.0;
  d.hi = 1.0;
  d.name = "beta(" + std::to_string(a) + "," + std::to_string(b) + ")";
  return d;
}

std::string to_string(AsymptoticMethod method) {
  switch (method) {
    case AsymptoticMethod::NW: return "NW";
    case AsymptoticMethod::LL: return "LL";
    case AsymptoticMethod::LQ: return "LQ";
    case AsymptoticMethod::LC: return "LC";
    case AsymptoticMethod::DS: return "DS";
    case AsymptoticMethod::DE1: return "DE1";
  }
  return "?";
}

double de1k_bias(int k, double lambda, double g_at_x, double h, const KernelMoments& moments,
                 const DesignDensity& density, double x) {
  if (k < 1 || k > kMaxTaylorDegree) throw InputError("DE1-k degree must be in 1..5");
  const DensityAt fx = density_at(density, x);
  double lam_pow = 1.0;
  for (int p = 0; p <= k; ++p) lam_pow *= lambda;
  const double inv_fact = 1.0 / factorial(k + 1);
  if (k % 2 == 1) {
    double h_pow = 1.0;
    for (int p = 0; p <= k; ++p) h_pow *= h;
    return inv_fact * (lam_pow * g_at_x) * h_pow * mu(moments, k + 1);
  }
  double h_pow = 1.0;
  for (int p = 0; p <= k + 1; ++p) h_pow *= h;
  return inv_fact * (lam_pow * g_at_x) * h_pow * mu(moments, k + 2) * (lambda + fx.df / fx.f);
}

double de1k_variance(double sigma, long n, double h, const KernelMoments& moments,
                     const DesignDensity& density, double x) {
  if (n < 1 || !(h > 0.0)) throw InputError("de1k_variance needs n >= 1 and h > 0");
  const DensityAt fx = density_at(density, x);
  return sigma * sigma * moments.rk / (static_cast<double>(n) * h * fx.f);
}

double nw_bias_from_derivatives(double g1, double g2, double f, double df, double h, double mu2) {
  return 0.5 * (g2 + 2.0 * g1 * df / f) * (h * h) * mu2;
}

BiasVariance leading_bias_variance(const AsymptoticSetup& setup, double g_at_x,
                                  const DesignDensity& density, const KernelMoments& moments,
                                  double x) {
  if (!(setup.h > 0.0) || setup.n < 1 || setup.sigma < 0.0) {
    throw InputError("asymptotic setup needs h > 0, n >= 1, sigma >= 0");
  }
  const DensityAt fx = density_at(density, x);
  const double lambda = setup.lambda;
  const double g = g_at_x;
  const double h = setup.h;
  const double base_var = de1k_variance(setup.sigma, setup.n, h, moments, density, x);
  const double h4 = h * h * h * h;
  const double lam2 = lambda * lambda;
  const double lam3 = lam2 * lambda;
  const double lam4 = lam3 * lambda;

  BiasVariance out;
  switch (setup.method) {
    case AsymptoticMethod::NW:
      out.bias = nw_bias_from_derivatives(lambda * g, lam2 * g, fx.f, fx.df, h, mu(moments, 2));
      out.variance = base_var;
      break;
    case AsymptoticMethod::LL:
      // Same leading terms as DE1-1.
      out.bias = de1k_bias(1, lambda, g, h, moments, density, x);
      out.variance = base_var;
      break;
    case AsymptoticMethod::DE1:
      out.bias = de1k_bias(setup.k, lambda, g, h, moments, density, x);
      out.variance = base_var;
      break;
    case AsymptoticMethod::LQ:
    case AsymptoticMethod::LC: {
      const double denom = degenerate_guard(moments);
      const double mu2 = mu(moments, 2), mu4 = mu(moments, 4), mu6 = mu(moments, 6);
      const double shape = (mu2 * mu6 - mu4 * mu4) / denom / 24.0;
      const double deriv = setup.method == AsymptoticMethod::LQ
                               ? lam4 * g + 4.0 * lam3 * g * fx.df / fx.f
                               : lam4 * g;
      out.bias = shape * deriv * h4;
      const double v0 = moments.v[0], v2 = moments.v[2], v4 = moments.v[4];
      const double kernel_factor =
          (mu4 * mu4 * v0 - 2.0 * mu2 * mu4 * v2 + mu2 * mu2 * v4) / (denom * denom);
      out.variance = setup.sigma * setup.sigma / (static_cast<double>(setup.n) * h * fx.f) *
                     kernel_factor;
      break;
    }
    case AsymptoticMethod::DS: {
      const double denom = degenerate_guard(moments);
      if (!setup.ds_constant) throw InputError("DS row needs the double-smoothing constant V");
      const double b = denom / 4.0 *
                       (lam2 * g * fx.d2f / fx.f + 2.0 * (lam3 * g * fx.df / fx.f) + lam4 * g);
      out.bias = h4 * b;
      out.variance = setup.sigma * setup.sigma / (static_cast<double>(setup.n) * h * fx.f) *
                     *setup.ds_constant;
      break;
    }
  }
  return out;
}

MisspecifiedTruth::MisspecifiedTruth(double l1, double l2) : lambda1(l1), lambda2(l2) {
  if (!(l1 > 0.0) || !(l2 >= 0.0)) {
    throw InputError("misspecified truth needs lambda1 > 0 and lambda2 >= 0");
  }
}

double MisspecifiedTruth::g(double x) const { return std::exp(lambda1 * x - lambda2 * x * x); }

double MisspecifiedTruth::g1(double x) const { return (lambda1 - 2.0 * x * lambda2) * g(x); }

double MisspecifiedTruth::g2(double x, bool printed) const {
  const double c = lambda1 - 2.0 * x * lambda2;
  const double tail = printed ? 2.0 * x * lambda2 : 2.0 * lambda2;
  return (c * c - tail) * g(x);
}

double misspecified_bias(AsymptoticMethod method, const MisspecifiedTruth& truth,
                         const DesignDensity& density, const KernelMoments& moments, double h,
                         double x, bool printed_second_derivative) {
  const DensityAt fx = density_at(density, x);
  const double mu2 = mu(moments, 2);
  const double g = truth.g(x);
  const double g1 = truth.g1(x);
  const double g2 = truth.g2(x, printed_second_derivative);
  switch (method) {
    case AsymptoticMethod::NW: return nw_bias_from_derivatives(g1, g2, fx.f, fx.df, h, mu2);
    case AsymptoticMethod::LL: return second_order_bias(g2, h, mu2);
    case AsymptoticMethod::DE1:
      return second_order_bias(g2, h, mu2) -
             2.0 * x * truth.lambda2 * g * (truth.lambda1 + fx.df / fx.f) * (h * h) * mu2;
    default:
      throw InputError("misspecified bias rows exist for NW, LL and DE1-1 only");
  }
}

double finite_sample_variance_ratio(const std::vector<double>& design, double lambda, int k,
                                    double h, const Kernel& kernel, double x0) {
  const TaylorWeight taylor(k, lambda);
  double de_num = 0.0, de_den = 0.0, nw_num = 0.0, nw_den = 0.0;
  for (double xi : design) {
    const double w = kh_weight(kernel, h, xi - x0);
    const double s = taylor(xi - x0);
    const double s2 = s * s;
    de_num += s2 * w * w;
    de_den += s2 * w;
    nw_num += w * w;
    nw_den += w;
  }
  if (!(de_den > kDenominatorFloor) || !(nw_den > kDenominatorFloor)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double var_de = de_num / (de_den * de_den);
  const double var_nw = nw_num / (nw_den * nw_den);
  return var_de / var_nw;
}

VarianceRatioResult variance_ratio_study(int n, double lambda, int k, std::optional<double> h,
                                         const Kernel& kernel, std::uint64_t seed) {
  if (n < 2) throw InputError("variance_ratio_study needs n >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  VarianceRatioResult out;
  out.design.resize(static_cast<std::size_t>(n));
  for (double& x : out.design) x = unif(rng);
  out.h = h ? *h : rot_bandwidth(Dataset(out.design, std::vector<double>(out.design.size(), 0.0)));
  if (!(out.h > 0.0)) throw InputError("variance_ratio_study needs h > 0");

  out.ratios.reserve(out.design.size());
  double sum = 0.0;
  int used = 0;
  out.min = std::numeric_limits<double>::infinity();
  out.max = -std::numeric_limits<double>::infinity();
  for (double x0 : out.design) {
    const double r = finite_sample_variance_ratio(out.design, lambda, k, out.h, kernel, x0);
    out.ratios.push_back(r);
    if (!std::isfinite(r)) {
      ++out.excluded;
      continue;
    }
    sum += r;
    ++used;
    out.min = std::min(out.min, r);
    out.max = std::max(out.max, r);
  }
  if (used == 0) throw UndefinedAtPoint(out.design.front(), "every variance ratio is undefined");
  out.mean = sum / used;
  return out;
}

}  // namespace dekreg
