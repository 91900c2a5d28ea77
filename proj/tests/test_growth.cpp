#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dekreg/errors.hpp"
#include "dekreg/growth.hpp"
#include "dekreg/local_fit.hpp"
#include "dekreg/numerics.hpp"
#include "dekreg/tumor.hpp"
#include "test_support.hpp"

using namespace dekreg;
using dekreg::testing::golden_argmin;
using dekreg::testing::scan_then_polish;

namespace {

double weight(double u, double h) { return dekreg::testing::gauss_pdf(u / h) / h; }

double subexp_objective(const Dataset& d, int order, double lambda, double alpha, double h,
                        double x0, double G) {
  const double e = std::exp((alpha - 1.0) * G);
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double u = d.x()[i] - x0;
    double p = G + lambda * e * u;
    if (order == 2) p += 0.5 * lambda * lambda * (alpha - 1.0) * e * e * u * u;
    const double r = d.y()[i] - p;
    s += r * r * weight(u, h);
  }
  return s;
}

}  // namespace

TEST(GrowthLaw, DerivativeRules) {
  const GrowthLaw e = GrowthLaw::exponential(0.7);
  EXPECT_DOUBLE_EQ(e.first_derivative(2.0), 1.4);
  EXPECT_DOUBLE_EQ(e.second_derivative(2.0), 0.49 * 2.0);
  const GrowthLaw s = GrowthLaw::sub_exponential(0.5, 0.5);
  EXPECT_DOUBLE_EQ(s.first_derivative(4.0), 1.0);
  EXPECT_DOUBLE_EQ(s.second_derivative(4.0), 0.5 * 0.25 * 1.0);
  EXPECT_THROW(GrowthLaw::sub_exponential(1.0, 1.0), DomainError);
  EXPECT_THROW(GrowthLaw::sub_exponential(1.0, 0.0), DomainError);
}

TEST(SubexpSolution, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(subexp_solution(GrowthLaw::sub_exponential(2.0, 0.5), 1.0, 0.0), 1.0);
  const GrowthLaw law = GrowthLaw::sub_exponential(0.3, 0.25);
  EXPECT_NEAR(subexp_solution(law, 0.0, 2.0), std::pow(0.75 * 2.0, 1.0 / 0.75), 1e-14);
  EXPECT_THROW(subexp_solution(law, -10.0, 0.0), DomainError);
  // Integer exponent: pow is defined for a negative base.
  EXPECT_NO_THROW(subexp_solution(GrowthLaw::sub_exponential(1.0, 0.5), -1.0, 0.0));
}

TEST(SubexpSolution, SatisfiesItsDifferentialEquation) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ul(0.1, 2.0), ua(0.1, 0.9), ux(0.5, 5.0);
  for (int rep = 0; rep < 50; ++rep) {
    const double lambda = ul(rng), alpha = ua(rng), x = ux(rng);
    const GrowthLaw law = GrowthLaw::sub_exponential(lambda, alpha);
    const double step = 1e-5 * x;
    const double fd = (subexp_solution(law, x + step, 0.0) - subexp_solution(law, x - step, 0.0)) /
                      (2 * step);
    const double exact = lambda * std::pow(subexp_solution(law, x, 0.0), alpha);
    EXPECT_LT(std::abs(fd - exact) / exact, 1e-6);
  }
}

TEST(LocalSubexpFit, ZeroResidualDataReturnsLevel) {
  const GrowthLaw law = GrowthLaw::sub_exponential(0.4, 0.6);
  const double x0 = 2.0, G0 = 0.8;
  for (int order : {1, 2}) {
    std::vector<double> x, z;
    const double e = std::exp(-0.4 * G0);
    for (int i = 0; i < 7; ++i) {
      const double u = 0.5 * i - 1.5;
      double p = G0 + 0.4 * e * u;
      if (order == 2) p += 0.5 * 0.16 * (-0.4) * e * e * u * u;
      x.push_back(x0 + u);
      z.push_back(p);
    }
    EXPECT_NEAR(local_subexp_fit(Dataset(x, z), order, law, 1.0, Kernel::gaussian(), x0), G0,
                1e-9);
  }
}

TEST(LocalSubexpFit, OrderTwoMatchesBruteForce) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(0.0, 3.0);
  std::normal_distribution<double> nz(0.0, 0.1);
  const GrowthLaw law = GrowthLaw::sub_exponential(0.5, 0.7);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(6), z(6);
    for (int i = 0; i < 6; ++i) {
      x[i] = ux(rng);
      z[i] = std::log(subexp_solution(law, x[i] + 1.0, 0.0)) + nz(rng);
    }
    const Dataset d(x, z);
    for (int order : {1, 2}) {
      const double fit = local_subexp_fit(d, order, law, 0.8, Kernel::gaussian(), 1.5);
      const double oracle = scan_then_polish(
          [&](double G) { return subexp_objective(d, order, 0.5, 0.7, 0.8, 1.5, G); }, -10.0,
          10.0, 4001);
      EXPECT_NEAR(fit, oracle, 1e-7);
    }
  }
}

TEST(LocalSubexpFit, ExponentialLimitMatchesFixedSlopeEstimate) {
  // As alpha -> 1 the order-1 predictor is G + lambda d, whose weighted
  // least-squares level is sum w (z - lambda d) / sum w.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  std::normal_distribution<double> nz(0.0, 0.05);
  const double lambda = 0.9, h = 0.3, x0 = 0.5;
  std::vector<double> x(10), z(10);
  for (int i = 0; i < 10; ++i) {
    x[i] = ux(rng);
    z[i] = 0.1 + lambda * (x[i] - x0) + nz(rng);
  }
  double num = 0, den = 0;
  for (int i = 0; i < 10; ++i) {
    const double w = weight(x[i] - x0, h);
    num += w * (z[i] - lambda * (x[i] - x0));
    den += w;
  }
  const GrowthLaw law = GrowthLaw::sub_exponential(lambda, 1.0 - 1e-12);
  EXPECT_NEAR(local_subexp_fit(Dataset(x, z), 1, law, h, Kernel::gaussian(), x0), num / den,
              1e-6);
}

TEST(LocalSubexpFit, OrdersAgreeAsBandwidthShrinks) {
  const GrowthLaw law = GrowthLaw::sub_exponential(0.3, 0.8);
  std::vector<double> x, z;
  for (int i = 0; i <= 400; ++i) {
    x.push_back(1.0 + 0.01 * i);
    z.push_back(std::log(subexp_solution(law, x.back(), 0.0)));
  }
  const Dataset d(x, z);
  const double a = local_subexp_fit(d, 1, law, 0.004, Kernel::gaussian(), 3.0);
  const double b = local_subexp_fit(d, 2, law, 0.004, Kernel::gaussian(), 3.0);
  EXPECT_NEAR(a, b, 1e-5);
}

TEST(LocalSubexpFit, RejectsBadArguments) {
  const Dataset d({1.0, 2.0}, {0.0, 0.5});
  EXPECT_THROW(local_subexp_fit(d, 3, GrowthLaw::sub_exponential(0.3, 0.5), 1.0,
                                Kernel::gaussian(), 1.5),
               InputError);
  EXPECT_THROW(local_subexp_fit(d, 1, GrowthLaw::exponential(0.3), 1.0, Kernel::gaussian(), 1.5),
               InputError);
  EXPECT_THROW(local_subexp_fit(d, 1, GrowthLaw::sub_exponential(0.3, 0.5), 0.01,
                                Kernel::epanechnikov(), 10.0),
               UndefinedAtPoint);
}

TEST(NlsExponential, RecoversExactModels) {
  std::vector<double> x, y1, y2;
  for (int i = 0; i < 12; ++i) {
    x.push_back(i / 11.0);
    y1.push_back(std::exp(x.back()));
    y2.push_back(3.0 * std::exp(-2.0 * x.back()));
  }
  const ExponentialFit a = fit_nls_exponential(Dataset(x, y1));
  EXPECT_NEAR(a.c, 1.0, 1e-8);
  EXPECT_NEAR(a.lambda, 1.0, 1e-8);
  const ExponentialFit b = fit_nls_exponential(Dataset(x, y2));
  EXPECT_NEAR(b.c, 3.0, 1e-8);
  EXPECT_NEAR(b.lambda, -2.0, 1e-8);
}

TEST(NlsExponential, BeatsParameterGrid) {
  std::mt19937_64 rng(77);
  const Dataset d = dekreg::testing::random_dataset(rng, 25, 0.0, 1.0, 0.1);
  const ExponentialFit f = fit_nls_exponential(d);
  auto sse = [&](double c, double l) {
    double s = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double r = d.y()[i] - c * std::exp(l * d.x()[i]);
      s += r * r;
    }
    return s;
  };
  double best = INFINITY;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) best = std::min(best, sse(0.8 + 0.004 * i, 0.8 + 0.004 * j));
  }
  EXPECT_LE(sse(f.c, f.lambda), best);
  EXPECT_NEAR(f.sse, sse(f.c, f.lambda), 1e-12);
}

TEST(NlsExponential, ScaleEquivariant) {
  std::mt19937_64 rng(78);
  const Dataset d = dekreg::testing::random_dataset(rng, 20, 0.0, 1.0, 0.1);
  std::vector<double> ys(d.y().begin(), d.y().end());
  for (double& v : ys) v *= 4.0;
  const ExponentialFit a = fit_nls_exponential(d);
  const ExponentialFit b = fit_nls_exponential(Dataset({d.x().begin(), d.x().end()}, ys));
  EXPECT_NEAR(b.c, 4.0 * a.c, 1e-8);
  EXPECT_NEAR(b.lambda, a.lambda, 1e-8);
}

TEST(NlsExponential, RejectsDegenerateInput) {
  EXPECT_THROW(fit_nls_exponential(Dataset({1.0, 1.0}, {1.0, 2.0})), Error);
  EXPECT_THROW(fit_nls_exponential(Dataset({1.0}, {1.0})), Error);
}

TEST(EstimateAlpha, PowerLaws) {
  std::vector<double> x, y2, y4;
  for (int i = 1; i <= 8; ++i) {
    x.push_back(i);
    y2.push_back(i * i);
    y4.push_back(std::pow(i, 4));
  }
  EXPECT_NEAR(estimate_alpha(Dataset(x, y2)), 0.5, 1e-12);
  EXPECT_NEAR(estimate_alpha(Dataset(x, y4)), 0.75, 1e-12);
  std::vector<double> dec(y2.rbegin(), y2.rend());
  EXPECT_THROW(estimate_alpha(Dataset(x, dec)), EstimationError);
}

TEST(EstimateAlpha, MouseDataMatchesClosedFormOls) {
  const Dataset d = TumorData::full();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    mx += std::log(d.x()[i]) / 10;
    my += std::log(d.y()[i]) / 10;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    sxy += (std::log(d.x()[i]) - mx) * (std::log(d.y()[i]) - my);
    sxx += (std::log(d.x()[i]) - mx) * (std::log(d.x()[i]) - mx);
  }
  EXPECT_NEAR(estimate_alpha(d), 1.0 - sxx / sxy, 1e-12);
  std::vector<double> scaled(d.y().begin(), d.y().end());
  for (double& v : scaled) v *= 7.0;
  EXPECT_NEAR(estimate_alpha(Dataset({d.x().begin(), d.x().end()}, scaled)), estimate_alpha(d),
              1e-12);
}

TEST(EstimateLambdaSubexp, ExactModelAndRescaling) {
  const GrowthLaw law = GrowthLaw::sub_exponential(0.05, 0.5);
  std::vector<double> x, y, xs;
  for (int i = 1; i <= 10; ++i) {
    x.push_back(5.0 * i);
    xs.push_back(50.0 * i);
    y.push_back(subexp_solution(law, x.back(), 0.0));
  }
  EXPECT_NEAR(estimate_lambda_subexp(Dataset(x, y), 0.5), 0.05, 1e-6);
  const double a = estimate_lambda_subexp(Dataset(x, y), 0.5);
  const double b = estimate_lambda_subexp(Dataset(xs, y), 0.5);
  EXPECT_NEAR(b, a / 10.0, 1e-9);
  EXPECT_THROW(estimate_lambda_subexp(Dataset(x, y), 1.5), DomainError);
}

TEST(EstimateLambdaSubexp, SparseMouseDataMatchesGridSearch) {
  const Dataset d = TumorData::sparse();
  const double alpha = estimate_alpha(d);
  const double fit = estimate_lambda_subexp(d, alpha);
  auto obj = [&](double logl) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double r =
          d.y()[i] - std::pow((1.0 - alpha) * std::exp(logl) * d.x()[i], 1.0 / (1.0 - alpha));
      s += r * r;
    }
    return s;
  };
  // 1001-point log-spaced scan then local refinement.
  double best = -20, best_v = INFINITY;
  for (int i = 0; i <= 1000; ++i) {
    const double t = -20.0 + 25.0 * i / 1000.0;
    const double v = obj(t);
    if (v < best_v) {
      best_v = v;
      best = t;
    }
  }
  const double refined = golden_argmin(obj, best - 0.025, best + 0.025, 1e-14);
  EXPECT_NEAR(fit, std::exp(refined), 1e-7 * std::exp(refined));
}
