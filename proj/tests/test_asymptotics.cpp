#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dekreg/asymptotics.hpp"
#include "dekreg/errors.hpp"
#include "dekreg/local_fit.hpp"
#include "test_support.hpp"

using namespace dekreg;

namespace {

const KernelMoments& gauss_moments() {
  static const KernelMoments m = kernel_moments(Kernel::gaussian());
  return m;
}

BiasVariance row(AsymptoticMethod method, int k, double lambda, double g, double h,
                 const DesignDensity& f, double x, long n = 100, double sigma = 0.1) {
  AsymptoticSetup setup;
  setup.method = method;
  setup.k = k;
  setup.lambda = lambda;
  setup.sigma = sigma;
  setup.n = n;
  setup.h = h;
  setup.ds_constant = 0.3366;
  return leading_bias_variance(setup, g, f, gauss_moments(), x);
}

}  // namespace

TEST(De1kBias, SubstitutionExamples) {
  const DesignDensity u = DesignDensity::uniform();
  EXPECT_NEAR(de1k_bias(1, 1.0, 1.0, 0.1, gauss_moments(), u, 0.5), 0.005, 1e-12);
  EXPECT_NEAR(de1k_bias(2, 1.0, 1.0, 0.1, gauss_moments(), u, 0.5), 5e-5, 1e-14);
  EXPECT_NEAR(de1k_bias(3, 1.0, 1.0, 0.1, gauss_moments(), u, 0.5), 1.25e-5, 1e-15);
  EXPECT_THROW(de1k_bias(1, 1.0, 1.0, 0.1, gauss_moments(), u, 1.5), DomainError);
}

TEST(De1kBias, HomogeneousInG) {
  const DesignDensity b = DesignDensity::beta(2.0, 3.0);
  for (int k = 1; k <= 5; ++k) {
    const double one = de1k_bias(k, 0.8, 1.0, 0.1, gauss_moments(), b, 0.4);
    EXPECT_NEAR(de1k_bias(k, 0.8, 3.5, 0.1, gauss_moments(), b, 0.4), 3.5 * one,
                1e-15 + 1e-13 * std::abs(one));
  }
}

TEST(De1kVariance, SubstitutionAndScaling) {
  const DesignDensity u = DesignDensity::uniform();
  EXPECT_NEAR(de1k_variance(0.1, 100, 0.1, gauss_moments(), u, 0.5), 0.01 * 0.28209479177 / 10,
              1e-12);
  EXPECT_EQ(de1k_variance(0.0, 100, 0.1, gauss_moments(), u, 0.5), 0.0);
  const double v = de1k_variance(0.2, 50, 0.1, gauss_moments(), u, 0.5);
  EXPECT_NEAR(de1k_variance(0.2, 100, 0.1, gauss_moments(), u, 0.5), v / 2, 1e-18);
  EXPECT_NEAR(de1k_variance(0.2, 50, 0.2, gauss_moments(), u, 0.5), v / 2, 1e-18);
}

TEST(LeadingTerms, RowIdentities) {
  const DesignDensity u = DesignDensity::uniform();
  const DesignDensity b = DesignDensity::beta(1.0, 0.5);
  const double g = std::exp(0.5);
  for (const DesignDensity* f : {&u, &b}) {
    const BiasVariance ll = row(AsymptoticMethod::LL, 1, 1.0, g, 0.1, *f, 0.5);
    const BiasVariance de1 = row(AsymptoticMethod::DE1, 1, 1.0, g, 0.1, *f, 0.5);
    EXPECT_EQ(ll.bias, de1.bias);
    EXPECT_EQ(ll.variance, de1.variance);
    for (int k = 1; k <= 5; ++k) {
      const BiasVariance r = row(AsymptoticMethod::DE1, k, 1.3, g, 0.1, *f, 0.5);
      EXPECT_EQ(r.bias, de1k_bias(k, 1.3, g, 0.1, gauss_moments(), *f, 0.5));
      EXPECT_EQ(r.variance, de1k_variance(0.1, 100, 0.1, gauss_moments(), *f, 0.5));
    }
  }
  // Uniform design: the NW bias loses its f' term.
  const BiasVariance nw = row(AsymptoticMethod::NW, 1, 1.2, g, 0.1, u, 0.5);
  EXPECT_NEAR(nw.bias, 0.5 * 1.44 * g * 0.01, 1e-10 * nw.bias);
  EXPECT_EQ(nw.bias, row(AsymptoticMethod::LL, 1, 1.2, g, 0.1, u, 0.5).bias);
  EXPECT_NE(row(AsymptoticMethod::NW, 1, 1.2, g, 0.1, b, 0.5).bias,
            row(AsymptoticMethod::LL, 1, 1.2, g, 0.1, b, 0.5).bias);
}

TEST(LeadingTerms, HigherOrderVarianceFormula) {
  const KernelMoments& m = gauss_moments();
  const double expected = (m.mu[4] * m.mu[4] * m.v[0] - 2 * m.mu[2] * m.mu[4] * m.v[2] +
                           m.mu[2] * m.mu[2] * m.v[4]) /
                          std::pow(m.mu[2] * m.mu[2] - m.mu[4], 2) * 0.01 / (100 * 0.1);
  const DesignDensity u = DesignDensity::uniform();
  EXPECT_NEAR(row(AsymptoticMethod::LQ, 1, 1.0, 1.0, 0.1, u, 0.5).variance, expected, 1e-15);
  EXPECT_NEAR(row(AsymptoticMethod::LC, 1, 1.0, 1.0, 0.1, u, 0.5).variance, expected, 1e-15);
  EXPECT_NEAR(row(AsymptoticMethod::DS, 1, 1.0, 1.0, 0.1, u, 0.5).variance,
              0.01 * 0.3366 / 10, 1e-15);
}

TEST(LeadingTerms, DegenerateKernelRejected) {
  KernelMoments m = gauss_moments();
  m.mu[4] = m.mu[2] * m.mu[2];
  AsymptoticSetup setup;
  setup.method = AsymptoticMethod::LQ;
  setup.ds_constant = 0.3;
  EXPECT_THROW(leading_bias_variance(setup, 1.0, DesignDensity::uniform(), m, 0.5), DomainError);
  setup.method = AsymptoticMethod::DS;
  EXPECT_THROW(leading_bias_variance(setup, 1.0, DesignDensity::uniform(), m, 0.5), DomainError);
}

TEST(Misspecified, ReducesToCorrectModelWhenDampingVanishes) {
  const MisspecifiedTruth t(1.0, 0.0);
  for (const DesignDensity& f : {DesignDensity::uniform(), DesignDensity::beta(1.0, 0.5)}) {
    const double g = std::exp(0.4);
    EXPECT_EQ(t.g(0.4), g);
    for (auto [m, k] : {std::pair{AsymptoticMethod::NW, 1}, std::pair{AsymptoticMethod::LL, 1},
                        std::pair{AsymptoticMethod::DE1, 1}}) {
      EXPECT_EQ(misspecified_bias(m, t, f, gauss_moments(), 0.1, 0.4),
                row(m, k, 1.0, g, 0.1, f, 0.4).bias);
    }
  }
}

TEST(Misspecified, RowRelations) {
  const MisspecifiedTruth t(1.0, 0.1);
  const DesignDensity u = DesignDensity::uniform();
  const double nw = misspecified_bias(AsymptoticMethod::NW, t, u, gauss_moments(), 0.1, 0.5);
  const double ll = misspecified_bias(AsymptoticMethod::LL, t, u, gauss_moments(), 0.1, 0.5);
  const double de = misspecified_bias(AsymptoticMethod::DE1, t, u, gauss_moments(), 0.1, 0.5);
  EXPECT_EQ(nw, ll);
  EXPECT_LT(std::abs(de), std::abs(nw));
  EXPECT_THROW(misspecified_bias(AsymptoticMethod::LQ, t, u, gauss_moments(), 0.1, 0.5),
               InputError);
}

TEST(Misspecified, PrintedAndCorrectedSecondDerivative) {
  const MisspecifiedTruth t(1.0, 0.2);
  const double x = 0.3, g = t.g(x), s = 1.0 - 2 * x * 0.2;
  EXPECT_NEAR(t.g1(x), s * g, 1e-15);
  EXPECT_NEAR(t.g2(x, true), (s * s - 2 * x * 0.2) * g, 1e-15);
  EXPECT_NEAR(t.g2(x, false), (s * s - 2 * 0.2) * g, 1e-15);
  // Finite differences agree with the corrected form.
  const double step = 1e-4;
  const double fd = (t.g(x + step) - 2 * g + t.g(x - step)) / (step * step);
  EXPECT_NEAR(fd, t.g2(x, false), 1e-6);
  EXPECT_EQ(t.g2(1.0, true), t.g2(1.0, false));
}

TEST(Bias, DenseDesignMatchesLeadingTerm) {
  // Noiseless e^x on a dense equispaced design: the DE1-1 error at h = 0.05
  // is within 15% of its leading-order bias.
  std::vector<double> x, y;
  for (int i = 0; i <= 20000; ++i) {
    x.push_back(i / 20000.0);
    y.push_back(std::exp(x.back()));
  }
  const Dataset d(x, y);
  const double err = de1k_fit(d, 1, 1.0, 0.05, Kernel::gaussian(), 0.5) - std::exp(0.5);
  const double lead =
      de1k_bias(1, 1.0, std::exp(0.5), 0.05, gauss_moments(), DesignDensity::uniform(), 0.5);
  EXPECT_NEAR(err / lead, 1.0, 0.15);
}

TEST(VarianceRatio, LambdaZeroGivesOnes) {
  const VarianceRatioResult r = variance_ratio_study(10, 0.0, 3, std::nullopt, Kernel::gaussian(), 4);
  for (double v : r.ratios) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(VarianceRatio, MatchesHandExpansion) {
  const VarianceRatioResult r = variance_ratio_study(10, 1.0, 1, std::nullopt, Kernel::gaussian(), 9);
  ASSERT_EQ(r.design.size(), 10u);
  for (std::size_t j = 0; j < r.design.size(); ++j) {
    const double x0 = r.design[j];
    double a = 0, b = 0, c = 0, d = 0;
    for (double xi : r.design) {
      const double w = dekreg::testing::gauss_pdf((xi - x0) / r.h) / r.h;
      const double s = 1.0 + (xi - x0);
      a += s * s * w * w;
      b += s * s * w;
      c += w * w;
      d += w;
    }
    EXPECT_NEAR(r.ratios[j], (a / (b * b)) / (c / (d * d)), 1e-12);
    EXPECT_NEAR(finite_sample_variance_ratio(r.design, 1.0, 1, r.h, Kernel::gaussian(), x0),
                r.ratios[j], 1e-15);
  }
  std::vector<double> sorted = r.design;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> gaps;
  for (std::size_t i = 1; i < sorted.size(); ++i) gaps.push_back(sorted[i] - sorted[i - 1]);
  std::sort(gaps.begin(), gaps.end());
  EXPECT_EQ(r.h, 0.5 * gaps[4]);
  EXPECT_THROW(variance_ratio_study(1, 1.0, 1, 0.1, Kernel::gaussian(), 1), InputError);
}
