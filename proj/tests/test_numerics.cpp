#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dekreg/csv.hpp"
#include "dekreg/dataset.hpp"
#include "dekreg/errors.hpp"
#include "dekreg/format.hpp"
#include "dekreg/numerics.hpp"

using namespace dekreg;

TEST(Numerics, SimpsonIntegratesPolynomialsAndGaussian) {
  EXPECT_NEAR(adaptive_simpson([](double x) { return x * x * x; }, 0.0, 2.0), 4.0, 1e-12);
  const double g = adaptive_simpson(
      [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI); }, -8.0, 8.0);
  EXPECT_NEAR(g, 1.0, 1e-10);
}

TEST(Numerics, SimpsonRejectsNonFiniteIntegrand) {
  EXPECT_THROW(adaptive_simpson([](double x) { return 1.0 / x; }, -1.0, 1.0), QuadratureError);
}

TEST(Numerics, GoldenSectionFindsQuadraticMinimum) {
  const auto r = golden_section_minimize([](double x) { return (x - 0.3) * (x - 0.3); }, -2, 2);
  EXPECT_NEAR(r.x, 0.3, 1e-8);
}

TEST(Numerics, MedianMatchesSortDefinition) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int n = 1; n <= 12; ++n) {
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    std::vector<double> s = v;
    std::sort(s.begin(), s.end());
    const double expected = n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
    EXPECT_EQ(median(v), expected);
  }
  EXPECT_THROW(median(std::vector<double>{}), InputError);
}

TEST(Numerics, OlsLineRecoversExactLine) {
  const std::vector<double> x = {0, 1, 2, 3}, y = {1, 3, 5, 7};
  const LineFit f = ols_line(x, y);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
}

TEST(Numerics, LogSpaceEndpoints) {
  const auto v = log_space(0.1, 10.0, 5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_DOUBLE_EQ(v.front(), 0.1);
  EXPECT_DOUBLE_EQ(v.back(), 10.0);
  EXPECT_NEAR(v[2], 1.0, 1e-14);
}

TEST(Dataset, ValidatesInput) {
  EXPECT_THROW(Dataset({1.0, 2.0}, {1.0}), InputError);
  EXPECT_THROW(Dataset({}, {}), InputError);
  EXPECT_THROW(Dataset({1.0, NAN}, {1.0, 2.0}), InputError);
  EXPECT_THROW(Dataset({1.0}, {-1.0}).log_response(), DomainError);
}

TEST(Dataset, WithoutAndSubset) {
  const Dataset d({1, 2, 3}, {4, 5, 6});
  const Dataset w = d.without(1);
  EXPECT_EQ(w, Dataset({1, 3}, {4, 6}));
  const std::vector<std::size_t> idx = {2, 0};
  EXPECT_EQ(d.subset(idx), Dataset({3, 1}, {6, 4}));
}

TEST(Format, ExactRoundTripsAndNa) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(format_exact(v)), v);
  }
  EXPECT_EQ(format_exact(NAN), "NA");
  EXPECT_EQ(format_short(53.2711, 4), "53.27");
}

TEST(Csv, ParsesHeaderAndRows) {
  const Dataset d = parse_xy_csv("x,y\n0,1\n0.5,2.5\n", {{"x", "y"}});
  EXPECT_EQ(d, Dataset({0, 0.5}, {1, 2.5}));
  const Dataset t = parse_xy_csv("time,volume\r\n21,0.05\r\n", {{"time", "volume"}});
  EXPECT_EQ(t.size(), 1u);
}

TEST(Csv, ReportsLineNumbers) {
  try {
    parse_xy_csv("x,y\n0,1\n0.5,abc\n", {{"x", "y"}});
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(parse_xy_csv("a,b\n1,2\n", {{"x", "y"}}), InputError);
  EXPECT_THROW(parse_xy_csv("x,y\n1,2,3\n", {{"x", "y"}}), InputError);
  EXPECT_THROW(parse_xy_csv("x,y\n", {{"x", "y"}}), InputError);
}

TEST(Csv, DatasetRoundTripIsBitExact) {
  const Dataset d({0.1, 1.0 / 3.0, 2e-300}, {M_PI, -1e300, 0.0});
  EXPECT_EQ(parse_xy_csv(dataset_to_csv(d, "x", "y"), {{"x", "y"}}), d);
}
