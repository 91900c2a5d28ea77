#include "dekreg/local_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dekreg/errors.hpp"

namespace dekreg {

namespace {

void check_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("bandwidth h must be positive and finite");
}

std::vector<double> kernel_weights(const Dataset& data, double h, const Kernel& kernel, double x0) {
  const auto x = data.x();
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = kh_weight(kernel, h, x[i] - x0);
  return w;
}

// Weighted mean; shared by NW and (through identical arithmetic) DE1-k at lambda = 0.
double weighted_mean(const Dataset& data, const std::vector<double>& w, double x0) {
  const auto y = data.y();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num += y[i] * w[i];
    den += w[i];
  }
  if (!(den > kDenominatorFloor)) throw UndefinedAtPoint(x0, "kernel weights vanish");
  return num / den;
}

}  // namespace

TaylorWeight::TaylorWeight(int degree, double lambda) : degree_(degree), lambda_(lambda) {
  if (degree < 1 || degree > kMaxTaylorDegree) {
    throw InputError("Taylor degree k must be in 1.." + std::to_string(kMaxTaylorDegree));
  }
  if (!std::isfinite(lambda)) throw InputError("lambda must be finite");
}

double TaylorWeight::operator()(double u) const noexcept {
  double term = 1.0;
  double sum = 1.0;
  const double step = lambda_ * u;
  for (int p = 1; p <= degree_; ++p) {
    term *= step / p;
    sum += term;
  }
  return sum;
}

double local_poly_fit(const Dataset& data, int degree, double h, const Kernel& kernel, double x0) {
  if (degree < 0 || degree > 3) throw InputError("local polynomial degree must be in 0..3");
  check_bandwidth(h);
  const std::vector<double> w = kernel_weights(data, h, kernel, x0);
  if (degree == 0) return weighted_mean(data, w, x0);

  const double wmax = *std::max_element(w.begin(), w.end());
  if (!(wmax > 0.0)) throw UndefinedAtPoint(x0, "kernel weights vanish");
  const auto x = data.x();
  const auto y = data.y();
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > kWeightFloor * wmax) active.push_back(i);
  }
  const auto cols = static_cast<Eigen::Index>(degree + 1);
  if (static_cast<Eigen::Index>(active.size()) < cols) {
    throw UndefinedAtPoint(x0, std::to_string(active.size()) + " weighted points for degree " +
                                   std::to_string(degree));
  }

  // Columns use (x_i - x0) / h so they share a common scale; the intercept is
  // unaffected by that rescaling.
  Eigen::MatrixXd design(static_cast<Eigen::Index>(active.size()), cols);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(active.size()));
  for (Eigen::Index r = 0; r < design.rows(); ++r) {
    const std::size_t i = active[static_cast<std::size_t>(r)];
    const double sw = std::sqrt(w[i] / wmax);
    const double t = (x[i] - x0) / h;
    double power = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      design(r, c) = sw * power;
      power *= t;
    }
    rhs(r) = sw * y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) {
    throw UndefinedAtPoint(x0, "weighted design is rank deficient");
  }
  const Eigen::VectorXd coef = qr.solve(rhs);
  if (!std::isfinite(coef(0))) throw UndefinedAtPoint(x0, "non-finite local fit");
  return coef(0);
}

double de1k_fit(const Dataset& data, int k, double lambda, double h, const Kernel& kernel,
                double x0) {
  const TaylorWeight taylor(k, lambda);
  check_bandwidth(h);
  const auto x = data.x();
  const auto y = data.y();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = kh_weight(kernel, h, x[i] - x0);
    const double s = taylor(x[i] - x0);
    num += y[i] * s * w;
    den += s * s * w;
  }
  if (!(den > kDenominatorFloor)) throw UndefinedAtPoint(x0, "DE1-k denominator below floor");
  return num / den;
}

}  // namespace dekreg
