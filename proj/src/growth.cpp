#include "dekreg/growth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dekreg/errors.hpp"
#include "dekreg/local_fit.hpp"
#include "dekreg/numerics.hpp"

namespace dekreg {

namespace {

constexpr double kLogClip = 1e-8;
constexpr double kAlphaClamp = 1e-6;
constexpr int kNewtonMaxIter = 200;
constexpr int kMaxHalvings = 30;
constexpr double kNewtonStepTol = 1e-10;
constexpr double kFallbackHalfWidth = 5.0;

struct LocalObjective {
  double value = 0.0;
  double slope = 0.0;
  double curvature = 0.0;
};

class SubexpObjective {
 public:
  SubexpObjective(const Dataset& data, int order, const GrowthLaw& law, double h,
                  const Kernel& kernel, double x0)
      : order_(order), lambda_(law.lambda()), beta_(law.alpha() - 1.0) {
    const auto x = data.x();
    const auto z = data.y();
    double wmax = 0.0;
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      w[i] = kh_weight(kernel, h, x[i] - x0);
      wmax = std::max(wmax, w[i]);
    }
    if (!(wmax > 0.0)) throw UndefinedAtPoint(x0, "kernel weights vanish");
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (w[i] > kWeightFloor * wmax) {
        d_.push_back(x[i] - x0);
        z_.push_back(z[i]);
        w_.push_back(w[i] / wmax);
      }
    }
  }

  double value(double g) const { return evaluate(g).value; }

  LocalObjective evaluate(double g) const {
    const double e1 = std::exp(beta_ * g);
    const double e2 = e1 * e1;
    LocalObjective out;
    for (std::size_t i = 0; i < d_.size(); ++i) {
      const double d = d_[i];
      double pred = g + lambda_ * e1 * d;
      double dpred = 1.0 + lambda_ * beta_ * e1 * d;
      double d2pred = lambda_ * beta_ * beta_ * e1 * d;
      if (order_ == 2) {
        const double q = 0.5 * lambda_ * lambda_ * beta_ * d * d;
        pred += q * e2;
        dpred += 2.0 * beta_ * q * e2;
        d2pred += 4.0 * beta_ * beta_ * q * e2;
      }
      const double r = z_[i] - pred;
      out.value += w_[i] * r * r;
      out.slope += -2.0 * w_[i] * r * dpred;
      out.curvature += 2.0 * w_[i] * (dpred * dpred - r * d2pred);
    }
    return out;
  }

 private:
  int order_;
  double lambda_;
  double beta_;
  std::vector<double> d_, z_, w_;
};

void require_distinct_x(const Dataset& data, const char* who) {
  const auto x = data.x();
  if (x.size() < 2) throw InputError(std::string(who) + " needs at least two observations");
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  if (!(*mx > *mn)) throw InputError(std::string(who) + " needs at least two distinct x values");
}

}  // namespace

GrowthLaw::GrowthLaw(GrowthKind kind, double lambda, double alpha)
    : kind_(kind), lambda_(lambda), alpha_(alpha) {
  if (!std::isfinite(lambda)) throw InputError("growth rate lambda must be finite");
  if (kind == GrowthKind::SubExponential && !(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("sub-exponential growth needs 0 < alpha < 1");
  }
}

GrowthLaw GrowthLaw::exponential(double lambda) {
  return GrowthLaw(GrowthKind::Exponential, lambda, 1.0);
}

GrowthLaw GrowthLaw::sub_exponential(double lambda, double alpha) {
  return GrowthLaw(GrowthKind::SubExponential, lambda, alpha);
}

double GrowthLaw::first_derivative(double g) const {
  if (kind_ == GrowthKind::Exponential) return lambda_ * g;
  return lambda_ * std::pow(g, alpha_);
}

double GrowthLaw::second_derivative(double g) const {
  if (kind_ == GrowthKind::Exponential) return lambda_ * lambda_ * g;
  return alpha_ * lambda_ * lambda_ * std::pow(g, 2.0 * alpha_ - 1.0);
}

double subexp_solution(const GrowthLaw& law, double x, double g0) {
  if (law.kind() != GrowthKind::SubExponential) {
    throw InputError("subexp_solution needs a sub-exponential law");
  }
  const double one_minus = 1.0 - law.alpha();
  const double base = one_minus * (law.lambda() * x + g0);
  const double exponent = 1.0 / one_minus;
  if (base <= 0.0 && exponent != std::floor(exponent)) {
    throw DomainError("subexp_solution: base " + std::to_string(base) +
                      " is not positive for non-integer exponent");
  }
  return std::pow(base, exponent);
}

double local_subexp_fit(const Dataset& log_data, int order, const GrowthLaw& law, double h,
                        const Kernel& kernel, double x0) {
  if (order != 1 && order != 2) throw InputError("local growth order must be 1 or 2");
  if (law.kind() != GrowthKind::SubExponential) {
    throw InputError("local_subexp_fit needs a sub-exponential law");
  }
  const double start = local_poly_fit(log_data, 0, h, kernel, x0);
  const SubexpObjective objective(log_data, order, law, h, kernel, x0);

  double g = start;
  bool stalled = false;
  for (int iter = 0; iter < kNewtonMaxIter && !stalled; ++iter) {
    const LocalObjective here = objective.evaluate(g);
    if (!std::isfinite(here.value) || !(here.curvature > 0.0) || !std::isfinite(here.curvature)) {
      stalled = true;
      break;
    }
    double step = -here.slope / here.curvature;
    if (std::abs(step) < kNewtonStepTol) return g + step;
    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      const double trial = objective.value(g + step);
      if (std::isfinite(trial) && trial <= here.value) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    g += step;
    if (std::abs(step) < kNewtonStepTol) return g;
  }
  if (!stalled) {
    throw NonConvergence("local_subexp_fit: Newton did not converge in " +
                         std::to_string(kNewtonMaxIter) + " iterations at x0 = " +
                         std::to_string(x0) + " (last G = " + std::to_string(g) + ")");
  }

  // Newton failed to make progress: golden section around the start.
  const MinimizeResult fallback = golden_section_minimize(
      [&objective](double v) { return objective.value(v); }, start - kFallbackHalfWidth,
      start + kFallbackHalfWidth, 1e-12, 2000);
  if (!std::isfinite(fallback.value)) {
    throw NonConvergence("local_subexp_fit: no finite objective near x0 = " + std::to_string(x0));
  }
  if (std::abs(fallback.x - (start - kFallbackHalfWidth)) < 1e-6 ||
      std::abs(fallback.x - (start + kFallbackHalfWidth)) < 1e-6) {
    throw NonConvergence("local_subexp_fit: minimum not bracketed at x0 = " + std::to_string(x0) +
                         " (start " + std::to_string(start) + ")");
  }
  return fallback.x;
}

ExponentialFit loglinear_exponential(const Dataset& data) {
  require_distinct_x(data, "loglinear_exponential");
  const auto y = data.y();
  std::vector<double> logy(y.size());
  bool any_above = false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    any_above = any_above || y[i] > kLogClip;
    logy[i] = std::log(std::max(y[i], kLogClip));
  }
  if (!any_above) throw EstimationError("all responses fall below the log clip 1e-8");
  const LineFit line = ols_line(data.x(), logy);
  ExponentialFit out;
  out.c = std::exp(line.intercept);
  out.lambda = line.slope;
  const auto x = data.x();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - out.c * std::exp(out.lambda * x[i]);
    out.sse += r * r;
  }
  return out;
}

ExponentialFit fit_nls_exponential(const Dataset& data) {
  constexpr int kMaxIter = 500;
  constexpr double kRelTol = 1e-12;
  ExponentialFit fit = loglinear_exponential(data);
  const auto x = data.x();
  const auto y = data.y();
  double yy = 0.0;
  for (double v : y) yy += v * v;

  auto sse_at = [&](double c, double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - c * std::exp(lambda * x[i]);
      s += r * r;
    }
    return s;
  };

  double damping = 1e-3;
  fit.sse = sse_at(fit.c, fit.lambda);
  for (int iter = 1; iter <= kMaxIter; ++iter) {
    fit.iterations = iter;
    if (fit.sse <= 1e-30 * std::max(yy, 1e-300)) return fit;
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = std::exp(fit.lambda * x[i]);
      const double j1 = e;
      const double j2 = fit.c * x[i] * e;
      const double r = y[i] - fit.c * e;
      a11 += j1 * j1;
      a12 += j1 * j2;
      a22 += j2 * j2;
      g1 += j1 * r;
      g2 += j2 * r;
    }
    // Marquardt scaling keeps the step invariant to rescaling c.
    const double m11 = a11 * (1.0 + damping);
    const double m22 = a22 * (1.0 + damping);
    const double det = m11 * m22 - a12 * a12;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
      damping *= 10.0;
      if (damping > 1e16) return fit;
      continue;
    }
    const double dc = (m22 * g1 - a12 * g2) / det;
    const double dl = (m11 * g2 - a12 * g1) / det;
    const double c_new = fit.c + dc;
    const double l_new = fit.lambda + dl;
    const double sse_new = sse_at(c_new, l_new);
    if (std::isfinite(sse_new) && sse_new < fit.sse) {
      const double rel = (fit.sse - sse_new) / fit.sse;
      fit.c = c_new;
      fit.lambda = l_new;
      fit.sse = sse_new;
      damping = std::max(damping / 10.0, 1e-15);
      if (rel < kRelTol) return fit;
    } else {
      damping *= 10.0;
      // No descent direction left at working precision: this is the minimum.
      if (damping > 1e16) return fit;
    }
  }
  throw NonConvergence("fit_nls_exponential: no convergence after " + std::to_string(kMaxIter) +
                       " iterations (c = " + std::to_string(fit.c) +
                       ", lambda = " + std::to_string(fit.lambda) + ")");
}

double estimate_alpha(const Dataset& data) {
  require_distinct_x(data, "estimate_alpha");
  const auto x = data.x();
  const auto y = data.y();
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw DomainError("estimate_alpha needs x > 0 and y > 0");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double slope = ols_line(lx, ly).slope;
  if (!(slope > 0.0)) {
    throw EstimationError("estimate_alpha: log-log slope " + std::to_string(slope) +
                          " is not positive; the sub-exponential model does not apply");
  }
  return std::clamp(1.0 - 1.0 / slope, kAlphaClamp, 1.0 - kAlphaClamp);
}

double subexp_sse(const Dataset& data, double alpha, double lambda) {
  const GrowthLaw law = GrowthLaw::sub_exponential(lambda, alpha);
  const auto x = data.x();
  const auto y = data.y();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - subexp_solution(law, x[i], 0.0);
    s += r * r;
  }
  return s;
}

double estimate_lambda_subexp(const Dataset& data, double alpha_hat) {
  if (!(alpha_hat > 0.0 && alpha_hat < 1.0)) {
    throw DomainError("estimate_lambda_subexp needs 0 < alpha < 1");
  }
  const auto x = data.x();
  const auto y = data.y();
  for (double v : x) {
    if (!(v > 0.0)) throw DomainError("estimate_lambda_subexp needs x > 0");
  }
  const double one_minus = 1.0 - alpha_hat;
  const double power = 1.0 / one_minus;

  // Start from the log-linear approximation log y = power (log((1-a) lambda) + log x).
  double guess = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] > 0.0) {
      guess += one_minus * std::log(y[i]) - std::log(x[i]);
      ++used;
    }
  }
  guess = used > 0 ? guess / used - std::log(one_minus) : 0.0;

  auto sse_log = [&](double theta) {
    double s = 0.0;
    const double scale = one_minus * std::exp(theta);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - std::pow(scale * x[i], power);
      s += r * r;
    }
    return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
  };

  constexpr int kScan = 401;
  constexpr double kHalfRange = 10.0;
  const double dtheta = 2.0 * kHalfRange / (kScan - 1);
  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double v = sse_log(guess - kHalfRange + dtheta * i);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best < 0) throw EstimationError("estimate_lambda_subexp: no finite objective on the scan");
  const double lo = guess - kHalfRange + dtheta * std::max(best - 1, 0);
  const double hi = guess - kHalfRange + dtheta * std::min(best + 1, kScan - 1);
  double theta = golden_section_minimize(sse_log, lo, hi, 1e-12).x;

  // Newton polish in log(lambda): dm/dtheta = power * m.
  double current = sse_log(theta);
  for (int iter = 0; iter < 50; ++iter) {
    const double scale = one_minus * std::exp(theta);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double m = std::pow(scale * x[i], power);
      const double r = y[i] - m;
      d1 += -2.0 * r * power * m;
      d2 += 2.0 * (power * m) * (power * m) - 2.0 * r * power * power * m;
    }
    if (!(d2 > 0.0) || !std::isfinite(d2)) break;
    const double step = -d1 / d2;
    const double trial = sse_log(theta + step);
    if (!(trial <= current)) break;
    theta += step;
    current = trial;
    if (std::abs(step) < 1e-10) break;
  }
  return std::exp(theta);
}

}  // namespace dekreg
