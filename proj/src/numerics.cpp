#include "dekreg/numerics.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace dekreg {

namespace {

struct SimpsonPanel {
  double a, b, fa, fm, fb, whole;
};

double simpson_recurse(const ScalarFunction& f, const SimpsonPanel& p, double tol, int depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm)) {
    throw QuadratureError("integrand is not finite near " + std::to_string(m));
  }
  const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    throw QuadratureError("adaptive Simpson did not converge on [" + std::to_string(p.a) + ", " +
                          std::to_string(p.b) + "]");
  }
  return simpson_recurse(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         simpson_recurse(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const ScalarFunction& f, double a, double b, double abs_tol,
                        int max_depth) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, abs_tol, max_depth);
  // Start from a few panels so that narrow features are not missed by the
  // first five samples.
  constexpr int kStartPanels = 16;
  const double width = (b - a) / kStartPanels;
  double total = 0.0;
  for (int i = 0; i < kStartPanels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == kStartPanels) ? b : lo + width;
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) {
      throw QuadratureError("integrand is not finite on [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
    }
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson_recurse(f, {lo, hi, fa, fm, fb, whole}, abs_tol / kStartPanels, max_depth);
  }
  return total;
}

MinimizeResult golden_section_minimize(const ScalarFunction& f, double lo, double hi, double tol,
                                       int max_iter) {
  if (hi < lo) std::swap(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  for (; it < max_iter; ++it) {
    const double mid = 0.5 * (a + b);
    if (b - a <= tol * std::max(1.0, std::abs(mid))) break;
    // Non-finite values are treated as +inf so the search moves away from them.
    const double vc = std::isfinite(fc) ? fc : std::numeric_limits<double>::infinity();
    const double vd = std::isfinite(fd) ? fd : std::numeric_limits<double>::infinity();
    if (vc <= vd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  MinimizeResult best{c, fc, it};
  if (!(fc <= fd)) best = {d, fd, it};
  return best;
}

double median(std::span<const double> values) {
  if (values.empty()) throw InputError("median of an empty sequence");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

LineFit ols_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InputError("ols_line needs at least two paired values");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InputError("ols_line needs at least two distinct x values");
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw InputError("log_space needs 0 < lo <= hi, n >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(llo + step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace dekreg
