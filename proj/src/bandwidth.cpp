#include "dekreg/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dekreg/errors.hpp"
#include "dekreg/numerics.hpp"

namespace dekreg {

namespace {

constexpr int kDefaultGridSize = 25;

}  // namespace

BandwidthGrid::BandwidthGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InputError("bandwidth grid is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw InputError("bandwidth grid values must be positive and finite");
    }
    if (i > 0 && !(values_[i] > values_[i - 1])) {
      throw InputError("bandwidth grid must be strictly increasing");
    }
  }
}

BandwidthGrid BandwidthGrid::default_for(const Dataset& data) {
  const double rot = rot_bandwidth(data);
  const auto [mn, mx] = std::minmax_element(data.x().begin(), data.x().end());
  const double lo = 0.25 * rot;
  const double hi = 2.0 * (*mx - *mn);
  if (!(hi > lo)) return BandwidthGrid({lo});
  return BandwidthGrid(log_space(lo, hi, kDefaultGridSize));
}

double loocv_score(const Dataset& data, const Method& method, const Kernel& kernel, double h,
                   int* undefined_count) {
  if (data.size() < 3) throw InputError("leave-one-out CV needs n >= 3");
  const auto x = data.x();
  const auto y = data.y();
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= static_cast<double>(y.size());

  double score = 0.0;
  int undefined = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Dataset rest = data.without(i);
    double residual = 0.0;
    try {
      residual = y[i] - fit_point(rest, method, h, kernel, x[i]);
    } catch (const UndefinedAtPoint&) {
      ++undefined;
      residual = y[i] - ybar;
    } catch (const NonConvergence&) {
      ++undefined;
      residual = y[i] - ybar;
    }
    score += residual * residual;
  }
  if (undefined_count != nullptr) *undefined_count = undefined;
  if (undefined == static_cast<int>(data.size())) return std::numeric_limits<double>::infinity();
  return score;
}

CvSelection loocv_select(const Dataset& data, const Method& method, const Kernel& kernel,
                         const BandwidthGrid& grid) {
  const Method resolved = resolve_parameters(data, method);
  CvSelection out;
  out.scores.reserve(grid.size());
  out.undefined_counts.reserve(grid.size());
  bool found = false;
  for (double h : grid.values()) {
    int undefined = 0;
    const double s = loocv_score(data, resolved, kernel, h, &undefined);
    out.scores.push_back(s);
    out.undefined_counts.push_back(undefined);
    if (std::isfinite(s) && (!found || s < out.score)) {
      out.h = h;
      out.score = s;
      found = true;
    }
  }
  if (!found) {
    throw SelectionError("LOOCV: every bandwidth gives undefined leave-one-out fits for " +
                         resolved.label());
  }
  return out;
}

double rot_bandwidth(const Dataset& data) {
  if (data.size() < 2) throw InputError("rot_bandwidth needs at least two observations");
  std::vector<double> x(data.x().begin(), data.x().end());
  std::sort(x.begin(), x.end());
  if (!(x.back() > x.front())) throw InputError("rot_bandwidth: all x values are identical");
  std::vector<double> diffs(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) diffs[i - 1] = x[i] - x[i - 1];
  const double h = 0.5 * median(diffs);
  if (!(h > 0.0)) {
    throw InputError("rot_bandwidth: median spacing is zero (too many tied x values)");
  }
  return h;
}

}  // namespace dekreg
