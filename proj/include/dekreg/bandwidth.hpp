#pragma once

#include <vector>

#include "dekreg/dataset.hpp"
#include "dekreg/estimators.hpp"
#include "dekreg/kernel.hpp"

namespace dekreg {

/// Strictly increasing list of positive candidate bandwidths.
class BandwidthGrid {
 public:
  explicit BandwidthGrid(std::vector<double> values);

  /// 25 log-spaced values from 0.25 * rot_bandwidth(data) to 2 * range(x).
  static BandwidthGrid default_for(const Dataset& data);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

struct CvSelection {
  double h = 0.0;
  double score = 0.0;
  std::vector<double> scores;        // one per grid value, +inf when all fits failed
  std::vector<int> undefined_counts;  // leave-one-out fits that were undefined
};

/// Leave-one-out cross-validation score at a single bandwidth:
/// sum_i (y_i - g_{-i}(x_i))^2, where an undefined leave-one-out fit
/// contributes (y_i - mean(y))^2 instead. Returns +inf when every fit is
/// undefined. The method must already be resolved.
double loocv_score(const Dataset& data, const Method& method, const Kernel& kernel, double h,
                   int* undefined_count = nullptr);

/// Bandwidth with the smallest finite LOOCV score; ties go to the smaller h.
/// Global parameters of the method are resolved once on the full data.
/// Throws SelectionError when no grid value has a finite score.
CvSelection loocv_select(const Dataset& data, const Method& method, const Kernel& kernel,
                         const BandwidthGrid& grid);

/// Half the median of the successive differences of the sorted x values.
double rot_bandwidth(const Dataset& data);

}  // namespace dekreg
