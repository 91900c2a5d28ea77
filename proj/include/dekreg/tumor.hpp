#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dekreg/dataset.hpp"
#include "dekreg/estimators.hpp"
#include "dekreg/kernel.hpp"

namespace dekreg {

/// Single-mouse tumour volumes (cm^3) against time (days), ten observations.
struct TumorData {
  static constexpr std::array<double, 10> time = {21, 25, 28, 31, 33, 35, 38, 40, 42, 45};
  static constexpr std::array<double, 10> volume = {0.05, 0.09, 0.22, 0.32, 0.61,
                                                    0.70, 0.90, 1.29, 1.77, 3.32};
  /// 1-based indices kept in the sparse subset.
  static constexpr std::array<std::size_t, 5> sparse_indices = {1, 2, 3, 9, 10};
  /// 1-based indices held out (the gap).
  static constexpr std::array<std::size_t, 5> removed_indices = {4, 5, 6, 7, 8};

  static Dataset full();
  static Dataset sparse();
};

struct SparseDemoResult {
  FitCurve nw;
  FitCurve ll;
  FitCurve lq;
  FitCurve de1;
  double lambda = 0.0;
};

/// NW, LL, LQ and DE1-1 fitted to the sparse subset over an equispaced grid
/// on [21, 45]. DE1-1 uses the log-linear growth rate of the sparse points
/// unless lambda_override is given.
SparseDemoResult sparse_demo(double h, const Kernel& kernel, int grid_size,
                             std::optional<double> lambda_override = std::nullopt);

/// Same four fits on arbitrary positive (time, volume) data over a grid
/// spanning its time range.
SparseDemoResult sparse_demo(const Dataset& data, double h, const Kernel& kernel, int grid_size,
                             std::optional<double> lambda_override = std::nullopt);

enum class SdDenominator { N, NMinus1, NMinus2 };

struct PipelineConfig {
  double truth_bandwidth = 2.38;
  double residual_sd_expected = 0.089;
  std::array<std::size_t, 5> removed_indices = TumorData::removed_indices;
  int replicates = 100;
  SdDenominator sd_denominator = SdDenominator::N;
  /// Re-estimate alpha and lambda on every replicate's training points;
  /// otherwise fix them from the observed sparse data.
  bool reestimate_growth_params = true;
  /// Replaces the empirical residual sd when set (0 gives noiseless replicates).
  std::optional<double> noise_sd_override;
  int threads = 1;
};

struct PredictionRow {
  std::string method;  // NW, LL, LQ, DE1-1, DE1-2, NLS
  double log_scale = 0.0;
  double original_scale = 0.0;
  int failures = 0;
  /// Per replicate fitted log values at the removed points (NaN row on failure).
  std::vector<std::array<double, 5>> fitted;
  std::vector<double> bandwidths;
};

struct PredictionReport {
  double residual_sd = 0.0;
  double noise_sd = 0.0;
  std::array<double, 10> truth{};  // local linear fit of log volume at the ten times
  double fixed_alpha = 0.0;        // from the observed sparse data
  double fixed_lambda = 0.0;
  int replicates = 0;
  std::uint64_t seed = 0;
  std::vector<PredictionRow> rows;
  std::vector<double> replicate_alpha;
  std::vector<double> replicate_lambda;
};

/// Local linear fit of log volume on the full data at the truth bandwidth,
/// evaluated at the ten observation times.
std::array<double, 10> tumor_truth_curve(double bandwidth, const Kernel& kernel);

double residual_sd(const std::array<double, 10>& truth, SdDenominator denominator);

/// Log-scale simulation: replicates drawn around the local linear truth with
/// the empirical residual sd, trained on the five sparse indices, scored by
/// the mean squared error at the removed indices on the log and original
/// scales, averaged over replicates.
PredictionReport run_tumor_pipeline(const PipelineConfig& config, std::uint64_t seed,
                                const Kernel& kernel = Kernel::gaussian());

std::string prediction_to_csv(const PredictionReport& report);

}  // namespace dekreg
