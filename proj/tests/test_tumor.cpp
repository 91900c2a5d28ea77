#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "dekreg/csv.hpp"
#include "dekreg/errors.hpp"
#include "dekreg/growth.hpp"
#include "dekreg/local_fit.hpp"
#include "dekreg/tumor.hpp"

using namespace dekreg;

TEST(TumorData, EmbeddedTables) {
  const Dataset full = TumorData::full();
  EXPECT_EQ(full, Dataset({21, 25, 28, 31, 33, 35, 38, 40, 42, 45},
                          {0.05, 0.09, 0.22, 0.32, 0.61, 0.70, 0.90, 1.29, 1.77, 3.32}));
  EXPECT_EQ(TumorData::sparse(), Dataset({21, 25, 28, 42, 45}, {0.05, 0.09, 0.22, 1.77, 3.32}));
}

TEST(TumorData, CsvRoundTrip) {
  const std::string text = dataset_to_csv(TumorData::full(), "time", "volume");
  EXPECT_EQ(text.substr(0, 12), "time,volume\n");
  EXPECT_EQ(parse_xy_csv(text, {{"time", "volume"}}), TumorData::full());
}

TEST(SparseDemo, CurvesDefinedAndReductions) {
  const SparseDemoResult r = sparse_demo(3.5, Kernel::gaussian(), 49);
  ASSERT_EQ(r.de1.grid.front(), 21.0);
  ASSERT_EQ(r.de1.grid.back(), 45.0);
  EXPECT_TRUE(r.de1.defined.front() && r.de1.defined.back());
  EXPECT_GT(r.de1.values.front(), 0.0);
  EXPECT_GT(r.de1.values.back(), 0.0);
  EXPECT_EQ(r.lambda, loglinear_exponential(TumorData::sparse()).lambda);

  const SparseDemoResult zero = sparse_demo(3.5, Kernel::gaussian(), 49, 0.0);
  EXPECT_EQ(zero.de1.values, zero.nw.values);

  const SparseDemoResult wide = sparse_demo(1e3, Kernel::gaussian(), 5);
  const double mean = (0.05 + 0.09 + 0.22 + 1.77 + 3.32) / 5;
  for (double v : wide.nw.values) EXPECT_NEAR(v, mean, 1e-3);
  EXPECT_THROW(sparse_demo(0.0, Kernel::gaussian(), 5), InputError);
}

TEST(TumorPipeline, ResidualSdNearPublishedValue) {
  const auto truth = tumor_truth_curve(2.38, Kernel::gaussian());
  EXPECT_NEAR(residual_sd(truth, SdDenominator::N), 0.089, 0.005);
  const double n = residual_sd(truth, SdDenominator::N);
  EXPECT_NEAR(residual_sd(truth, SdDenominator::NMinus1), n * std::sqrt(10.0 / 9.0), 1e-15);
  EXPECT_NEAR(residual_sd(truth, SdDenominator::NMinus2), n * std::sqrt(10.0 / 8.0), 1e-15);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(truth[i], local_poly_fit(TumorData::full().log_response(), 1, 2.38,
                                       Kernel::gaussian(), TumorData::time[i]));
  }
}

TEST(TumorPipeline, NoiselessReplicatesCoincide) {
  PipelineConfig cfg;
  cfg.replicates = 3;
  cfg.noise_sd_override = 0.0;
  const PredictionReport r = run_tumor_pipeline(cfg, 1);
  for (const PredictionRow& row : r.rows) {
    for (const auto& f : row.fitted) EXPECT_EQ(f, row.fitted.front()) << row.method;
  }
}

TEST(TumorPipeline, DeterministicAndRecomputable) {
  PipelineConfig cfg;
  cfg.replicates = 10;
  const PredictionReport a = run_tumor_pipeline(cfg, 42);
  cfg.threads = 3;
  const PredictionReport b = run_tumor_pipeline(cfg, 42);
  EXPECT_EQ(prediction_to_csv(a), prediction_to_csv(b));
  EXPECT_EQ(a.truth, tumor_truth_curve(2.38, Kernel::gaussian()));
  const std::vector<std::string> names = {"NW", "LL", "LQ", "DE1-1", "DE1-2", "NLS"};
  ASSERT_EQ(a.rows.size(), names.size());
  for (std::size_t m = 0; m < names.size(); ++m) {
    const PredictionRow& row = a.rows[m];
    EXPECT_EQ(row.method, names[m]);
    double log_sum = 0, orig_sum = 0;
    int ok = 0;
    for (const auto& f : row.fitted) {
      if (!std::isfinite(f[0])) continue;
      double l = 0, o = 0;
      for (std::size_t j = 0; j < 5; ++j) {
        const double t = a.truth[TumorData::removed_indices[j] - 1];
        l += (f[j] - t) * (f[j] - t);
        o += (std::exp(f[j]) - std::exp(t)) * (std::exp(f[j]) - std::exp(t));
      }
      log_sum += l / 5;
      orig_sum += o / 5;
      ++ok;
    }
    EXPECT_EQ(row.failures, 10 - ok);
    EXPECT_NEAR(row.log_scale, log_sum / ok, 1e-15);
    EXPECT_NEAR(row.original_scale, orig_sum / ok, 1e-15);
  }
  const std::string csv = prediction_to_csv(a);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,log_scale,original_scale");
}

TEST(TumorPipeline, FixedParametersUsedEverywhere) {
  PipelineConfig cfg;
  cfg.replicates = 4;
  cfg.reestimate_growth_params = false;
  const PredictionReport r = run_tumor_pipeline(cfg, 5);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(r.replicate_alpha[i], r.fixed_alpha);
    EXPECT_EQ(r.replicate_lambda[i], r.fixed_lambda);
  }
  cfg.replicates = 0;
  EXPECT_THROW(run_tumor_pipeline(cfg, 5), InputError);
}
