#include "dekreg/tumor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "dekreg/bandwidth.hpp"
#include "dekreg/errors.hpp"
#include "dekreg/format.hpp"
#include "dekreg/growth.hpp"
#include "dekreg/local_fit.hpp"
#include "dekreg/simlab.hpp"

namespace dekreg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PipelineMethod {
  std::string label;
  Method method;
};

// Report rows; the local growth models stand in for DE1-1 / DE1-2.
std::vector<PipelineMethod> pipeline_methods() {
  return {{"NW", Method::nw()},
          {"LL", Method::ll()},
          {"LQ", Method::lq()},
          {"DE1-1", Method::subexp(1)},
          {"DE1-2", Method::subexp(2)},
          {"NLS", Method::nls_subexp()}};
}

double select_bandwidth(const Dataset& train, const Method& method, const Kernel& kernel) {
  try {
    return loocv_select(train, method, kernel, BandwidthGrid::default_for(train)).h;
  } catch (const SelectionError&) {
    return rot_bandwidth(train);
  }
}

}  // namespace

Dataset TumorData::full() {
  return Dataset(std::vector<double>(time.begin(), time.end()),
                 std::vector<double>(volume.begin(), volume.end()));
}

Dataset TumorData::sparse() {
  std::vector<double> x, y;
  for (std::size_t i : sparse_indices) {
    x.push_back(time[i - 1]);
    y.push_back(volume[i - 1]);
  }
  return Dataset(std::move(x), std::move(y));
}

SparseDemoResult sparse_demo(double h, const Kernel& kernel, int grid_size,
                             std::optional<double> lambda_override) {
  return sparse_demo(TumorData::sparse(), h, kernel, grid_size, lambda_override);
}

SparseDemoResult sparse_demo(const Dataset& data, double h, const Kernel& kernel, int grid_size,
                             std::optional<double> lambda_override) {
  if (!(h > 0.0)) throw InputError("sparse_demo needs h > 0");
  if (grid_size < 2) throw InputError("sparse_demo needs at least two grid points");
  const auto [lo, hi] = std::minmax_element(data.x().begin(), data.x().end());
  if (!(*hi > *lo)) throw InputError("sparse_demo needs at least two distinct times");
  const std::vector<double> grid = linear_grid(*lo, *hi, grid_size);
  SparseDemoResult out;
  out.lambda = lambda_override ? *lambda_override : loglinear_exponential(data).lambda;
  out.nw = fit_curve(data, Method::nw(), h, kernel, grid);
  out.ll = fit_curve(data, Method::ll(), h, kernel, grid);
  out.lq = fit_curve(data, Method::lq(), h, kernel, grid);
  out.de1 = fit_curve(data, Method::de1(1, out.lambda), h, kernel, grid);
  return out;
}

std::array<double, 10> tumor_truth_curve(double bandwidth, const Kernel& kernel) {
  const Dataset log_full = TumorData::full().log_response();
  std::array<double, 10> truth{};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] = local_poly_fit(log_full, 1, bandwidth, kernel, TumorData::time[i]);
  }
  return truth;
}

double residual_sd(const std::array<double, 10>& truth, SdDenominator denominator) {
  std::array<double, 10> r{};
  double mean = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = std::log(TumorData::volume[i]) - truth[i];
    mean += r[i];
  }
  mean /= static_cast<double>(r.size());
  double ss = 0.0;
  for (double v : r) ss += (v - mean) * (v - mean);
  const double n = static_cast<double>(r.size());
  const double denom = denominator == SdDenominator::N         ? n
                       : denominator == SdDenominator::NMinus1 ? n - 1.0
                                                               : n - 2.0;
  return std::sqrt(ss / denom);
}

PredictionReport run_tumor_pipeline(const PipelineConfig& config, std::uint64_t seed,
                                const Kernel& kernel) {
  if (config.replicates < 1) throw InputError("tumour pipeline needs at least one replicate");
  if (!(config.truth_bandwidth > 0.0)) throw InputError("truth bandwidth must be positive");
  for (std::size_t idx : config.removed_indices) {
    if (idx < 1 || idx > 10) throw InputError("removed indices must lie in 1..10");
  }
  std::vector<std::size_t> train_idx;
  for (std::size_t i = 1; i <= 10; ++i) {
    bool removed = false;
    for (std::size_t r : config.removed_indices) removed = removed || r == i;
    if (!removed) train_idx.push_back(i - 1);
  }

  PredictionReport report;
  report.seed = seed;
  report.replicates = config.replicates;
  report.truth = tumor_truth_curve(config.truth_bandwidth, kernel);
  report.residual_sd = residual_sd(report.truth, config.sd_denominator);
  report.noise_sd = config.noise_sd_override ? *config.noise_sd_override : report.residual_sd;
  {
    const Dataset observed = TumorData::full().subset(train_idx);
    report.fixed_alpha = estimate_alpha(observed);
    report.fixed_lambda = estimate_lambda_subexp(observed, report.fixed_alpha);
  }

  const auto methods = pipeline_methods();
  const auto reps = static_cast<std::size_t>(config.replicates);
  std::array<double, 5> nan_row;
  nan_row.fill(kNaN);
  for (const auto& pm : methods) {
    PredictionRow row;
    row.method = pm.label;
    row.fitted.assign(reps, nan_row);
    row.bandwidths.assign(reps, kNaN);
    report.rows.push_back(std::move(row));
  }
  report.replicate_alpha.assign(reps, kNaN);
  report.replicate_lambda.assign(reps, kNaN);

  const std::vector<double> times(TumorData::time.begin(), TumorData::time.end());

  auto run_replicate = [&](std::size_t r) {
    std::mt19937_64 rng(replicate_seed(seed, r));
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> z(10);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = report.truth[i] + report.noise_sd * noise(rng);
    const Dataset train = Dataset(times, z).subset(train_idx);

    std::optional<double> alpha, lambda;
    if (config.reestimate_growth_params) {
      try {
        std::vector<double> raw(train.size());
        for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = std::exp(train.y()[i]);
        const Dataset train_raw(std::vector<double>(train.x().begin(), train.x().end()), raw);
        alpha = estimate_alpha(train_raw);
        lambda = estimate_lambda_subexp(train_raw, *alpha);
      } catch (const Error&) {
      }
    } else {
      alpha = report.fixed_alpha;
      lambda = report.fixed_lambda;
    }
    if (alpha) report.replicate_alpha[r] = *alpha;
    if (lambda) report.replicate_lambda[r] = *lambda;

    for (std::size_t m = 0; m < methods.size(); ++m) {
      Method method = methods[m].method;
      const bool growth = method.tag == MethodTag::SubExp1 || method.tag == MethodTag::SubExp2 ||
                          method.tag == MethodTag::NLSSubExp;
      if (growth) {
        if (!alpha || !lambda) continue;
        method.alpha = alpha;
        method.lambda = lambda;
      }
      try {
        double h = 1.0;
        if (method.uses_bandwidth()) {
          h = select_bandwidth(train, method, kernel);
          report.rows[m].bandwidths[r] = h;
        }
        std::array<double, 5> fitted{};
        for (std::size_t j = 0; j < config.removed_indices.size(); ++j) {
          const double x0 = TumorData::time[config.removed_indices[j] - 1];
          fitted[j] = fit_point(train, method, h, kernel, x0);
        }
        report.rows[m].fitted[r] = fitted;
      } catch (const Error&) {
      }
    }
  };

  const int workers = std::clamp(config.threads, 1, config.replicates);
  if (workers == 1) {
    for (std::size_t r = 0; r < reps; ++r) run_replicate(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < reps; r = next++) run_replicate(r);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (auto& row : report.rows) {
    double log_sum = 0.0, orig_sum = 0.0;
    int ok = 0;
    for (const auto& fitted : row.fitted) {
      if (!std::isfinite(fitted[0])) continue;
      double log_se = 0.0, orig_se = 0.0;
      for (std::size_t j = 0; j < fitted.size(); ++j) {
        const double truth = report.truth[config.removed_indices[j] - 1];
        log_se += (fitted[j] - truth) * (fitted[j] - truth);
        const double diff = std::exp(fitted[j]) - std::exp(truth);
        orig_se += diff * diff;
      }
      log_sum += log_se / static_cast<double>(fitted.size());
      orig_sum += orig_se / static_cast<double>(fitted.size());
      ++ok;
    }
    row.failures = config.replicates - ok;
    row.log_scale = ok > 0 ? log_sum / ok : kNaN;
    row.original_scale = ok > 0 ? orig_sum / ok : kNaN;
  }
  return report;
}

std::string prediction_to_csv(const PredictionReport& report) {
  std::ostringstream out;
  out << "method,log_scale,original_scale\n";
  for (const auto& row : report.rows) {
    out << row.method << ',' << format_exact(row.log_scale) << ','
        << format_exact(row.original_scale) << '\n';
  }
  return out.str();
}

}  // namespace dekreg
