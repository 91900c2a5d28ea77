#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dekreg/dataset.hpp"
#include "dekreg/estimators.hpp"
#include "dekreg/kernel.hpp"

namespace dekreg {

enum class DesignKind { Uniform, Beta };

/// One simulation setting: mean curve, noise level, covariate design, size.
///   id 1: e^x,  id 2: e^{x - 0.025 x^2},  id 3: e^{x - 0.1 x^2}
/// The sparse design is Beta(1.0, 0.5) on [0, 1].
struct Scenario {
  int id = 1;
  double noise_sd = 0.1;
  DesignKind design = DesignKind::Uniform;
  int n = 25;

  Scenario() = default;
  Scenario(int id, int n, DesignKind design, double noise_sd = 0.1);

  double mean(double x) const;
  std::string column_label() const;  // "Scen. 1 (25)"
};

std::string to_string(DesignKind design);
DesignKind design_from_name(const std::string& name);

/// Draw n design points and noisy responses; deterministic per seed.
Dataset draw_dataset(const Scenario& scenario, std::uint64_t seed);

/// Generator seed for replicate r of a study started with `seed`.
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate);

/// median_i |fitted_i - truth_i|.
double mad_score(const std::vector<double>& fitted, const std::vector<double>& truth);

/// How DE1-k methods obtain lambda inside a study.
struct LambdaMode {
  bool estimate = false;
  double value = 1.0;

  static LambdaMode known(double v) { return {false, v}; }
  static LambdaMode estimated() { return {true, 0.0}; }
  std::string describe() const;
};

struct MethodReport {
  std::string method;
  std::vector<double> mads;        // NaN for failed replicates
  std::vector<double> bandwidths;  // NaN for global methods or failures
  std::vector<double> lambdas;     // lambda used by DE1-k, NaN otherwise
  int failures = 0;
  double mean_mad = 0.0;
  double se_mad = 0.0;
};

struct SimReport {
  Scenario scenario;
  int replicates = 0;
  std::uint64_t seed = 0;
  std::string lambda_mode;
  std::vector<MethodReport> methods;

  const MethodReport* find(const std::string& method) const;
};

/// NW, LL, LQ, LC, DE1-1 .. DE1-5, NLS.
std::vector<Method> default_battery();

/// Mean of the finite values and their standard error (sample sd / sqrt(count)).
void summarize(MethodReport& report);

/// Monte Carlo comparison: per replicate, draw a dataset; per method, select
/// h by LOOCV on the default grid, fit at the design points and score the MAD
/// against the true mean. Replicates may run on `threads` workers; every
/// replicate draws from its own seeded generator, so the report does not
/// depend on scheduling.
SimReport run_study(const Scenario& scenario, const std::vector<Method>& methods, int replicates,
                    std::uint64_t seed, const LambdaMode& lambda_mode, const Kernel& kernel,
                    int threads = 1);

/// Table of per-method summaries (times 1000) across scenario columns.
struct TableDocument {
  std::vector<std::string> columns;
  std::vector<std::string> rows;
  std::vector<std::vector<std::optional<double>>> mean;  // [row][column]
  std::vector<std::vector<std::optional<double>>> se;
  std::vector<std::string> warnings;
  std::string design;
};

/// Arrange reports into mean / SE tables: rows follow the published method
/// order, columns run "Scen. 1 (25)" .. "Scen. 3 (25)", "Scen. 1 (10)" ..
/// Missing cells are empty with a warning. Throws InputError for an empty
/// collection or mixed designs.
TableDocument emit_tables(const std::vector<SimReport>& reports);

std::string tables_to_csv(const TableDocument& doc);
std::string tables_to_text(const TableDocument& doc);

/// Per-replicate MADs, columns scenario,n,design,method,replicate,mad.
std::string mad_dump_csv(const std::vector<SimReport>& reports);

}  // namespace dekreg
