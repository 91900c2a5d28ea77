#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dekreg/asymptotics.hpp"
#include "dekreg/bandwidth.hpp"
#include "dekreg/csv.hpp"
#include "dekreg/errors.hpp"
#include "dekreg/estimators.hpp"
#include "dekreg/format.hpp"
#include "dekreg/growth.hpp"
#include "dekreg/kernel.hpp"
#include "dekreg/simlab.hpp"
#include "dekreg/tumor.hpp"

namespace dekreg::cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::pair<std::string, std::string>> kXyHeaders = {{"x", "y"}};
const std::vector<std::pair<std::string, std::string>> kTumorHeaders = {{"time", "volume"},
                                                                         {"x", "y"}};

struct Common {
  std::string output;
  std::string format = "csv";
  std::string kernel = "gaussian";
};

void add_common(CLI::App* cmd, Common& c, bool has_format) {
  cmd->add_option("--output,-o", c.output, "Primary output file (stdout when omitted)");
  cmd->add_option("--kernel", c.kernel, "gaussian or epanechnikov")
      ->check(CLI::IsMember({"gaussian", "epanechnikov"}));
  if (has_format) {
    cmd->add_option("--format", c.format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
  }
}

int thread_count() {
  const char* env = std::getenv("DEKREG_THREADS");
  if (env == nullptr) return 1;
  try {
    const int t = std::stoi(env);
    return std::max(1, t);
  } catch (const std::exception&) {
    throw InputError(std::string("DEKREG_THREADS is not an integer: '") + env + "'");
  }
}

// NaN becomes null.
ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json num_array(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

void emit(const Common& c, const std::string& primary, const ordered_json& sidecar,
          std::ostream& out) {
  if (c.output.empty()) {
    out << primary;
    return;
  }
  write_text_file(c.output, primary);
  write_text_file(c.output + ".json", sidecar.dump(2) + "\n");
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  Common common;
  std::string input;
  std::string method = "nw";
  int k = 1;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<double> h;
  int grid_size = 101;
  std::optional<double> grid_lo;
  std::optional<double> grid_hi;
  bool log_response = false;
};

Method method_from_args(const FitArgs& a) {
  if (a.method == "nw") return Method::nw();
  if (a.method == "ll") return Method::ll();
  if (a.method == "lq") return Method::lq();
  if (a.method == "lc") return Method::lc();
  if (a.method == "de1") {
    if (a.k < 1 || a.k > 5) throw InputError("--k must be in 1..5");
    return Method::de1(a.k, a.lambda);
  }
  if (a.method == "subexp1") return Method::subexp(1, a.lambda, a.alpha);
  if (a.method == "subexp2") return Method::subexp(2, a.lambda, a.alpha);
  if (a.method == "nls") return Method::nls();
  return Method::nls_subexp(a.lambda, a.alpha);
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  Dataset data = read_xy_csv(a.input, kXyHeaders);
  if (a.log_response) data = data.log_response();
  if (a.grid_size < 2) throw InputError("--grid-size must be at least 2");
  const Kernel kernel = Kernel::from_name(a.common.kernel);
  const Method method = resolve_parameters(data, method_from_args(a));

  const auto [xmin, xmax] = std::minmax_element(data.x().begin(), data.x().end());
  const double lo = a.grid_lo.value_or(*xmin);
  const double hi = a.grid_hi.value_or(*xmax);
  if (!(hi > lo)) throw InputError("evaluation grid needs hi > lo");
  const std::vector<double> grid = linear_grid(lo, hi, a.grid_size);

  ordered_json side;
  side["command"] = "fit";
  side["input"] = a.input;
  side["method"] = method.label();
  side["kernel"] = kernel.name();
  side["n"] = data.size();
  side["log_response"] = a.log_response;
  side["lambda"] = method.lambda ? num(*method.lambda) : ordered_json(nullptr);
  side["alpha"] = method.alpha ? num(*method.alpha) : ordered_json(nullptr);

  double h = 1.0;
  if (method.uses_bandwidth()) {
    if (a.h) {
      if (!(*a.h > 0.0)) throw InputError("--h must be positive");
      h = *a.h;
      side["h_source"] = "given";
    } else {
      const BandwidthGrid bw = BandwidthGrid::default_for(data);
      const CvSelection sel = loocv_select(data, method, kernel, bw);
      h = sel.h;
      side["h_source"] = "loocv";
      side["selection"] = {{"grid", bw.values()},
                           {"scores", num_array(sel.scores)},
                           {"undefined_counts", sel.undefined_counts},
                           {"score", num(sel.score)}};
    }
    side["h"] = h;
  } else {
    side["h"] = nullptr;
  }

  const FitCurve curve = fit_curve(data, method, h, kernel, grid);
  std::string csv = "grid,fitted,defined\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    csv += format_exact(curve.grid[i]) + "," + format_exact(curve.values[i]) + "," +
           (curve.defined[i] ? "1" : "0") + "\n";
  }
  side["grid_size"] = grid.size();
  side["defined_count"] = curve.defined_count();
  emit(a.common, csv, side, out);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  Common common;
  std::string scenario = "all";
  std::string n = "all";
  std::string design = "uniform";
  int replicates = 100;
  std::uint64_t seed = 1;
  double noise = 0.1;
  std::string lambda_mode = "known";
  double lambda = 1.0;
  std::string mad_dump;
};

std::vector<int> parse_choice(const std::string& value, const std::vector<int>& all,
                              const std::string& flag) {
  if (value == "all") return all;
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    if (v < 1) throw std::invalid_argument(value);
    return {v};
  } catch (const std::exception&) {
    throw InputError(flag + " must be a positive integer or 'all', got '" + value + "'");
  }
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const std::vector<int> ids = parse_choice(a.scenario, {1, 2, 3}, "--scenario");
  for (int id : ids) {
    if (id > 3) throw InputError("--scenario must be 1, 2, 3 or 'all'");
  }
  const std::vector<int> sizes = parse_choice(a.n, {25, 10}, "--n");
  if (a.replicates < 1) throw InputError("--replicates must be at least 1");
  if (!(a.noise >= 0.0)) throw InputError("--noise must be non-negative");
  const DesignKind design = design_from_name(a.design);
  const LambdaMode mode =
      a.lambda_mode == "estimate" ? LambdaMode::estimated() : LambdaMode::known(a.lambda);
  const Kernel kernel = Kernel::from_name(a.common.kernel);
  const int threads = thread_count();

  std::vector<SimReport> reports;
  for (int n : sizes) {
    for (int id : ids) {
      reports.push_back(run_study(Scenario(id, n, design, a.noise), default_battery(),
                                  a.replicates, a.seed, mode, kernel, threads));
    }
  }
  const TableDocument doc = emit_tables(reports);

  ordered_json side;
  side["command"] = "simulate";
  side["design"] = to_string(design);
  side["replicates"] = a.replicates;
  side["seed"] = a.seed;
  side["noise_sd"] = a.noise;
  side["lambda_mode"] = mode.describe();
  side["kernel"] = kernel.name();
  side["warnings"] = doc.warnings;
  ordered_json studies = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json s;
    s["scenario"] = r.scenario.id;
    s["n"] = r.scenario.n;
    s["column"] = r.scenario.column_label();
    ordered_json methods = ordered_json::array();
    for (const auto& m : r.methods) {
      methods.push_back({{"method", m.method},
                         {"mean_mad", num(m.mean_mad)},
                         {"se_mad", num(m.se_mad)},
                         {"failures", m.failures},
                         {"bandwidths", num_array(m.bandwidths)},
                         {"lambdas", num_array(m.lambdas)}});
    }
    s["methods"] = methods;
    studies.push_back(s);
  }
  side["studies"] = studies;

  if (!a.mad_dump.empty()) write_text_file(a.mad_dump, mad_dump_csv(reports));
  const std::string primary =
      a.common.format == "text" ? tables_to_text(doc) : tables_to_csv(doc);
  emit(a.common, primary, side, out);
  return kExitOk;
}

// ---------------------------------------------------------------- asymptotics

struct AsymptoticsArgs {
  Common common;
  double lambda = 1.0;
  double x = 0.5;
  double h = 0.1;
  long n = 100;
  double sigma = 0.1;
  std::string density = "uniform";
  double beta_a = 1.0;
  double beta_b = 0.5;
  int k_max = 5;
  bool misspecified = false;
  double lambda1 = 1.0;
  double lambda2 = 0.1;
  bool corrected_g2 = false;
};

struct AsymRow {
  std::string method;
  double bias;
  double variance;
};

int cmd_asymptotics(const AsymptoticsArgs& a, std::ostream& out) {
  if (!(a.h > 0.0)) throw InputError("--h must be positive");
  if (a.n < 1) throw InputError("--n must be at least 1");
  if (!(a.sigma >= 0.0)) throw InputError("--sigma must be non-negative");
  if (a.k_max < 1 || a.k_max > 5) throw InputError("--k-max must be in 1..5");
  const Kernel kernel = Kernel::from_name(a.common.kernel);
  const KernelMoments moments = kernel_moments(kernel);
  const DesignDensity density =
      a.density == "beta" ? DesignDensity::beta(a.beta_a, a.beta_b) : DesignDensity::uniform();

  std::vector<AsymRow> rows;
  ordered_json side;
  side["command"] = "asymptotics";
  side["x"] = a.x;
  side["h"] = a.h;
  side["n"] = a.n;
  side["sigma"] = a.sigma;
  side["density"] = density.name;
  side["kernel"] = kernel.name();
  side["mu"] = moments.mu;
  side["rk"] = moments.rk;

  AsymptoticSetup setup;
  setup.sigma = a.sigma;
  setup.n = a.n;
  setup.h = a.h;
  if (a.misspecified) {
    const MisspecifiedTruth truth(a.lambda1, a.lambda2);
    setup.lambda = a.lambda1;
    const double g = truth.g(a.x);
    for (AsymptoticMethod m : {AsymptoticMethod::NW, AsymptoticMethod::LL}) {
      setup.method = m;
      const double var = leading_bias_variance(setup, g, density, moments, a.x).variance;
      rows.push_back({to_string(m),
                      misspecified_bias(m, truth, density, moments, a.h, a.x, !a.corrected_g2),
                      var});
    }
    setup.method = AsymptoticMethod::DE1;
    setup.k = 1;
    rows.push_back({"DE1-1",
                    misspecified_bias(AsymptoticMethod::DE1, truth, density, moments, a.h, a.x,
                                      !a.corrected_g2),
                    leading_bias_variance(setup, g, density, moments, a.x).variance});
    side["mode"] = "misspecified";
    side["lambda1"] = a.lambda1;
    side["lambda2"] = a.lambda2;
    side["second_derivative"] = a.corrected_g2 ? "corrected" : "printed";
    side["g"] = g;
  } else {
    setup.lambda = a.lambda;
    const double g = std::exp(a.lambda * a.x);
    setup.ds_constant = ds_variance_constant(kernel);
    for (AsymptoticMethod m : {AsymptoticMethod::NW, AsymptoticMethod::LL, AsymptoticMethod::LQ,
                               AsymptoticMethod::LC, AsymptoticMethod::DS}) {
      setup.method = m;
      const BiasVariance bv = leading_bias_variance(setup, g, density, moments, a.x);
      rows.push_back({to_string(m), bv.bias, bv.variance});
    }
    setup.method = AsymptoticMethod::DE1;
    for (int k = 1; k <= a.k_max; ++k) {
      setup.k = k;
      const BiasVariance bv = leading_bias_variance(setup, g, density, moments, a.x);
      rows.push_back({"DE1-" + std::to_string(k), bv.bias, bv.variance});
    }
    side["mode"] = "correct";
    side["lambda"] = a.lambda;
    side["g"] = g;
    side["ds_constant"] = *setup.ds_constant;
  }

  std::ostringstream body;
  if (a.common.format == "text") {
    body << "method        bias    variance\n";
    for (const auto& r : rows) {
      std::string line = r.method;
      line.resize(8, ' ');
      std::string b = format_short(r.bias, 4);
      std::string v = format_short(r.variance, 4);
      body << line << std::string(b.size() < 12 ? 12 - b.size() : 1, ' ') << b
           << std::string(v.size() < 12 ? 12 - v.size() : 1, ' ') << v << "\n";
    }
  } else {
    body << "method,bias,variance\n";
    for (const auto& r : rows) {
      body << r.method << ',' << format_exact(r.bias) << ',' << format_exact(r.variance) << '\n';
    }
  }
  emit(a.common, body.str(), side, out);
  return kExitOk;
}

// ---------------------------------------------------------------- variance-ratio

struct VarianceRatioArgs {
  Common common;
  int n = 10;
  double lambda = 1.0;
  int k = 1;
  std::optional<double> h;
  int seeds = 100;
  std::uint64_t seed = 1;
};

int cmd_variance_ratio(const VarianceRatioArgs& a, std::ostream& out) {
  if (a.n < 2) throw InputError("--n must be at least 2");
  if (a.seeds < 1) throw InputError("--seeds must be at least 1");
  if (a.k < 1 || a.k > 5) throw InputError("--k must be in 1..5");
  if (a.h && !(*a.h > 0.0)) throw InputError("--h must be positive");
  const Kernel kernel = Kernel::from_name(a.common.kernel);

  std::string csv = "study,x,ratio\n";
  double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  long count = 0;
  int excluded = 0;
  ordered_json studies = ordered_json::array();
  for (int s = 0; s < a.seeds; ++s) {
    const std::uint64_t study_seed = replicate_seed(a.seed, static_cast<std::uint64_t>(s));
    const VarianceRatioResult r = variance_ratio_study(a.n, a.lambda, a.k, a.h, kernel, study_seed);
    for (std::size_t i = 0; i < r.design.size(); ++i) {
      csv += std::to_string(s) + "," + format_exact(r.design[i]) + "," + format_exact(r.ratios[i]) +
             "\n";
      if (std::isfinite(r.ratios[i])) {
        sum += r.ratios[i];
        lo = std::min(lo, r.ratios[i]);
        hi = std::max(hi, r.ratios[i]);
        ++count;
      }
    }
    excluded += r.excluded;
    studies.push_back({{"study", s},
                       {"h", r.h},
                       {"mean", num(r.mean)},
                       {"min", num(r.min)},
                       {"max", num(r.max)},
                       {"excluded", r.excluded}});
  }
  if (count == 0) throw EstimationError("every variance ratio was undefined");
  const double mean = sum / static_cast<double>(count);

  ordered_json side;
  side["command"] = "variance-ratio";
  side["n"] = a.n;
  side["lambda"] = a.lambda;
  side["k"] = a.k;
  side["seed"] = a.seed;
  side["seeds"] = a.seeds;
  side["kernel"] = kernel.name();
  side["pooled"] = {{"mean", mean}, {"min", lo}, {"max", hi}, {"points", count},
                    {"excluded", excluded}};
  side["studies"] = studies;

  std::string primary = csv;
  if (a.common.format == "text") {
    primary = "pooled mean " + format_short(mean, 4) + ", range (" + format_short(lo, 4) + ", " +
              format_short(hi, 4) + "), " + std::to_string(count) + " points, " +
              std::to_string(excluded) + " excluded\n";
  }
  emit(a.common, primary, side, out);
  return kExitOk;
}

// ---------------------------------------------------------------- tumor-demo

struct TumorDemoArgs {
  Common common;
  std::string input;
  double h = 3.5;
  int grid_size = 201;
  std::optional<double> lambda;
  std::string export_data;
};

int cmd_tumor_demo(const TumorDemoArgs& a, std::ostream& out) {
  const Kernel kernel = Kernel::from_name(a.common.kernel);
  if (!a.export_data.empty()) {
    write_text_file(a.export_data, dataset_to_csv(TumorData::full(), "time", "volume"));
  }
  const Dataset data = a.input.empty() ? TumorData::sparse() : read_xy_csv(a.input, kTumorHeaders);
  const SparseDemoResult r = sparse_demo(data, a.h, kernel, a.grid_size, a.lambda);

  std::string csv = "grid,nw,ll,lq,de1\n";
  for (std::size_t i = 0; i < r.nw.grid.size(); ++i) {
    csv += format_exact(r.nw.grid[i]) + "," + format_exact(r.nw.values[i]) + "," +
           format_exact(r.ll.values[i]) + "," + format_exact(r.lq.values[i]) + "," +
           format_exact(r.de1.values[i]) + "\n";
  }
  ordered_json side;
  side["command"] = "tumor-demo";
  side["input"] = a.input.empty() ? "embedded sparse subset" : a.input;
  side["h"] = a.h;
  side["kernel"] = kernel.name();
  side["lambda"] = r.lambda;
  side["lambda_source"] = a.lambda ? "given" : "loglinear";
  side["defined"] = {{"nw", r.nw.defined_count()},
                     {"ll", r.ll.defined_count()},
                     {"lq", r.lq.defined_count()},
                     {"de1", r.de1.defined_count()}};
  emit(a.common, csv, side, out);
  return kExitOk;
}

// ---------------------------------------------------------------- tumor-pipeline

struct TumorPipelineArgs {
  Common common;
  int replicates = 100;
  std::uint64_t seed = 1;
  std::string sd_denominator = "n";
  bool fixed_params = false;
  std::optional<double> noise;
  double truth_h = 2.38;
};

int cmd_tumor_pipeline(const TumorPipelineArgs& a, std::ostream& out) {
  PipelineConfig config;
  config.replicates = a.replicates;
  config.truth_bandwidth = a.truth_h;
  config.sd_denominator = a.sd_denominator == "n"     ? SdDenominator::N
                          : a.sd_denominator == "n-2" ? SdDenominator::NMinus2
                                                      : SdDenominator::NMinus1;
  config.reestimate_growth_params = !a.fixed_params;
  if (a.noise && !(*a.noise >= 0.0)) throw InputError("--noise must be non-negative");
  config.noise_sd_override = a.noise;
  config.threads = thread_count();
  const Kernel kernel = Kernel::from_name(a.common.kernel);
  const PredictionReport report = run_tumor_pipeline(config, a.seed, kernel);

  ordered_json side;
  side["command"] = "tumor-pipeline";
  side["replicates"] = report.replicates;
  side["seed"] = report.seed;
  side["kernel"] = kernel.name();
  side["truth_bandwidth"] = config.truth_bandwidth;
  side["sd_denominator"] = a.sd_denominator;
  side["residual_sd"] = report.residual_sd;
  side["noise_sd"] = report.noise_sd;
  side["truth"] = report.truth;
  side["growth_params"] = a.fixed_params ? "fixed" : "per-replicate";
  side["fixed_alpha"] = report.fixed_alpha;
  side["fixed_lambda"] = report.fixed_lambda;
  side["replicate_alpha"] = num_array(report.replicate_alpha);
  side["replicate_lambda"] = num_array(report.replicate_lambda);
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"method", row.method},
                    {"log_scale", num(row.log_scale)},
                    {"original_scale", num(row.original_scale)},
                    {"failures", row.failures},
                    {"bandwidths", num_array(row.bandwidths)}});
  }
  side["rows"] = rows;

  std::string primary = prediction_to_csv(report);
  if (a.common.format == "text") {
    std::ostringstream t;
    t << "residual sd " << format_short(report.residual_sd, 4) << "\n";
    t << "method   log scale  original scale\n";
    for (const auto& row : report.rows) {
      std::string m = row.method;
      m.resize(8, ' ');
      std::string l = format_short(row.log_scale, 4);
      std::string o = format_short(row.original_scale, 4);
      t << m << std::string(l.size() < 10 ? 10 - l.size() : 1, ' ') << l
        << std::string(o.size() < 16 ? 16 - o.size() : 1, ' ') << o << "\n";
    }
    primary = t.str();
  }
  emit(a.common, primary, side, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel regression assisted by first-order growth laws", "dekreg"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit one estimator to an x,y CSV");
  add_common(fit_cmd, fit.common, false);
  fit_cmd->add_option("--input,-i", fit.input, "CSV with header x,y")->required();
  fit_cmd->add_option("--method", fit.method, "Estimator")
      ->check(CLI::IsMember(
          {"nw", "ll", "lq", "lc", "de1", "subexp1", "subexp2", "nls", "nls-subexp"}));
  fit_cmd->add_option("--k", fit.k, "DE1 degree (1..5)");
  fit_cmd->add_option("--lambda", fit.lambda, "Growth rate (estimated when omitted)");
  fit_cmd->add_option("--alpha", fit.alpha, "Sub-exponential power (estimated when omitted)");
  fit_cmd->add_option("--h", fit.h, "Bandwidth (LOOCV when omitted)");
  fit_cmd->add_option("--grid-size", fit.grid_size, "Evaluation points");
  fit_cmd->add_option("--grid-lo", fit.grid_lo, "Grid start (default min x)");
  fit_cmd->add_option("--grid-hi", fit.grid_hi, "Grid end (default max x)");
  fit_cmd->add_flag("--log-response", fit.log_response, "Fit log y instead of y");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo comparison tables");
  add_common(sim_cmd, sim.common, true);
  sim_cmd->add_option("--scenario", sim.scenario, "1, 2, 3 or all");
  sim_cmd->add_option("--n", sim.n, "Sample size or all (25 and 10)");
  sim_cmd->add_option("--design", sim.design, "uniform or beta")
      ->check(CLI::IsMember({"uniform", "beta", "sparse"}));
  sim_cmd->add_option("--replicates", sim.replicates, "Replicates per scenario");
  sim_cmd->add_option("--seed", sim.seed, "Master seed");
  sim_cmd->add_option("--noise", sim.noise, "Noise standard deviation");
  sim_cmd->add_option("--lambda-mode", sim.lambda_mode, "known or estimate")
      ->check(CLI::IsMember({"known", "estimate"}));
  sim_cmd->add_option("--lambda", sim.lambda, "Known growth rate");
  sim_cmd->add_option("--mad-dump", sim.mad_dump, "Per-replicate MAD CSV");

  AsymptoticsArgs asy;
  auto* asy_cmd = app.add_subcommand("asymptotics", "Leading-order bias and variance rows");
  add_common(asy_cmd, asy.common, true);
  asy_cmd->add_option("--lambda", asy.lambda, "Growth rate of the exponential truth");
  asy_cmd->add_option("--x", asy.x, "Evaluation point");
  asy_cmd->add_option("--h", asy.h, "Bandwidth");
  asy_cmd->add_option("--n", asy.n, "Sample size");
  asy_cmd->add_option("--sigma", asy.sigma, "Noise standard deviation");
  asy_cmd->add_option("--density", asy.density, "uniform or beta")
      ->check(CLI::IsMember({"uniform", "beta"}));
  asy_cmd->add_option("--beta-a", asy.beta_a, "Beta shape a");
  asy_cmd->add_option("--beta-b", asy.beta_b, "Beta shape b");
  asy_cmd->add_option("--k-max", asy.k_max, "Highest DE1 degree listed");
  asy_cmd->add_flag("--misspecified", asy.misspecified, "Truth exp(l1 x - l2 x^2)");
  asy_cmd->add_option("--lambda1", asy.lambda1, "Misspecified linear rate");
  asy_cmd->add_option("--lambda2", asy.lambda2, "Misspecified damping");
  asy_cmd->add_flag("--corrected-g2", asy.corrected_g2, "Use the calculus second derivative");

  VarianceRatioArgs vr;
  auto* vr_cmd = app.add_subcommand("variance-ratio", "Finite-sample DE1-k / NW variance ratios");
  add_common(vr_cmd, vr.common, true);
  vr_cmd->add_option("--n", vr.n, "Design size");
  vr_cmd->add_option("--lambda", vr.lambda, "Growth rate");
  vr_cmd->add_option("--k", vr.k, "DE1 degree");
  vr_cmd->add_option("--h", vr.h, "Bandwidth (half median spacing when omitted)");
  vr_cmd->add_option("--seeds", vr.seeds, "Number of designs");
  vr_cmd->add_option("--seed", vr.seed, "Master seed");

  TumorDemoArgs td;
  auto* td_cmd = app.add_subcommand("tumor-demo", "Four fits to the sparse tumour data");
  add_common(td_cmd, td.common, false);
  td_cmd->add_option("--input,-i", td.input, "CSV with header time,volume (default embedded)");
  td_cmd->add_option("--h", td.h, "Bandwidth");
  td_cmd->add_option("--grid-size", td.grid_size, "Evaluation points");
  td_cmd->add_option("--lambda", td.lambda, "DE1-1 growth rate override");
  td_cmd->add_option("--export-data", td.export_data, "Write the full embedded data as CSV");

  TumorPipelineArgs tp;
  auto* tp_cmd = app.add_subcommand("tumor-pipeline", "Log-scale tumour simulation summary");
  add_common(tp_cmd, tp.common, true);
  tp_cmd->add_option("--replicates", tp.replicates, "Replicates");
  tp_cmd->add_option("--seed", tp.seed, "Master seed");
  tp_cmd->add_option("--sd-denominator", tp.sd_denominator, "n, n-1 or n-2")
      ->check(CLI::IsMember({"n", "n-1", "n-2"}));
  tp_cmd->add_flag("--fixed-params", tp.fixed_params,
                   "Estimate alpha and lambda once from the observed data");
  tp_cmd->add_option("--noise", tp.noise, "Replicate noise sd (default residual sd)");
  tp_cmd->add_option("--truth-h", tp.truth_h, "Bandwidth of the local linear truth");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim, out);
    if (asy_cmd->parsed()) return cmd_asymptotics(asy, out);
    if (vr_cmd->parsed()) return cmd_variance_ratio(vr, out);
    if (td_cmd->parsed()) return cmd_tumor_demo(td, out);
    if (tp_cmd->parsed()) return cmd_tumor_pipeline(tp, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  err << "error: no command\n";
  return kExitInput;
}

}  // namespace dekreg::cli
