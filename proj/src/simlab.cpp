#include "dekreg/simlab.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "dekreg/bandwidth.hpp"
#include "dekreg/errors.hpp"
#include "dekreg/format.hpp"
#include "dekreg/growth.hpp"
#include "dekreg/numerics.hpp"

namespace dekreg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string>& published_row_order() {
  static const std::vector<std::string> order = {"NW",    "LL",    "LQ",    "LC",    "DE1-1",
                                                 "DE1-2", "DE1-3", "DE1-4", "DE1-5", "NLS"};
  return order;
}

struct ReplicateOutcome {
  double mad = kNaN;
  double h = kNaN;
  double lambda = kNaN;
};

ReplicateOutcome run_method(const Dataset& data, const std::vector<double>& truth,
                            const Method& method, const LambdaMode& mode, const Kernel& kernel) {
  ReplicateOutcome out;
  Method m = method;
  if (m.tag == MethodTag::DE1 && !m.lambda) {
    m.lambda = mode.estimate ? loglinear_exponential(data).lambda : mode.value;
  }
  if (m.lambda) out.lambda = *m.lambda;
  const std::vector<double> grid(data.x().begin(), data.x().end());
  double h = 1.0;
  if (m.uses_bandwidth()) {
    h = loocv_select(data, m, kernel, BandwidthGrid::default_for(data)).h;
    out.h = h;
  }
  const FitCurve curve = fit_curve(data, m, h, kernel, grid);
  if (curve.defined_count() != grid.size()) return out;
  out.mad = mad_score(curve.values, truth);
  return out;
}

}  // namespace

Scenario::Scenario(int id_, int n_, DesignKind design_, double noise_sd_)
    : id(id_), noise_sd(noise_sd_), design(design_), n(n_) {
  if (id < 1 || id > 3) throw InputError("scenario id must be 1, 2 or 3");
  if (n < 1) throw InputError("scenario sample size must be positive");
  if (!(noise_sd >= 0.0)) throw InputError("noise sd must be nonnegative");
}

double Scenario::mean(double x) const {
  switch (id) {
    case 1: return std::exp(x);
    case 2: return std::exp(x - 0.025 * x * x);
    case 3: return std::exp(x - 0.1 * x * x);
    default: throw InputError("scenario id must be 1, 2 or 3");
  }
}

std::string Scenario::column_label() const {
  return "Scen. " + std::to_string(id) + " (" + std::to_string(n) + ")";
}

std::string to_string(DesignKind design) {
  return design == DesignKind::Uniform ? "uniform" : "beta";
}

DesignKind design_from_name(const std::string& name) {
  if (name == "uniform") return DesignKind::Uniform;
  if (name == "beta" || name == "sparse") return DesignKind::Beta;
  throw InputError("unknown design '" + name + "' (expected uniform or beta)");
}

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

Dataset draw_dataset(const Scenario& scenario, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(scenario.n));
  for (double& v : x) {
    const double u = unif(rng);
    // Beta(1, b) by inversion: F(x) = 1 - (1 - x)^b.
    v = scenario.design == DesignKind::Uniform ? u : 1.0 - std::pow(1.0 - u, 1.0 / 0.5);
  }
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = noise(rng);
    y[i] = scenario.mean(x[i]) + scenario.noise_sd * e;
  }
  return Dataset(std::move(x), std::move(y));
}

double mad_score(const std::vector<double>& fitted, const std::vector<double>& truth) {
  if (fitted.size() != truth.size()) throw InputError("mad_score: length mismatch");
  if (fitted.empty()) throw InputError("mad_score: empty input");
  std::vector<double> dev(fitted.size());
  for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = std::abs(fitted[i] - truth[i]);
  return median(dev);
}

std::string LambdaMode::describe() const {
  return estimate ? std::string("estimate") : "known(" + format_exact(value) + ")";
}

const MethodReport* SimReport::find(const std::string& method) const {
  for (const auto& m : methods) {
    if (m.method == method) return &m;
  }
  return nullptr;
}

std::vector<Method> default_battery() {
  std::vector<Method> out = {Method::nw(), Method::ll(), Method::lq(), Method::lc()};
  for (int k = 1; k <= 5; ++k) out.push_back(Method::de1(k));
  out.push_back(Method::nls());
  return out;
}

void summarize(MethodReport& report) {
  double sum = 0.0;
  int count = 0;
  for (double v : report.mads) {
    if (std::isfinite(v)) {
      sum += v;
      ++count;
    }
  }
  report.failures = static_cast<int>(report.mads.size()) - count;
  if (count == 0) {
    report.mean_mad = kNaN;
    report.se_mad = kNaN;
    return;
  }
  report.mean_mad = sum / count;
  if (count < 2) {
    report.se_mad = kNaN;
    return;
  }
  double ss = 0.0;
  for (double v : report.mads) {
    if (std::isfinite(v)) ss += (v - report.mean_mad) * (v - report.mean_mad);
  }
  report.se_mad = std::sqrt(ss / (count - 1)) / std::sqrt(static_cast<double>(count));
}

SimReport run_study(const Scenario& scenario, const std::vector<Method>& methods, int replicates,
                    std::uint64_t seed, const LambdaMode& lambda_mode, const Kernel& kernel,
                    int threads) {
  if (replicates < 1) throw InputError("run_study needs at least one replicate");
  if (methods.empty()) throw InputError("run_study needs at least one method");
  SimReport report;
  report.scenario = scenario;
  report.replicates = replicates;
  report.seed = seed;
  report.lambda_mode = lambda_mode.describe();
  report.methods.resize(methods.size());
  for (std::size_t j = 0; j < methods.size(); ++j) {
    auto& mr = report.methods[j];
    mr.method = methods[j].label();
    mr.mads.assign(static_cast<std::size_t>(replicates), kNaN);
    mr.bandwidths.assign(static_cast<std::size_t>(replicates), kNaN);
    mr.lambdas.assign(static_cast<std::size_t>(replicates), kNaN);
  }

  auto run_replicate = [&](int r) {
    const Dataset data = draw_dataset(scenario, replicate_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<double> truth(data.size());
    for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = scenario.mean(data.x()[i]);
    for (std::size_t j = 0; j < methods.size(); ++j) {
      ReplicateOutcome outcome;
      try {
        outcome = run_method(data, truth, methods[j], lambda_mode, kernel);
      } catch (const Error&) {
        outcome = {};
      }
      auto& mr = report.methods[j];
      const auto slot = static_cast<std::size_t>(r);
      mr.mads[slot] = outcome.mad;
      mr.bandwidths[slot] = outcome.h;
      mr.lambdas[slot] = outcome.lambda;
    }
  };

  const int workers = std::clamp(threads, 1, replicates);
  if (workers == 1) {
    for (int r = 0; r < replicates; ++r) run_replicate(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (int r = next++; r < replicates; r = next++) run_replicate(r);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& mr : report.methods) summarize(mr);
  return report;
}

TableDocument emit_tables(const std::vector<SimReport>& reports) {
  if (reports.empty()) throw InputError("emit_tables: no reports");
  TableDocument doc;
  doc.design = to_string(reports.front().scenario.design);
  for (const auto& r : reports) {
    if (r.scenario.design != reports.front().scenario.design) {
      throw InputError("emit_tables: reports mix uniform and beta designs");
    }
  }

  // Columns: larger samples first, then scenario id.
  std::vector<const SimReport*> ordered;
  for (const auto& r : reports) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(), [](const SimReport* a, const SimReport* b) {
    if (a->scenario.n != b->scenario.n) return a->scenario.n > b->scenario.n;
    return a->scenario.id < b->scenario.id;
  });
  std::vector<const SimReport*> columns;
  for (const SimReport* r : ordered) {
    const std::string label = r->scenario.column_label();
    if (std::find(doc.columns.begin(), doc.columns.end(), label) != doc.columns.end()) {
      doc.warnings.push_back("duplicate column " + label + " ignored");
      continue;
    }
    doc.columns.push_back(label);
    columns.push_back(r);
  }

  for (const auto& name : published_row_order()) {
    for (const SimReport* r : columns) {
      if (r->find(name) != nullptr) {
        doc.rows.push_back(name);
        break;
      }
    }
  }
  for (const SimReport* r : columns) {
    for (const auto& m : r->methods) {
      if (std::find(doc.rows.begin(), doc.rows.end(), m.method) == doc.rows.end()) {
        doc.rows.push_back(m.method);
      }
    }
  }

  doc.mean.assign(doc.rows.size(), std::vector<std::optional<double>>(columns.size()));
  doc.se = doc.mean;
  for (std::size_t i = 0; i < doc.rows.size(); ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const MethodReport* m = columns[c]->find(doc.rows[i]);
      if (m == nullptr || !std::isfinite(m->mean_mad)) {
        doc.warnings.push_back("missing cell " + doc.rows[i] + " / " + doc.columns[c]);
        continue;
      }
      doc.mean[i][c] = 1000.0 * m->mean_mad;
      if (std::isfinite(m->se_mad)) doc.se[i][c] = 1000.0 * m->se_mad;
    }
  }
  return doc;
}

std::string tables_to_csv(const TableDocument& doc) {
  std::ostringstream out;
  out << "table,method";
  for (const auto& c : doc.columns) out << ',' << c;
  out << '\n';
  auto emit = [&](const char* name, const std::vector<std::vector<std::optional<double>>>& cells) {
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
      out << name << ',' << doc.rows[i];
      for (const auto& cell : cells[i]) out << ',' << (cell ? format_exact(*cell) : "NA");
      out << '\n';
    }
  };
  emit("mean", doc.mean);
  emit("se", doc.se);
  return out.str();
}

std::string tables_to_text(const TableDocument& doc) {
  std::ostringstream out;
  auto emit = [&](const std::string& title,
                  const std::vector<std::vector<std::optional<double>>>& cells) {
    std::size_t label_width = 6;
    for (const auto& r : doc.rows) label_width = std::max(label_width, r.size());
    std::vector<std::size_t> widths;
    for (const auto& c : doc.columns) widths.push_back(std::max<std::size_t>(c.size(), 8));
    out << title << '\n';
    out << std::string(label_width, ' ');
    for (std::size_t c = 0; c < doc.columns.size(); ++c) {
      out << "  " << std::string(widths[c] - doc.columns[c].size(), ' ') << doc.columns[c];
    }
    out << '\n';
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
      out << doc.rows[i] << std::string(label_width - doc.rows[i].size(), ' ');
      for (std::size_t c = 0; c < cells[i].size(); ++c) {
        const std::string v = cells[i][c] ? format_short(*cells[i][c], 4) : "NA";
        out << "  " << std::string(widths[c] > v.size() ? widths[c] - v.size() : 0, ' ') << v;
      }
      out << '\n';
    }
  };
  emit("Mean MAD x 1000 (" + doc.design + " design)", doc.mean);
  out << '\n';
  emit("Standard error of mean MAD x 1000 (" + doc.design + " design)", doc.se);
  for (const auto& w : doc.warnings) out << "warning: " << w << '\n';
  return out.str();
}

std::string mad_dump_csv(const std::vector<SimReport>& reports) {
  std::ostringstream out;
  out << "scenario,n,design,method,replicate,mad\n";
  for (const auto& r : reports) {
    for (const auto& m : r.methods) {
      for (std::size_t i = 0; i < m.mads.size(); ++i) {
        out << r.scenario.id << ',' << r.scenario.n << ',' << to_string(r.scenario.design) << ','
            << m.method << ',' << i << ',' << format_exact(m.mads[i]) << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace dekreg
