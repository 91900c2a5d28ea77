#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dekreg/asymptotics.hpp"
#include "dekreg/bandwidth.hpp"
#include "dekreg/errors.hpp"
#include "dekreg/estimators.hpp"
#include "dekreg/growth.hpp"
#include "dekreg/kernel.hpp"
#include "dekreg/local_fit.hpp"
#include "dekreg/simlab.hpp"
#include "dekreg/tumor.hpp"

namespace py = pybind11;
using namespace dekreg;

namespace {

Dataset make_dataset(std::vector<double> x, std::vector<double> y) {
  return Dataset(std::move(x), std::move(y));
}

SdDenominator denominator_from_name(const std::string& name) {
  if (name == "n") return SdDenominator::N;
  if (name == "n-1") return SdDenominator::NMinus1;
  if (name == "n-2") return SdDenominator::NMinus2;
  throw InputError("sd denominator must be n, n-1 or n-2");
}

}  // namespace

PYBIND11_MODULE(_dekreg, m) {
  m.doc() = "Kernel regression assisted by first-order growth equations.";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UndefinedAtPoint>(m, "UndefinedAtPoint", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
  py::register_exception<EstimationError>(m, "EstimationError", base.ptr());
  py::register_exception<SelectionError>(m, "SelectionError", base.ptr());
  py::register_exception<QuadratureError>(m, "QuadratureError", base.ptr());

  py::class_<Kernel>(m, "Kernel")
      .def_static("gaussian", &Kernel::gaussian, py::arg("scale") = 1.0)
      .def_static("epanechnikov", &Kernel::epanechnikov, py::arg("scale") = 1.0)
      .def_static("from_name", &Kernel::from_name)
      .def("__call__", &Kernel::operator())
      .def_property_readonly("name", &Kernel::name)
      .def_property_readonly("scale", &Kernel::scale)
      .def("__repr__", [](const Kernel& k) { return "<Kernel " + k.name() + ">"; });

  py::class_<KernelMoments>(m, "KernelMoments")
      .def_readonly("mu", &KernelMoments::mu)
      .def_readonly("v", &KernelMoments::v)
      .def_readonly("rk", &KernelMoments::rk);
  m.def("kernel_moments", &kernel_moments, py::arg("kernel"), py::arg("max_order") = 6);
  m.def("ds_variance_constant", &ds_variance_constant, py::arg("kernel"));

  py::class_<Method>(m, "Method")
      .def_static("nw", &Method::nw)
      .def_static("ll", &Method::ll)
      .def_static("lq", &Method::lq)
      .def_static("lc", &Method::lc)
      .def_static("de1", &Method::de1, py::arg("k"), py::arg("lambda_") = py::none())
      .def_static("subexp", &Method::subexp, py::arg("order"), py::arg("lambda_") = py::none(),
                  py::arg("alpha") = py::none())
      .def_static("nls", &Method::nls)
      .def_static("nls_subexp", &Method::nls_subexp, py::arg("lambda_") = py::none(),
                  py::arg("alpha") = py::none())
      .def_property_readonly("label", &Method::label)
      .def("__repr__", [](const Method& me) { return "<Method " + me.label() + ">"; });

  m.def(
      "local_poly_fit",
      [](std::vector<double> x, std::vector<double> y, int degree, double h, const Kernel& kernel,
         double x0) { return local_poly_fit(make_dataset(x, y), degree, h, kernel, x0); },
      py::arg("x"), py::arg("y"), py::arg("degree"), py::arg("h"), py::arg("kernel"),
      py::arg("x0"));
  m.def(
      "de1k_fit",
      [](std::vector<double> x, std::vector<double> y, int k, double lambda, double h,
         const Kernel& kernel,
         double x0) { return de1k_fit(make_dataset(x, y), k, lambda, h, kernel, x0); },
      py::arg("x"), py::arg("y"), py::arg("k"), py::arg("lambda_"), py::arg("h"),
      py::arg("kernel"), py::arg("x0"));
  m.def(
      "fit_curve",
      [](std::vector<double> x, std::vector<double> y, const Method& method, double h,
         const Kernel& kernel, const std::vector<double>& grid) {
        const FitCurve c = fit_curve(make_dataset(x, y), method, h, kernel, grid);
        return py::make_tuple(c.values, std::vector<bool>(c.defined.begin(), c.defined.end()));
      },
      py::arg("x"), py::arg("y"), py::arg("method"), py::arg("h"), py::arg("kernel"),
      py::arg("grid"), "Returns (values, defined); undefined points carry NaN.");

  m.def(
      "rot_bandwidth",
      [](std::vector<double> x) {
        std::vector<double> y(x.size(), 0.0);
        return rot_bandwidth(make_dataset(x, y));
      },
      py::arg("x"));
  py::class_<CvSelection>(m, "CvSelection")
      .def_readonly("h", &CvSelection::h)
      .def_readonly("score", &CvSelection::score)
      .def_readonly("scores", &CvSelection::scores)
      .def_readonly("undefined_counts", &CvSelection::undefined_counts);
  m.def(
      "loocv_select",
      [](std::vector<double> x, std::vector<double> y, const Method& method, const Kernel& kernel,
         std::optional<std::vector<double>> grid) {
        const Dataset d = make_dataset(x, y);
        return loocv_select(d, method, kernel,
                            grid ? BandwidthGrid(*grid) : BandwidthGrid::default_for(d));
      },
      py::arg("x"), py::arg("y"), py::arg("method"), py::arg("kernel"),
      py::arg("grid") = py::none());

  py::class_<ExponentialFit>(m, "ExponentialFit")
      .def_readonly("c", &ExponentialFit::c)
      .def_readonly("lambda_", &ExponentialFit::lambda)
      .def_readonly("sse", &ExponentialFit::sse);
  m.def(
      "fit_nls_exponential",
      [](std::vector<double> x, std::vector<double> y) {
        return fit_nls_exponential(make_dataset(x, y));
      },
      py::arg("x"), py::arg("y"));
  m.def(
      "estimate_alpha",
      [](std::vector<double> x, std::vector<double> y) {
        return estimate_alpha(make_dataset(x, y));
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "de1k_bias",
      [](int k, double lambda, double g, double h, const Kernel& kernel, double x) {
        return de1k_bias(k, lambda, g, h, kernel_moments(kernel), DesignDensity::uniform(), x);
      },
      py::arg("k"), py::arg("lambda_"), py::arg("g_at_x"), py::arg("h"), py::arg("kernel"),
      py::arg("x"), "Leading bias term under the uniform design on [0, 1].");
  m.def(
      "de1k_variance",
      [](double sigma, long n, double h, const Kernel& kernel, double x) {
        return de1k_variance(sigma, n, h, kernel_moments(kernel), DesignDensity::uniform(), x);
      },
      py::arg("sigma"), py::arg("n"), py::arg("h"), py::arg("kernel"), py::arg("x"),
      "Leading variance term under the uniform design on [0, 1].");

  py::class_<VarianceRatioResult>(m, "VarianceRatioResult")
      .def_readonly("design", &VarianceRatioResult::design)
      .def_readonly("ratios", &VarianceRatioResult::ratios)
      .def_readonly("mean", &VarianceRatioResult::mean)
      .def_readonly("min", &VarianceRatioResult::min)
      .def_readonly("max", &VarianceRatioResult::max)
      .def_readonly("h", &VarianceRatioResult::h);
  m.def("variance_ratio_study", &variance_ratio_study, py::arg("n"), py::arg("lambda_"),
        py::arg("k"), py::arg("h"), py::arg("kernel"), py::arg("seed"));

  m.def(
      "simulate",
      [](int scenario, int n, const std::string& design, int replicates, std::uint64_t seed,
         std::optional<double> lambda_, int threads) {
        const LambdaMode mode = lambda_ ? LambdaMode::known(*lambda_) : LambdaMode::estimated();
        const SimReport r = run_study(Scenario(scenario, n, design_from_name(design)),
                                      default_battery(), replicates, seed, mode,
                                      Kernel::gaussian(), threads);
        py::dict out;
        for (const MethodReport& mr : r.methods) {
          out[py::str(mr.method)] = py::make_tuple(mr.mean_mad, mr.se_mad, mr.failures);
        }
        return out;
      },
      py::arg("scenario"), py::arg("n"), py::arg("design") = "uniform",
      py::arg("replicates") = 100, py::arg("seed") = 1, py::arg("lambda_") = 1.0,
      py::arg("threads") = 1,
      "Mean MAD, its standard error and failure count per method. lambda_=None "
      "estimates lambda on every replicate.");

  m.def(
      "tumor_pipeline",
      [](int replicates, std::uint64_t seed, const std::string& sd_denominator,
         bool reestimate) {
        PipelineConfig cfg;
        cfg.replicates = replicates;
        cfg.sd_denominator = denominator_from_name(sd_denominator);
        cfg.reestimate_growth_params = reestimate;
        const PredictionReport r = run_tumor_pipeline(cfg, seed);
        py::dict rows;
        for (const PredictionRow& row : r.rows) {
          rows[py::str(row.method)] = py::make_tuple(row.log_scale, row.original_scale);
        }
        py::dict out;
        out["residual_sd"] = r.residual_sd;
        out["rows"] = rows;
        return out;
      },
      py::arg("replicates") = 100, py::arg("seed") = 1, py::arg("sd_denominator") = "n",
      py::arg("reestimate") = true);
}
