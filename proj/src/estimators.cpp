#include "dekreg/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dekreg/errors.hpp"
#include "dekreg/growth.hpp"
#include "dekreg/local_fit.hpp"

namespace dekreg {

namespace {

Dataset exp_response(const Dataset& log_data) {
  std::vector<double> y(log_data.size());
  const auto z = log_data.y();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::exp(z[i]);
  return Dataset(std::vector<double>(log_data.x().begin(), log_data.x().end()), std::move(y));
}

void require_resolved(const Method& method) {
  if (!method.resolved()) {
    throw InputError("method " + method.label() + " has unresolved global parameters");
  }
}

}  // namespace

std::string Method::label() const {
  switch (tag) {
    case MethodTag::NW: return "NW";
    case MethodTag::LL: return "LL";
    case MethodTag::LQ: return "LQ";
    case MethodTag::LC: return "LC";
    case MethodTag::DE1: return "DE1-" + std::to_string(k);
    case MethodTag::SubExp1: return "SUBEXP-1";
    case MethodTag::SubExp2: return "SUBEXP-2";
    case MethodTag::NLS: return "NLS";
    case MethodTag::NLSSubExp: return "NLS-SUBEXP";
  }
  return "?";
}

bool Method::uses_bandwidth() const noexcept {
  return tag != MethodTag::NLS && tag != MethodTag::NLSSubExp;
}

bool Method::resolved() const noexcept {
  switch (tag) {
    case MethodTag::DE1: return lambda.has_value();
    case MethodTag::SubExp1:
    case MethodTag::SubExp2:
    case MethodTag::NLSSubExp: return lambda.has_value() && alpha.has_value();
    default: return true;
  }
}

Method resolve_parameters(const Dataset& data, const Method& method) {
  Method out = method;
  switch (method.tag) {
    case MethodTag::DE1:
      if (!out.lambda) out.lambda = loglinear_exponential(data).lambda;
      break;
    case MethodTag::SubExp1:
    case MethodTag::SubExp2:
    case MethodTag::NLSSubExp:
      if (!out.alpha || !out.lambda) {
        const Dataset raw = exp_response(data);
        if (!out.alpha) out.alpha = estimate_alpha(raw);
        if (!out.lambda) out.lambda = estimate_lambda_subexp(raw, *out.alpha);
      }
      break;
    default:
      break;
  }
  return out;
}

double fit_point(const Dataset& data, const Method& method, double h, const Kernel& kernel,
                 double x0) {
  require_resolved(method);
  switch (method.tag) {
    case MethodTag::NW: return local_poly_fit(data, 0, h, kernel, x0);
    case MethodTag::LL: return local_poly_fit(data, 1, h, kernel, x0);
    case MethodTag::LQ: return local_poly_fit(data, 2, h, kernel, x0);
    case MethodTag::LC: return local_poly_fit(data, 3, h, kernel, x0);
    case MethodTag::DE1: return de1k_fit(data, method.k, *method.lambda, h, kernel, x0);
    case MethodTag::SubExp1:
    case MethodTag::SubExp2:
      return local_subexp_fit(data, method.tag == MethodTag::SubExp1 ? 1 : 2,
                              GrowthLaw::sub_exponential(*method.lambda, *method.alpha), h, kernel,
                              x0);
    case MethodTag::NLS: {
      const ExponentialFit fit = fit_nls_exponential(data);
      return fit.c * std::exp(fit.lambda * x0);
    }
    case MethodTag::NLSSubExp: {
      const GrowthLaw law = GrowthLaw::sub_exponential(*method.lambda, *method.alpha);
      double g = 0.0;
      try {
        g = subexp_solution(law, x0, 0.0);
      } catch (const DomainError&) {
        throw UndefinedAtPoint(x0, "sub-exponential solution outside its domain");
      }
      if (!(g > 0.0)) throw UndefinedAtPoint(x0, "sub-exponential solution is not positive");
      return std::log(g);
    }
  }
  throw InputError("unknown method");
}

std::size_t FitCurve::defined_count() const {
  std::size_t n = 0;
  for (bool d : defined) n += d ? 1 : 0;
  return n;
}

FitCurve fit_curve(const Dataset& data, const Method& method, double h, const Kernel& kernel,
                   const std::vector<double>& grid) {
  if (grid.empty()) throw InputError("fit_curve needs a nonempty grid");
  const Method resolved = resolve_parameters(data, method);
  FitCurve curve;
  curve.grid = grid;
  curve.values.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
  curve.defined.assign(grid.size(), false);
  curve.h = h;
  curve.method = resolved.label();

  if (resolved.tag == MethodTag::NLS) {
    const ExponentialFit fit = fit_nls_exponential(data);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      curve.values[i] = fit.c * std::exp(fit.lambda * grid[i]);
      curve.defined[i] = std::isfinite(curve.values[i]);
    }
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      try {
        curve.values[i] = fit_point(data, resolved, h, kernel, grid[i]);
        curve.defined[i] = true;
      } catch (const UndefinedAtPoint&) {
      } catch (const NonConvergence&) {
      }
    }
  }
  if (curve.defined_count() == 0) {
    throw UndefinedAtPoint(grid.front(), "estimator " + curve.method + " undefined on the whole grid");
  }
  return curve;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw InputError("grid size must be at least 1");
  if (!(hi >= lo)) throw InputError("grid needs lo <= hi");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

}  // namespace dekreg
