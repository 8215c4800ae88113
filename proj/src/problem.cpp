#include "prufer/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace prufer {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Fritsch-Carlson shape-preserving slopes: the resulting Hermite interpolant
// never overshoots the bracketing sample values, so a positive table stays
// positive between its knots.
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> m(n, 0.0);
  if (n < 2) return m;
  if (n == 2) {
    m[0] = m[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return m;
  }
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    d[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double slope = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (slope * d0 <= 0.0) {
      slope = 0.0;
    } else if (d0 * d1 < 0.0 && std::fabs(slope) > 3.0 * std::fabs(d0)) {
      slope = 3.0 * d0;
    }
    return slope;
  };
  m[0] = endpoint(h[0], h[1], d[0], d[1]);
  m[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  return m;
}

double pchip_eval(const std::vector<double>& xs, const std::vector<double>& ys,
                  const std::vector<double>& ms, double x) {
  // Clamp to the knot range; Problem guarantees the range covers [a,b].
  if (x <= xs.front()) x = xs.front();
  if (x >= xs.back()) x = xs.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  if (i + 1 >= xs.size()) i = xs.size() - 2;
  const double h = xs[i + 1] - xs[i];
  const double t = (x - xs[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * ys[i] + h10 * h * ms[i] + h01 * ys[i + 1] + h11 * h * ms[i + 1];
}

void validate_table(const std::vector<double>& x, const std::vector<double>& v) {
  if (x.size() != v.size()) throw ValidationError("table: x and value counts differ");
  if (x.size() < 2) throw ValidationError("table: need at least 2 samples");
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i] < x[i + 1])) {
      throw ValidationError("table: abscissae must be strictly increasing (x[" +
                            std::to_string(i + 1) + "]=" + fmt(x[i + 1]) + ")");
    }
  }
}

}  // namespace

std::string to_string(EquationForm form) {
  return form == EquationForm::NonlinearA ? "nonlinear-A" : "linear-B";
}

EquationForm form_from_string(const std::string& name) {
  if (name == "nonlinear-A" || name == "nonlinear-a") return EquationForm::NonlinearA;
  if (name == "linear-B" || name == "linear-b") return EquationForm::LinearB;
  throw ValidationError("unknown equation form '" + name +
                        "' (expected nonlinear-A or linear-B)");
}

CoefficientFn CoefficientFn::constant(double v) {
  return expression(Expr::number(v));
}

CoefficientFn CoefficientFn::expression(Expr e) {
  if (e.empty()) throw ValidationError("coefficient expression is empty");
  CoefficientFn fn;
  fn.expr_ = std::move(e);
  return fn;
}

CoefficientFn CoefficientFn::table(std::vector<double> x, std::vector<double> v) {
  validate_table(x, v);
  CoefficientFn fn;
  fn.table_m_ = pchip_slopes(x, v);
  fn.table_x_ = std::move(x);
  fn.table_v_ = std::move(v);
  return fn;
}

void CoefficientFn::set_derivative(Expr e) {
  if (e.empty()) throw ValidationError("derivative expression is empty");
  deriv_expr_ = std::move(e);
}

void CoefficientFn::set_derivative_table(std::vector<double> x, std::vector<double> v) {
  validate_table(x, v);
  dtable_m_ = pchip_slopes(x, v);
  dtable_x_ = std::move(x);
  dtable_v_ = std::move(v);
}

double CoefficientFn::operator()(double x) const {
  if (!expr_.empty()) return expr_.eval(x);
  if (!table_x_.empty()) return pchip_eval(table_x_, table_v_, table_m_, x);
  throw std::logic_error("evaluation of empty coefficient");
}

bool CoefficientFn::has_analytic_derivative() const {
  return deriv_expr_.has_value() || !dtable_x_.empty();
}

double CoefficientFn::derivative(double x) const {
  if (deriv_expr_) return deriv_expr_->eval(x);
  if (!dtable_x_.empty()) return pchip_eval(dtable_x_, dtable_v_, dtable_m_, x);
  throw std::logic_error("coefficient has no analytic derivative");
}

void CoefficientFn::check_spans(double a, double b, const std::string& name) const {
  const double slack = 1e-9 * (b - a);
  auto check = [&](const std::vector<double>& xs, const char* what) {
    if (xs.empty()) return;
    if (xs.front() > a + slack || xs.back() < b - slack) {
      throw ValidationError("coefficient '" + name + "': " + what + " spans [" +
                            fmt(xs.front()) + ", " + fmt(xs.back()) +
                            "] but the problem interval is [" + fmt(a) + ", " +
                            fmt(b) + "]");
    }
  };
  check(table_x_, "table");
  check(dtable_x_, "derivative table");
}

std::string CoefficientFn::describe() const {
  if (!expr_.empty()) return expr_.to_string();
  if (!table_x_.empty()) return "table[" + std::to_string(table_x_.size()) + "]";
  return "<empty>";
}

Problem::Problem(ProblemSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.a < spec_.b)) {
    throw ValidationError("interval: a=" + fmt(spec_.a) + " must be less than b=" + fmt(spec_.b));
  }
  if (!(spec_.r0 > 0.0)) {
    throw ValidationError("initial amplitude r0 must be positive (got " + fmt(spec_.r0) + ")");
  }
  if (spec_.omega.empty()) spec_.omega = CoefficientFn::constant(1.0);
  struct Named {
    const char* name;
    const CoefficientFn* fn;
    bool positive;
  };
  const Named coeffs[] = {{"p", &spec_.p, true},
                          {"s", &spec_.s, false},
                          {"q", &spec_.q, false},
                          {"omega", &spec_.omega, true}};
  for (const auto& c : coeffs) {
    if (c.fn->empty()) {
      throw ValidationError(std::string("coefficient '") + c.name + "' is missing");
    }
    c.fn->check_spans(spec_.a, spec_.b, c.name);
  }

  const int npts = std::max(spec_.validation_points, 1000);
  for (int i = 0; i < npts; ++i) {
    const double x = spec_.a + (spec_.b - spec_.a) * i / (npts - 1);
    for (const auto& c : coeffs) {
      double v;
      try {
        v = (*c.fn)(x);
      } catch (const EvalError& e) {
        throw ValidationError(std::string("coefficient '") + c.name +
                              "' is not evaluable: " + e.what());
      }
      if (c.positive && !(v > 0.0)) {
        throw ValidationError(std::string("coefficient '") + c.name +
                              "' must be positive: value " + fmt(v) + " at x=" + fmt(x));
      }
      if (std::isnan(v)) {
        throw ValidationError(std::string("coefficient '") + c.name +
                              "' evaluates to NaN at x=" + fmt(x));
      }
    }
  }
  certified_ = true;
}

CoeffValues Problem::coefficients_at(double x) const {
  const double slack = 1e-12 * length();
  if (x < spec_.a - slack || x > spec_.b + slack) {
    throw ValidationError("x=" + fmt(x) + " outside the problem interval [" +
                          fmt(spec_.a) + ", " + fmt(spec_.b) + "]");
  }
  const double xc = std::clamp(x, spec_.a, spec_.b);
  return {spec_.p(xc), spec_.s(xc), spec_.q(xc), spec_.omega(xc)};
}

Problem build_problem(ProblemSpec spec) { return Problem(std::move(spec)); }

CoeffValues eval_coefficients(const Problem& problem, double x) {
  return problem.coefficients_at(x);
}

}  // namespace prufer
