#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prufer/errors.hpp"
#include "prufer/expr.hpp"

namespace prufer {

// The two inequivalent readings of the equation's middle term:
//   NonlinearA:  s*y*(y'+s*y)     (genuinely nonlinear Prufer system)
//   LinearB:     s*p*(y'+s*y)     (expands to -(p y')' + Q y with
//                                  Q = q - (p s)' + p s^2)
enum class EquationForm { NonlinearA, LinearB };

std::string to_string(EquationForm form);
EquationForm form_from_string(const std::string& name);  // throws ValidationError

// Pointwise values of the four coefficients at one x.
struct CoeffValues {
  double p;
  double s;
  double q;
  double omega;
};

// A real coefficient function on [a,b]: either a parsed expression in x or a
// sampled table interpolated with a monotone (shape-preserving) cubic.  An
// analytic derivative can be attached; without one, consumers that need
// (p*s)' fall back to numerical differentiation.
class CoefficientFn {
 public:
  CoefficientFn() = default;

  static CoefficientFn constant(double v);
  static CoefficientFn expression(Expr e);
  static CoefficientFn table(std::vector<double> x, std::vector<double> v);

  void set_derivative(Expr e);
  void set_derivative_table(std::vector<double> x, std::vector<double> v);

  bool empty() const { return expr_.empty() && table_x_.empty(); }
  double operator()(double x) const;

  bool has_analytic_derivative() const;
  double derivative(double x) const;  // only when has_analytic_derivative()

  bool is_table() const { return !table_x_.empty(); }
  std::size_t table_size() const { return table_x_.size(); }

  // Tables must cover the problem interval; no-op for expressions.
  void check_spans(double a, double b, const std::string& name) const;

  std::string describe() const;

 private:
  Expr expr_;
  std::optional<Expr> deriv_expr_;
  std::vector<double> table_x_, table_v_, table_m_;     // knots, values, slopes
  std::vector<double> dtable_x_, dtable_v_, dtable_m_;  // optional derivative table
};

// Raw, pre-validation problem description.
struct ProblemSpec {
  double a = 0.0;
  double b = 1.0;
  CoefficientFn p, s, q, omega;  // omega left empty defaults to 1
  EquationForm form = EquationForm::NonlinearA;
  double r0 = 1.0;
  int validation_points = 1000;  // dense positivity grid (minimum 1000)
};

// Validated boundary value problem.  Construction checks a < b, r0 > 0,
// evaluability of all four coefficients on a dense grid, and positivity of p
// and omega at every grid point.  Immutable afterwards; safe to share across
// concurrent solver calls.
class Problem {
 public:
  explicit Problem(ProblemSpec spec);  // throws ValidationError

  double a() const { return spec_.a; }
  double b() const { return spec_.b; }
  double length() const { return spec_.b - spec_.a; }
  const CoefficientFn& p() const { return spec_.p; }
  const CoefficientFn& s() const { return spec_.s; }
  const CoefficientFn& q() const { return spec_.q; }
  const CoefficientFn& omega() const { return spec_.omega; }
  EquationForm form() const { return spec_.form; }
  double r0() const { return spec_.r0; }
  bool positivity_certified() const { return certified_; }

  // Pointwise coefficient evaluation; x must lie in [a,b] (tiny slack for
  // round-off).
  CoeffValues coefficients_at(double x) const;

 private:
  ProblemSpec spec_;
  bool certified_ = false;
};

Problem build_problem(ProblemSpec spec);
CoeffValues eval_coefficients(const Problem& problem, double x);

}  // namespace prufer
