#include "prufer/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "prufer/errors.hpp"
#include "prufer/selfadjoint.hpp"

namespace prufer {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double b, double fa, double fm, double fb, double whole,
                       double rel_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double both = left + right;
  const double scale = std::max(std::fabs(both), 1e-300);
  if (depth <= 0 || std::fabs(both - whole) <= 15.0 * rel_tol * scale) {
    return both + (both - whole) / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, rel_tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, rel_tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol) {
  if (!(a < b)) throw std::invalid_argument("adaptive_simpson: need a < b");
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, rel_tol, 48);
}

BoundsResult compute_bounds(const Problem& problem, int n,
                            const BoundsOptions& opts) {
  if (n < 1) throw std::invalid_argument("bound index n must be >= 1");
  const double a = problem.a();
  const double b = problem.b();
  const int G = std::max(opts.grid_points, 100);

  const AssociatedQ Q = associated_Q(problem);
  const CoefficientFn f = opts.f.value_or(problem.p());
  const CoefficientFn h = opts.h.value_or(problem.p());
  f.check_spans(a, b, "f");
  h.check_spans(a, b, "h");

  double max_wf = -std::numeric_limits<double>::infinity();
  double min_wh = std::numeric_limits<double>::infinity();
  double m_min = std::numeric_limits<double>::infinity();
  double M_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < G; ++i) {
    const double x = a + (b - a) * i / (G - 1);
    const CoeffValues c = problem.coefficients_at(x);
    const double fv = f(x);
    const double hv = h(x);
    const double slack = 1e-12 * (1.0 + std::fabs(c.p));
    if (!(fv > 0.0)) {
      throw ValidationError("f must be positive: value " + fmt(fv) + " at x=" + fmt(x));
    }
    if (fv > c.p + slack) {
      throw ValidationError("hypothesis f <= p violated at x=" + fmt(x) + " (f=" +
                            fmt(fv) + ", p=" + fmt(c.p) + ")");
    }
    if (hv < c.p - slack) {
      throw ValidationError("hypothesis h >= p violated at x=" + fmt(x) + " (h=" +
                            fmt(hv) + ", p=" + fmt(c.p) + ")");
    }
    max_wf = std::max(max_wf, c.omega * fv);
    min_wh = std::min(min_wh, c.omega * hv);
    const double qow = Q(x) / c.omega;
    m_min = std::min(m_min, qow);
    M_max = std::max(M_max, qow);
  }

  BoundsResult res;
  res.n = n;
  res.m = m_min;
  res.M = M_max;
  // The theorem needs omega*f < c strictly; the automatic choice leaves the
  // smallest practical slack above the grid maximum.
  res.c = opts.c.value_or((1.0 + 1e-6) * max_wf);
  if (!(max_wf < res.c)) {
    throw ValidationError("c=" + fmt(res.c) + " is not a strict upper bound for omega*f (max " +
                          fmt(max_wf) + ")");
  }
  res.D = min_wh;
  if (!(res.D > 0.0)) {
    throw ValidationError("D = min(omega*h) must be positive (got " + fmt(res.D) + ")");
  }

  res.integral_inv_f =
      adaptive_simpson([&](double x) { return 1.0 / f(x); }, a, b, opts.quad_rel_tol);
  res.integral_inv_h =
      adaptive_simpson([&](double x) { return 1.0 / h(x); }, a, b, opts.quad_rel_tol);

  const double n2pi2 = static_cast<double>(n) * n * std::numbers::pi * std::numbers::pi;
  res.lower = n2pi2 / (res.c * res.integral_inv_f * res.integral_inv_f) + res.m;
  res.upper = n2pi2 / (res.D * res.integral_inv_h * res.integral_inv_h) + res.M;
  res.nonlinear_form_caveat = problem.form() == EquationForm::NonlinearA;
  return res;
}

double lower_bound(const Problem& problem, int n, const BoundsOptions& opts) {
  return compute_bounds(problem, n, opts).lower;
}

double upper_bound(const Problem& problem, int n, const BoundsOptions& opts) {
  return compute_bounds(problem, n, opts).upper;
}

}  // namespace prufer
