#pragma once

#include <functional>
#include <optional>

#include "prufer/problem.hpp"

namespace prufer {

struct BoundsOptions {
  std::optional<CoefficientFn> f;  // lower-bound comparison, default p (needs 0 < f <= p)
  std::optional<CoefficientFn> h;  // upper-bound comparison, default p (needs h >= p)
  std::optional<double> c;         // strict upper bound for omega*f;
                                   // default (1 + 1e-6) * max(omega*f)
  int grid_points = 10000;         // extrema estimation grid
  double quad_rel_tol = 1e-10;
};

struct BoundsResult {
  int n = 0;
  double lower = 0.0;
  double upper = 0.0;
  double m = 0.0;  // min Q/omega over the grid
  double M = 0.0;  // max Q/omega over the grid
  double c = 0.0;
  double D = 0.0;  // min omega*h over the grid
  double integral_inv_f = 0.0;
  double integral_inv_h = 0.0;
  // The bounds derive from the Rayleigh quotient of the self-adjoint (linear)
  // form; for a nonlinear-form problem they describe the associated linear
  // problem and this flag is set.
  bool nonlinear_form_caveat = false;
};

// lower = n^2 pi^2 / (c * (int 1/f)^2) + m
// upper = n^2 pi^2 / (D * (int 1/h)^2) + M
double lower_bound(const Problem& problem, int n, const BoundsOptions& opts = {});
double upper_bound(const Problem& problem, int n, const BoundsOptions& opts = {});
BoundsResult compute_bounds(const Problem& problem, int n,
                            const BoundsOptions& opts = {});

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-10);

}  // namespace prufer
