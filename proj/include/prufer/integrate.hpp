#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "prufer/core.hpp"
#include "prufer/problem.hpp"

namespace prufer {

struct Tolerances {
  double abs = 1e-10;
  double rel = 1e-10;
};

// Amplitude blow-up and step-size underflow are reported as statuses, not
// exceptions: for the nonlinear form they are legitimate outcomes that an
// eigenvalue scan must be able to skip over.
enum class PathStatus { Complete, BlowUp, StepFailure };
std::string to_string(PathStatus status);

// One accepted step of the embedded 5(4) pair together with its continuous
// 4th-order interpolant (stored as the five Horner coefficients per
// component).
struct DenseStep {
  double x0 = 0.0;
  double h = 0.0;
  std::array<double, 5> cr{};      // amplitude interpolant
  std::array<double, 5> ctheta{};  // phase interpolant

  double eval_r(double x) const;
  double eval_theta(double x) const;
};

struct PruferInit {
  // theta0 = pi gives y'(a) > 0, matching the orientation the monotonicity
  // results assume; theta0 = 0 gives y'(a) < 0.  For s == 0 the two choices
  // produce identical spectra.
  double theta0 = std::numbers::pi;
  std::optional<double> r0;  // defaults to the problem's r0
};

// Dense-output trajectory of (r, theta) for one lambda.
class PruferPath {
 public:
  double lambda = 0.0;
  EquationForm form = EquationForm::NonlinearA;
  Tolerances tol;
  PathStatus status = PathStatus::Complete;
  double fail_x = 0.0;  // meaningful for BlowUp / StepFailure

  std::vector<PruferState> samples;  // step endpoints, strictly increasing x
  std::vector<DenseStep> steps;

  double a() const { return samples.front().x; }
  double last_x() const { return samples.back().x; }
  double initial_theta() const { return samples.front().theta; }
  bool complete() const { return status == PathStatus::Complete; }
  double theta_b() const;        // requires a complete path
  PruferState at(double x) const;  // dense-output evaluation on [a, last_x]
};

// Adaptive Dormand-Prince 5(4) integration of the coupled (r, theta) system
// from a to b with PI step-size control and dense output.  The initial step
// is min(0.1*(b-a), 1/L(a)) from the Lipschitz bound.  status BlowUp is set
// once r exceeds 1e12*r0; StepFailure once the step size falls below
// 1e-14*(b-a).  For the linear form the classical phase equation on the
// associated potential Q is integrated instead (theta' = -cos^2/p +
// (Q - lambda*omega)*sin^2, amplitude decoupled).
PruferPath integrate_prufer(const Problem& problem, double lambda,
                            PruferInit init = {}, Tolerances tol = {});

// Phase crossings of the levels theta(a) - k*pi, k = 1, 2, ...; each level is
// crossed at most once and strictly downward (theta' = -1/p there), so the
// continuous lift locates every zero of y without sign-change heuristics.
struct Crossing {
  double x;
  int k;
};

struct ZeroList {
  std::vector<Crossing> crossings;  // x strictly increasing, k = 1, 2, ...
  // Crossings strictly left of b - edge_tol (excludes the terminal boundary
  // zero of a converged eigenfunction).
  int count_interior(double b, double edge_tol) const;
};

ZeroList detect_pi_crossings(const PruferPath& path);  // complete paths only

struct ResidualReport {
  double max_residual = 0.0;
  double argmax_x = 0.0;
  int grid_points = 0;
  double grid_h = 0.0;
};

// Residual of the original second-order equation for the reconstructed
// solution on a uniform grid, the outer derivative taken by central finite
// differences on p*u.  Expected size O(h^2) plus integrator tolerance.
ResidualReport equation_residual(const PruferPath& path, const Problem& problem,
                                 int grid_intervals = 10000);

}  // namespace prufer
