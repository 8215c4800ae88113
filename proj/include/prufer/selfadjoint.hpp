#pragma once

#include <functional>
#include <span>
#include <vector>

#include "prufer/problem.hpp"
#include "prufer/shooting.hpp"

namespace prufer {

// Effective potential of the self-adjoint reduction of the linear form:
// Q = q - (p*s)' + p*s^2.  (p*s)' is analytic when both p and s carry
// user-supplied derivatives, otherwise central differences with step
// hd = (b-a)*1e-5 (one-sided at the endpoints).
struct AssociatedQ {
  std::function<double(double)> eval;
  bool analytic = false;
  double hd = 0.0;  // numeric differentiation step, 0 when analytic

  double operator()(double x) const { return eval(x); }
};

AssociatedQ associated_Q(const Problem& problem);

// Classical Prufer shooting on -(p v')' + Q v = lambda omega v (the phase
// equation carries no amplitude coupling in the linear case).  Same
// root-finding contract as find_eigenvalue; requires the linear form.
EigenResult linear_eigen_shoot(const Problem& problem, int n,
                               ShootingOptions opts = {});

struct OracleResult {
  int mesh = 0;       // coarse mesh (number of subintervals)
  int mesh_fine = 0;  // 2 * mesh
  std::vector<double> raw_coarse;
  std::vector<double> raw_fine;
  std::vector<double> extrapolated;  // Richardson, assuming order 2
  double observed_order = 0.0;       // from an extra mesh/2 run
};

// Independent finite-difference oracle: conservative three-point
// discretization with half-point p values, symmetrized to a standard
// symmetric tridiagonal eigenproblem, eigenvalues by Sturm-sequence
// bisection, Richardson extrapolation over (mesh, 2*mesh).
OracleResult fd_oracle_eigenvalues(const Problem& problem, int N,
                                   int mesh = 2000);

// Smallest `count` eigenvalues of a symmetric tridiagonal matrix by
// bisection on the Sturm-sequence inertia count.  Throws std::logic_error if
// the inertia counts are inconsistent (an implementation bug, not a math
// condition).
std::vector<double> tridiag_smallest_eigenvalues(std::span<const double> diag,
                                                 std::span<const double> off,
                                                 int count,
                                                 double abs_tol = 1e-12);

}  // namespace prufer
