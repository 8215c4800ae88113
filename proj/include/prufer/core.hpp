#pragma once

#include "prufer/problem.hpp"

namespace prufer {

// One point of a phase/amplitude trajectory.  theta is a continuous lift
// (never reduced mod 2*pi); r stays positive along genuine solutions.
struct PruferState {
  double x;
  double r;
  double theta;
};

struct RhsValue {
  double dr;
  double dtheta;
};

struct BernoulliGH {
  double g;
  double h;
};

struct Reconstructed {
  double y;  // solution value, r*sin(theta)
  double u;  // quasi-derivative y' + s*y,  p*u = -r*cos(theta)
};

// Right-hand side of the coupled amplitude/phase system at one point.  The
// spectral parameter enters through q -> q - lambda*omega:
//
//   theta' = -cos^2(theta)/p - s*sin(theta)*cos(theta)
//            + (q - lambda*omega)*sin^2(theta)
//            - (s*r/p)*sin^2(theta)*cos(theta)
//   r'     = r*[-(1/p + q - lambda*omega)*sin(theta)*cos(theta)
//               - s*sin^2(theta)]
//            + (s/p)*r^2*sin(theta)*cos^2(theta)
//
// Requires p > 0 and r > 0.
RhsValue prufer_rhs(const PruferState& state, const CoeffValues& coeffs,
                    double lambda);

// Same formula without the precondition checks; the adaptive integrator may
// probe trial stage values with transiently nonpositive r.
RhsValue prufer_rhs_raw(const PruferState& state, const CoeffValues& coeffs,
                        double lambda) noexcept;

// Lipschitz constant of theta -> theta' at fixed x with the amplitude frozen
// at r:  L = 1/p + |s| + |q| + 3|s*r|/p.  In the eigenvalue setting pass the
// effective potential q - lambda*omega as q.
double lipschitz_bound(double p, double s, double q, double r);
double lipschitz_bound(const CoeffValues& coeffs, double r);

// Coefficients of the amplitude equation in Bernoulli form
// r' = r*G + r^2*H.
BernoulliGH bernoulli_gh(double theta, const CoeffValues& coeffs,
                         double lambda);

// Inverts the polar substitution: y = r*sin(theta), u = -(r/p)*cos(theta).
// Satisfies y^2 + (p*u)^2 = r^2 identically.
Reconstructed reconstruct_solution(const PruferState& state, double p_at_x);

}  // namespace prufer
