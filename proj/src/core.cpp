#include "prufer/core.hpp"

#include <cmath>
#include <stdexcept>

namespace prufer {

RhsValue prufer_rhs_raw(const PruferState& state, const CoeffValues& c,
                        double lambda) noexcept {
  const double sn = std::sin(state.theta);
  const double cs = std::cos(state.theta);
  const double qe = c.q - lambda * c.omega;  // effective potential
  const double sincos = sn * cs;
  const double sin2 = sn * sn;
  RhsValue v;
  v.dtheta = -cs * cs / c.p - c.s * sincos + qe * sin2 -
             (c.s * state.r / c.p) * sin2 * cs;
  v.dr = state.r * (-(1.0 / c.p + qe) * sincos - c.s * sin2) +
         (c.s / c.p) * state.r * state.r * sn * cs * cs;
  return v;
}

RhsValue prufer_rhs(const PruferState& state, const CoeffValues& coeffs,
                    double lambda) {
  if (!(coeffs.p > 0.0)) throw std::invalid_argument("prufer_rhs: p must be positive");
  if (!(state.r > 0.0)) throw std::invalid_argument("prufer_rhs: r must be positive");
  return prufer_rhs_raw(state, coeffs, lambda);
}

double lipschitz_bound(double p, double s, double q, double r) {
  if (!(p > 0.0)) throw std::invalid_argument("lipschitz_bound: p must be positive");
  return 1.0 / p + std::fabs(s) + std::fabs(q) + 3.0 * std::fabs(s * r) / p;
}

double lipschitz_bound(const CoeffValues& coeffs, double r) {
  return lipschitz_bound(coeffs.p, coeffs.s, coeffs.q, r);
}

BernoulliGH bernoulli_gh(double theta, const CoeffValues& c, double lambda) {
  if (!(c.p > 0.0)) throw std::invalid_argument("bernoulli_gh: p must be positive");
  const double sn = std::sin(theta);
  const double cs = std::cos(theta);
  const double qe = c.q - lambda * c.omega;
  BernoulliGH out;
  out.g = -(1.0 / c.p + qe) * sn * cs - c.s * sn * sn;
  out.h = (c.s / c.p) * sn * cs * cs;
  return out;
}

Reconstructed reconstruct_solution(const PruferState& state, double p_at_x) {
  if (!(p_at_x > 0.0)) throw std::invalid_argument("reconstruct_solution: p must be positive");
  if (!(state.r > 0.0)) throw std::invalid_argument("reconstruct_solution: r must be positive");
  Reconstructed out;
  out.y = state.r * std::sin(state.theta);
  out.u = -(state.r / p_at_x) * std::cos(state.theta);
  return out;
}

}  // namespace prufer
