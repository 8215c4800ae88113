#include "prufer/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "prufer/errors.hpp"

namespace prufer {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Zero positions of y on [a,b]: the shared boundary zero at a, every level
// crossing, and the terminal boundary zero when theta(b) sits just above the
// next level within phase tolerance (a converged eigenfunction ends at b with
// theta(b) = theta(a) - k*pi up to integrator error).
std::vector<double> zero_positions(const PruferPath& path) {
  std::vector<double> zs{path.a()};
  const ZeroList zl = detect_pi_crossings(path);
  for (const auto& c : zl.crossings) zs.push_back(c.x);
  const int k_next = static_cast<int>(zl.crossings.size()) + 1;
  const double level = path.initial_theta() - k_next * kPi;
  const double gap = path.theta_b() - level;
  if (gap > 0.0 && gap < 1e-7) zs.push_back(path.last_x());
  return zs;
}

}  // namespace

InterlacingReport check_interlacing(const Problem& problem1,
                                    const Problem& problem2, double lambda,
                                    PruferInit init, Tolerances tol) {
  if (std::fabs(problem1.a() - problem2.a()) > 1e-12 * (1.0 + std::fabs(problem1.a())) ||
      std::fabs(problem1.b() - problem2.b()) > 1e-12 * (1.0 + std::fabs(problem1.b()))) {
    throw ValidationError("comparison problems must share the interval");
  }
  if (problem1.form() != problem2.form()) {
    throw ValidationError("comparison problems must share the equation form");
  }

  // Shared p, s, omega and the ordering hypothesis q1 <= q2, all on a dense
  // grid.
  const int npts = 1001;
  double max_qdiff = 0.0;
  double max_qmag = 0.0;
  for (int i = 0; i < npts; ++i) {
    const double x = problem1.a() + problem1.length() * i / (npts - 1);
    const CoeffValues c1 = problem1.coefficients_at(x);
    const CoeffValues c2 = problem2.coefficients_at(x);
    auto same = [](double u, double v) {
      return std::fabs(u - v) <= 1e-10 * (1.0 + std::fabs(u));
    };
    if (!same(c1.p, c2.p)) throw ValidationError("comparison problems differ in p at x=" + fmt(x));
    if (!same(c1.s, c2.s)) throw ValidationError("comparison problems differ in s at x=" + fmt(x));
    if (!same(c1.omega, c2.omega)) {
      throw ValidationError("comparison problems differ in omega at x=" + fmt(x));
    }
    if (c1.q > c2.q + 1e-12 * (1.0 + std::fabs(c2.q))) {
      throw ValidationError("comparison hypothesis q1 <= q2 violated at x=" + fmt(x) +
                            " (q1=" + fmt(c1.q) + ", q2=" + fmt(c2.q) + ")");
    }
    max_qdiff = std::max(max_qdiff, std::fabs(c2.q - c1.q));
    max_qmag = std::max({max_qmag, std::fabs(c1.q), std::fabs(c2.q)});
  }

  const PruferPath path1 = integrate_prufer(problem1, lambda, init, tol);
  if (!path1.complete()) {
    throw NumericError("integration of problem 1 " + to_string(path1.status) +
                       " at x=" + fmt(path1.fail_x));
  }
  const PruferPath path2 = integrate_prufer(problem2, lambda, init, tol);
  if (!path2.complete()) {
    throw NumericError("integration of problem 2 " + to_string(path2.status) +
                       " at x=" + fmt(path2.fail_x));
  }

  InterlacingReport rep;
  rep.lambda = lambda;
  rep.zeros1 = zero_positions(path1);
  rep.zeros2 = zero_positions(path2);

  if (max_qdiff <= 1e-13 * (1.0 + max_qmag)) {
    // Equal potentials: the zero sets coincide and the open intervals are
    // degenerate; the comparison carries no content.
    rep.vacuous_equal_q = true;
    rep.verdict = true;
    rep.note = "q1 and q2 coincide on the validation grid; comparison is vacuous";
    return rep;
  }

  bool all_witnessed = true;
  for (std::size_t i = 0; i + 1 < rep.zeros1.size(); ++i) {
    WitnessInterval w;
    w.x_lo = rep.zeros1[i];
    w.x_hi = rep.zeros1[i + 1];
    for (double z : rep.zeros2) {
      if (z > w.x_lo && z < w.x_hi) {
        w.witness = z;
        break;
      }
    }
    if (!w.witness) all_witnessed = false;
    rep.witnesses.push_back(w);
  }
  rep.verdict = all_witnessed;
  if (!all_witnessed) {
    rep.note = "at least one consecutive-zero interval of solution 1 contains "
               "no zero of solution 2";
  }
  return rep;
}

MonotonicityReport zero_monotonicity(const Problem& problem,
                                     const std::vector<double>& lambdas,
                                     PruferInit init, Tolerances tol) {
  if (lambdas.size() < 2) throw std::invalid_argument("need at least two lambdas");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i) {
    if (!(lambdas[i] < lambdas[i + 1])) {
      throw std::invalid_argument("lambdas must be strictly increasing");
    }
  }

  MonotonicityReport rep;
  rep.lambdas = lambdas;
  rep.zero_table.resize(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const PruferPath path = integrate_prufer(problem, lambdas[i], init, tol);
    if (!path.complete()) {
      rep.failed.push_back(static_cast<int>(i));
      continue;
    }
    for (const auto& c : detect_pi_crossings(path).crossings) {
      rep.zero_table[i].push_back(c.x);
    }
  }

  std::vector<std::size_t> ok_rows;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (std::find(rep.failed.begin(), rep.failed.end(), static_cast<int>(i)) ==
        rep.failed.end()) {
      ok_rows.push_back(i);
    }
  }
  if (!ok_rows.empty()) {
    std::size_t kmin = std::numeric_limits<std::size_t>::max();
    for (std::size_t i : ok_rows) kmin = std::min(kmin, rep.zero_table[i].size());
    rep.common_k = static_cast<int>(kmin);
  }

  for (int k = 1; k <= rep.common_k; ++k) {
    for (std::size_t j = 0; j + 1 < ok_rows.size(); ++j) {
      const std::size_t i1 = ok_rows[j], i2 = ok_rows[j + 1];
      const double x1 = rep.zero_table[i1][k - 1];
      const double x2 = rep.zero_table[i2][k - 1];
      if (!(x2 < x1)) {
        rep.violations.push_back({k, lambdas[i1], lambdas[i2]});
      }
    }
  }
  rep.verdict = rep.violations.empty();
  return rep;
}

}  // namespace prufer
