#include "prufer/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "prufer/errors.hpp"
#include "prufer/selfadjoint.hpp"

namespace prufer {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Dormand-Prince 5(4) tableau.
constexpr double C2 = 1.0 / 5.0, C3 = 3.0 / 10.0, C4 = 4.0 / 5.0, C5 = 8.0 / 9.0;
constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0,
                 A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0,
                 A63 = 46732.0 / 5247.0, A64 = 49.0 / 176.0,
                 A65 = -5103.0 / 18656.0;
constexpr double A71 = 35.0 / 384.0, A73 = 500.0 / 1113.0, A74 = 125.0 / 192.0,
                 A75 = -2187.0 / 6784.0, A76 = 11.0 / 84.0;
// Error weights (5th-order minus embedded 4th-order solution).
constexpr double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0,
                 E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0;
// Dense-output weights.
constexpr double D1 = -12715105075.0 / 11282082432.0;
constexpr double D3 = 87487479700.0 / 32700410799.0;
constexpr double D4 = -10690763975.0 / 1880347072.0;
constexpr double D5 = 701980252875.0 / 199316789632.0;
constexpr double D6 = -1453857185.0 / 822651844.0;
constexpr double D7 = 69997945.0 / 29380423.0;

using State = std::array<double, 2>;  // [0] = r, [1] = theta

// RHS of the integrated system.  NonlinearA couples amplitude into the phase;
// LinearB runs the classical phase equation on the associated potential Q
// with a decoupled amplitude factor.
struct SystemRhs {
  const Problem* problem;
  double lambda;
  bool linear;
  AssociatedQ Q;  // only used when linear

  void operator()(double x, const State& y, State& dy) const {
    const CoeffValues c = problem->coefficients_at(x);
    if (linear) {
      const double sn = std::sin(y[1]);
      const double cs = std::cos(y[1]);
      const double qe = Q(x) - lambda * c.omega;
      dy[1] = -cs * cs / c.p + qe * sn * sn;
      dy[0] = y[0] * (-(1.0 / c.p + qe) * sn * cs);
    } else {
      const RhsValue v = prufer_rhs_raw({x, y[0], y[1]}, c, lambda);
      dy[0] = v.dr;
      dy[1] = v.dtheta;
    }
  }

  double lipschitz_at(double x, double r0) const {
    const CoeffValues c = problem->coefficients_at(x);
    const double qe = (linear ? Q(x) : c.q) - lambda * c.omega;
    return lipschitz_bound(c.p, linear ? 0.0 : c.s, qe, r0);
  }
};

double interp(const std::array<double, 5>& c, double sigma) {
  const double s1 = 1.0 - sigma;
  return c[0] + sigma * (c[1] + s1 * (c[2] + sigma * (c[3] + s1 * c[4])));
}

}  // namespace

std::string to_string(PathStatus status) {
  switch (status) {
    case PathStatus::Complete: return "complete";
    case PathStatus::BlowUp: return "blow-up";
    case PathStatus::StepFailure: return "step-failure";
  }
  return "?";
}

double DenseStep::eval_r(double x) const { return interp(cr, (x - x0) / h); }
double DenseStep::eval_theta(double x) const { return interp(ctheta, (x - x0) / h); }

double PruferPath::theta_b() const {
  if (!complete()) {
    throw NumericError("trajectory incomplete (" + to_string(status) + " at x=" +
                       fmt(fail_x) + "), no terminal phase");
  }
  return samples.back().theta;
}

PruferState PruferPath::at(double x) const {
  if (samples.empty()) throw std::logic_error("empty trajectory");
  const double slack = 1e-12 * std::max(1.0, last_x() - a());
  if (x < a() - slack || x > last_x() + slack) {
    throw std::invalid_argument("x=" + fmt(x) + " outside the trajectory range [" +
                                fmt(a()) + ", " + fmt(last_x()) + "]");
  }
  if (steps.empty()) return samples.front();
  const double xc = std::clamp(x, a(), last_x());
  auto it = std::upper_bound(steps.begin(), steps.end(), xc,
                             [](double v, const DenseStep& s) { return v < s.x0; });
  const std::size_t i = (it == steps.begin()) ? 0 : static_cast<std::size_t>(it - steps.begin()) - 1;
  return {x, steps[i].eval_r(xc), steps[i].eval_theta(xc)};
}

PruferPath integrate_prufer(const Problem& problem, double lambda,
                            PruferInit init, Tolerances tol) {
  if (!(tol.abs >= 1e-13 && tol.abs <= 1e-2 && tol.rel >= 1e-13 && tol.rel <= 1e-2)) {
    throw std::invalid_argument("tolerances must lie in [1e-13, 1e-2]");
  }
  const double r0 = init.r0.value_or(problem.r0());
  if (!(r0 > 0.0)) throw std::invalid_argument("initial amplitude must be positive");

  const double a = problem.a();
  const double b = problem.b();
  const double span = b - a;
  const bool linear = problem.form() == EquationForm::LinearB;

  SystemRhs rhs{&problem, lambda, linear, linear ? associated_Q(problem) : AssociatedQ{}};

  PruferPath path;
  path.lambda = lambda;
  path.form = problem.form();
  path.tol = tol;
  path.samples.push_back({a, r0, init.theta0});

  const double hmin = 1e-14 * span;
  const double blow_limit = 1e12 * r0;
  const double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
  const double facc1 = 5.0, facc2 = 0.1;  // 1/fac1, 1/fac2

  double x = a;
  State y{r0, init.theta0};
  State k1, k2, k3, k4, k5, k6, k7, ytmp, y1, erv;
  rhs(x, y, k1);

  double h = std::min(0.1 * span, 1.0 / rhs.lipschitz_at(a, r0));
  h = std::min(h, span);
  double facold = 1e-4;
  bool reject = false;

  for (long step_count = 0;; ++step_count) {
    if (step_count > 10'000'000) {
      throw NumericError("integration exceeded the step budget at x=" + fmt(x));
    }
    if (x >= b) break;
    bool last = false;
    if (x + h >= b) {
      h = b - x;
      last = true;
    }
    if (h < hmin) {
      path.status = PathStatus::StepFailure;
      path.fail_x = x;
      return path;
    }

    for (int i = 0; i < 2; ++i) ytmp[i] = y[i] + h * A21 * k1[i];
    rhs(x + C2 * h, ytmp, k2);
    for (int i = 0; i < 2; ++i) ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
    rhs(x + C3 * h, ytmp, k3);
    for (int i = 0; i < 2; ++i)
      ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    rhs(x + C4 * h, ytmp, k4);
    for (int i = 0; i < 2; ++i)
      ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    rhs(x + C5 * h, ytmp, k5);
    for (int i = 0; i < 2; ++i)
      ytmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] +
                            A64 * k4[i] + A65 * k5[i]);
    rhs(x + h, ytmp, k6);
    for (int i = 0; i < 2; ++i)
      y1[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] +
                          A75 * k5[i] + A76 * k6[i]);
    rhs(x + h, y1, k7);
    for (int i = 0; i < 2; ++i)
      erv[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                    E6 * k6[i] + E7 * k7[i]);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sc = tol.abs + tol.rel * std::max(std::fabs(y[i]), std::fabs(y1[i]));
      const double e = erv[i] / sc;
      err += e * e;
    }
    err = std::sqrt(err / 2.0);
    if (!std::isfinite(err)) err = 1e10;
    if (!(y1[0] > 0.0) || !std::isfinite(y1[0]) || !std::isfinite(y1[1])) {
      err = std::max(err, 10.0);  // trial amplitude left the admissible region
    }

    const double fac11 = std::pow(err, expo1);
    if (err <= 1.0) {
      // accept
      facold = std::max(err, 1e-4);

      DenseStep ds;
      ds.x0 = x;
      ds.h = h;
      const double xe = last ? b : x + h;
      for (int i = 0; i < 2; ++i) {
        const double ydiff = y1[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        std::array<double, 5>& c = (i == 0) ? ds.cr : ds.ctheta;
        c[0] = y[i];
        c[1] = ydiff;
        c[2] = bspl;
        c[3] = ydiff - h * k7[i] - bspl;
        c[4] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] +
                    D6 * k6[i] + D7 * k7[i]);
      }
      path.steps.push_back(ds);
      path.samples.push_back({xe, y1[0], y1[1]});

      if (y1[0] > blow_limit) {
        path.status = PathStatus::BlowUp;
        path.fail_x = xe;
        return path;
      }

      x = xe;
      y = y1;
      k1 = k7;  // first-same-as-last
      if (last) break;

      double fac = fac11 / std::pow(facold, beta);
      fac = std::max(facc2, std::min(facc1, fac / safe));
      double hnew = h / fac;
      if (reject) hnew = std::min(hnew, h);
      reject = false;
      h = std::min(hnew, span);
    } else {
      h = h / std::min(facc1, fac11 / safe);
      reject = true;
    }
  }
  path.status = PathStatus::Complete;
  return path;
}

int ZeroList::count_interior(double b, double edge_tol) const {
  int n = 0;
  for (const auto& c : crossings) {
    if (c.x < b - edge_tol) ++n;
  }
  return n;
}

ZeroList detect_pi_crossings(const PruferPath& path) {
  if (!path.complete()) {
    throw std::invalid_argument("detect_pi_crossings requires a complete trajectory");
  }
  ZeroList out;
  const auto& smp = path.samples;
  if (smp.size() < 2) return out;
  const double theta_a = path.initial_theta();
  const double xtol = 1e-10 * (path.last_x() - path.a());

  std::size_t i = 0;
  for (int k = 1;; ++k) {
    const double level = theta_a - k * kPi;
    // Advance to the step whose right endpoint first dips below the level.
    // Once theta crosses a level it stays strictly below it (theta' < 0 at
    // every level), so the first such step contains the unique crossing.
    while (i + 1 < smp.size() && !(smp[i + 1].theta < level)) ++i;
    if (i + 1 >= smp.size()) break;

    double lo = smp[i].x, hi = smp[i + 1].x;
    while (hi - lo > xtol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (path.at(mid).theta < level) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.crossings.push_back({0.5 * (lo + hi), k});
  }
  return out;
}

ResidualReport equation_residual(const PruferPath& path, const Problem& problem,
                                 int grid_intervals) {
  if (!path.complete()) {
    throw std::invalid_argument("equation_residual requires a trajectory spanning [a,b]");
  }
  if (grid_intervals < 10) throw std::invalid_argument("residual grid too coarse");

  const double a = problem.a();
  const double b = problem.b();
  const int G = grid_intervals;
  const double h = (b - a) / G;
  const bool linear = path.form == EquationForm::LinearB;

  std::vector<double> pu(G + 1), yv(G + 1), uv(G + 1), sv(G + 1), qe(G + 1), pv(G + 1);
  for (int i = 0; i <= G; ++i) {
    const double x = (i == G) ? b : a + i * h;
    const CoeffValues c = problem.coefficients_at(x);
    const PruferState st = path.at(x);
    const double y = st.r * std::sin(st.theta);
    double u;
    if (linear) {
      // The linear path carries the classical pair (y, p y'); the
      // quasi-derivative is recovered as u = y' + s y.
      const double yprime = -(st.r / c.p) * std::cos(st.theta);
      u = yprime + c.s * y;
    } else {
      u = -(st.r / c.p) * std::cos(st.theta);
    }
    yv[i] = y;
    uv[i] = u;
    sv[i] = c.s;
    pv[i] = c.p;
    qe[i] = c.q - path.lambda * c.omega;
    pu[i] = c.p * u;
  }

  ResidualReport rep;
  rep.grid_points = G + 1;
  rep.grid_h = h;
  for (int i = 1; i < G; ++i) {
    const double dpu = (pu[i + 1] - pu[i - 1]) / (2.0 * h);
    const double middle = linear ? sv[i] * pv[i] * uv[i] : sv[i] * yv[i] * uv[i];
    const double res = -dpu + middle + qe[i] * yv[i];
    if (std::fabs(res) > rep.max_residual) {
      rep.max_residual = std::fabs(res);
      rep.argmax_x = a + i * h;
    }
  }
  return rep;
}

}  // namespace prufer
