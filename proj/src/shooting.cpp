#include "prufer/shooting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

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

// min Q/omega on a dense grid; the lower-bound theorem makes this a cheap
// floor estimate for the spectrum of the linear form.
double spectrum_floor_estimate(const Problem& problem) {
  const AssociatedQ Q = associated_Q(problem);
  const int npts = 1001;
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < npts; ++i) {
    const double x = problem.a() + problem.length() * i / (npts - 1);
    m = std::min(m, Q(x) / problem.omega()(x));
  }
  return m;
}

SearchWindow resolve_window(const Problem& problem, int n, SearchWindow w) {
  if (std::isnan(w.lambda_min) || std::isnan(w.lambda_max) ||
      !(w.lambda_min < w.lambda_max)) {
    if (problem.form() == EquationForm::LinearB) {
      const double m_est = spectrum_floor_estimate(problem);
      const double len = problem.length();
      w.lambda_min = m_est - 1.0;
      w.lambda_max = m_est + 10.0 * n * n * kPi * kPi / (len * len);
    } else {
      w.lambda_min = -10.0;
      w.lambda_max = 10.0;
    }
  }
  return w;
}

}  // namespace

std::string to_string(EigenStatus status) {
  switch (status) {
    case EigenStatus::Converged: return "converged";
    case EigenStatus::BracketFailed: return "bracket-failed";
    case EigenStatus::IntegrationFailed: return "integration-failed";
    case EigenStatus::NotConverged: return "not-converged";
    case EigenStatus::ZeroCountMismatch: return "zero-count-mismatch";
  }
  return "?";
}

ShootingSession::ShootingSession(const Problem& problem, ShootingOptions opts)
    : problem_(&problem), opts_(std::move(opts)) {}

double ShootingSession::theta_at_b(double lambda) {
  const auto key = std::bit_cast<std::uint64_t>(lambda);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  PruferPath path = integrate(lambda);
  ++evals_;
  if (!path.complete()) {
    throw NumericError("integration " + to_string(path.status) + " at x=" +
                       fmt(path.fail_x) + " for lambda=" + fmt(lambda));
  }
  const double tb = path.samples.back().theta;
  cache_.emplace(key, tb);
  return tb;
}

PruferPath ShootingSession::integrate(double lambda) const {
  return integrate_prufer(*problem_, lambda, {opts_.theta0, opts_.r0}, opts_.tol);
}

double theta_at_b(const Problem& problem, double lambda, ShootingOptions opts) {
  ShootingSession session(problem, std::move(opts));
  return session.theta_at_b(lambda);
}

EigenResult find_eigenvalue(ShootingSession& session, int n) {
  EigenResult res;
  res.n = n;
  if (n < 1) {
    res.status = EigenStatus::BracketFailed;
    res.message = "index n must be >= 1";
    return res;
  }

  const Problem& problem = session.problem();
  const ShootingOptions& opts = session.options();
  const double theta0 = opts.theta0;
  const double target_drop = n * kPi;

  // Root function: g decreases in lambda (the effective potential is
  // q - lambda*omega), so a bracket has g(lo) > 0 > g(hi).
  auto g = [&](double lam) { return session.theta_at_b(lam) - theta0 + target_drop; };

  std::vector<std::pair<double, double>> scan;  // bracketing samples
  double lo, hi, glo, ghi;
  try {
    SearchWindow w = resolve_window(problem, n, opts.window);
    lo = w.lambda_min;
    hi = w.lambda_max;
    glo = g(lo);
    scan.emplace_back(lo, glo);
    ghi = g(hi);
    scan.emplace_back(hi, ghi);

    double width = hi - lo;
    int expansions = 0;
    while (glo <= 0.0 && expansions < w.max_expansions) {
      hi = lo;
      ghi = glo;
      width *= w.expansion;
      lo -= width;
      glo = g(lo);
      scan.emplace_back(lo, glo);
      ++expansions;
    }
    while (glo > 0.0 && ghi >= 0.0 && expansions < w.max_expansions) {
      lo = hi;
      glo = ghi;
      width *= w.expansion;
      hi += width;
      ghi = g(hi);
      scan.emplace_back(hi, ghi);
      ++expansions;
    }
    res.bracket = {lo, hi};
    if (!(glo > 0.0 && ghi < 0.0)) {
      res.status = EigenStatus::BracketFailed;
      res.message = "no bracket after " + std::to_string(expansions) +
                    " expansions: g(" + fmt(lo) + ")=" + fmt(glo) + ", g(" +
                    fmt(hi) + ")=" + fmt(ghi);
      return res;
    }

    // Bisection/secant hybrid: a secant step is taken only when it lands
    // strictly inside the current bracket.
    double lprev = lo, gprev = glo;
    double lcur = hi, gcur = ghi;
    double lam = 0.5 * (lo + hi);
    bool converged = false;
    int iter = 0;
    double best_lambda = std::fabs(glo) < std::fabs(ghi) ? lo : hi;
    double best_g = std::min(std::fabs(glo), std::fabs(ghi));
    while (iter < opts.max_iterations) {
      ++iter;
      double cand = 0.5 * (lo + hi);
      if (gcur != gprev) {
        const double secant = lcur - gcur * (lcur - lprev) / (gcur - gprev);
        if (secant > lo && secant < hi) cand = secant;
      }
      if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
      const double gc = g(cand);
      lprev = lcur;
      gprev = gcur;
      lcur = cand;
      gcur = gc;
      if (std::fabs(gc) < best_g) {
        best_g = std::fabs(gc);
        best_lambda = cand;
      }
      if (gc > 0.0) {
        lo = cand;
      } else if (gc < 0.0) {
        hi = cand;
      }
      if (std::fabs(gc) < opts.phase_tol) {
        lam = cand;
        converged = true;
        break;
      }
      const double width_floor =
          4.0 * std::numeric_limits<double>::epsilon() *
          std::max({1.0, std::fabs(lo), std::fabs(hi)});
      if (hi - lo <= width_floor) break;
    }
    if (!converged) {
      lam = best_lambda;
      converged = best_g < opts.phase_tol;
    }

    res.bracket = {lo, hi};
    res.iterations = iter;
    res.lambda = lam;

    // Final trajectory diagnostics at the converged lambda.
    PruferPath path = session.integrate(lam);
    if (!path.complete()) {
      res.status = EigenStatus::IntegrationFailed;
      res.message = "integration " + to_string(path.status) + " at x=" +
                    fmt(path.fail_x) + " for lambda=" + fmt(lam);
      return res;
    }
    res.theta_b = path.theta_b();
    res.residual = std::fabs(res.theta_b - theta0 + target_drop);
    res.zeros = detect_pi_crossings(path);
    res.interior_zeros =
        res.zeros.count_interior(problem.b(), 1e-7 * problem.length());
    res.equation_residual_max =
        equation_residual(path, problem, opts.residual_grid).max_residual;

    // Monotonicity of theta(b; lambda) over the well-separated bracketing
    // samples; the comparison argument asserts it, we verify it.
    std::sort(scan.begin(), scan.end());
    for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
      if (scan[i + 1].second >= scan[i].second + 1e-12) {
        res.phase_monotone = false;
        res.message += (res.message.empty() ? "" : "; ");
        res.message += "theta(b;lambda) not decreasing between lambda=" +
                       fmt(scan[i].first) + " and " + fmt(scan[i + 1].first);
        break;
      }
    }

    if (!converged) {
      res.status = EigenStatus::NotConverged;
      res.message += (res.message.empty() ? "" : "; ");
      res.message += "phase residual " + fmt(res.residual) + " above tolerance";
    } else if (res.interior_zeros != n - 1) {
      res.status = EigenStatus::ZeroCountMismatch;
      res.message += (res.message.empty() ? "" : "; ");
      res.message += "expected " + std::to_string(n - 1) + " interior zeros, found " +
                     std::to_string(res.interior_zeros) +
                     " (possible missed eigenvalue)";
    } else {
      res.status = EigenStatus::Converged;
    }
  } catch (const NumericError& e) {
    res.status = EigenStatus::IntegrationFailed;
    res.message = e.what();
  }
  return res;
}

EigenResult find_eigenvalue(const Problem& problem, int n, ShootingOptions opts) {
  ShootingSession session(problem, std::move(opts));
  return find_eigenvalue(session, n);
}

std::vector<EigenResult> eigenvalues_up_to(const Problem& problem, int N,
                                           ShootingOptions opts) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  ShootingSession session(problem, std::move(opts));
  std::vector<EigenResult> out;
  out.reserve(N);
  for (int n = 1; n <= N; ++n) {
    out.push_back(find_eigenvalue(session, n));
    if (n >= 2 && out[n - 1].ok() && out[n - 2].ok() &&
        !(out[n - 2].lambda < out[n - 1].lambda)) {
      out[n - 1].message += (out[n - 1].message.empty() ? "" : "; ");
      out[n - 1].message += "eigenvalue not above index " + std::to_string(n - 1);
    }
  }
  return out;
}

}  // namespace prufer
