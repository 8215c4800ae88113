#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prufer/integrate.hpp"

namespace prufer {

// Bracketing window for the eigenvalue search.  NaN endpoints request the
// automatic window: for the linear form (min Q/omega - 1,
// min Q/omega + 10 n^2 pi^2/(b-a)^2), otherwise (-10, 10), expanded
// geometrically until the root is bracketed.
struct SearchWindow {
  double lambda_min = std::numeric_limits<double>::quiet_NaN();
  double lambda_max = std::numeric_limits<double>::quiet_NaN();
  double expansion = 4.0;
  int max_expansions = 60;
};

struct ShootingOptions {
  double theta0 = std::numbers::pi;
  std::optional<double> r0;  // defaults to the problem's r0
  Tolerances tol;
  double phase_tol = 1e-9;
  SearchWindow window;
  int max_iterations = 200;
  int residual_grid = 10000;  // grid for the equation-residual diagnostic
};

enum class EigenStatus {
  Converged,
  BracketFailed,
  IntegrationFailed,
  NotConverged,
  ZeroCountMismatch,  // converged root whose eigenfunction has the wrong
                      // number of interior zeros (possible missed eigenvalue)
};
std::string to_string(EigenStatus status);

struct EigenResult {
  int n = 0;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double theta_b = std::numeric_limits<double>::quiet_NaN();
  // Phase-criterion residual |theta(b) - theta(a) + n*pi| (equals
  // |theta(b) + n*pi| under the theta(a) = 0 convention).
  double residual = std::numeric_limits<double>::quiet_NaN();
  ZeroList zeros;
  int interior_zeros = -1;
  int iterations = 0;
  std::pair<double, double> bracket{std::numeric_limits<double>::quiet_NaN(),
                                    std::numeric_limits<double>::quiet_NaN()};
  EigenStatus status = EigenStatus::NotConverged;
  // theta(b; lambda) was strictly decreasing over the bracketing samples;
  // violations are surfaced, not assumed away.
  bool phase_monotone = true;
  double equation_residual_max = std::numeric_limits<double>::quiet_NaN();
  std::string message;

  bool ok() const { return status == EigenStatus::Converged; }
};

// Memoizes theta(b; lambda) per (problem, options) so overlapping brackets
// across indices reuse integrations.
class ShootingSession {
 public:
  explicit ShootingSession(const Problem& problem, ShootingOptions opts = {});

  double theta_at_b(double lambda);  // throws NumericError on blow-up/step failure
  PruferPath integrate(double lambda) const;

  const Problem& problem() const { return *problem_; }
  const ShootingOptions& options() const { return opts_; }
  int evaluations() const { return evals_; }

 private:
  const Problem* problem_;
  ShootingOptions opts_;
  std::unordered_map<std::uint64_t, double> cache_;
  int evals_ = 0;
};

// Terminal continuous phase theta(b; lambda) for one lambda.
double theta_at_b(const Problem& problem, double lambda,
                  ShootingOptions opts = {});

// Solves theta(b; lambda) = theta(a) - n*pi by bracketing plus a
// bisection/secant hybrid (secant steps accepted only strictly inside the
// bracket), then validates the Sturm zero count of the eigenfunction.
EigenResult find_eigenvalue(ShootingSession& session, int n);
EigenResult find_eigenvalue(const Problem& problem, int n,
                            ShootingOptions opts = {});

// Indices n = 1..N; per-index failures are collected, not thrown.
std::vector<EigenResult> eigenvalues_up_to(const Problem& problem, int N,
                                           ShootingOptions opts = {});

}  // namespace prufer
