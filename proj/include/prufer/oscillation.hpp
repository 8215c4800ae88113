#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prufer/integrate.hpp"

namespace prufer {

struct WitnessInterval {
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::optional<double> witness;  // zero of solution 2 strictly inside
};

// Executable form of the comparison theorem: with shared a, b, p, s, omega
// and q1 <= q2, every open interval between consecutive zeros of solution 1
// should contain a zero of solution 2.  Reports carry full witness data so
// that violations are inspectable artifacts rather than bare booleans.
struct InterlacingReport {
  double lambda = 0.0;
  std::vector<double> zeros1;  // includes the shared endpoint zero at a
  std::vector<double> zeros2;
  std::vector<WitnessInterval> witnesses;
  bool verdict = false;
  bool vacuous_equal_q = false;  // q1 == q2 on the grid: comparison vacuous
  std::string note;
};

InterlacingReport check_interlacing(const Problem& problem1,
                                    const Problem& problem2, double lambda,
                                    PruferInit init = {}, Tolerances tol = {});

struct MonotonicityReport {
  std::vector<double> lambdas;
  std::vector<std::vector<double>> zero_table;  // row per lambda: x_1, x_2, ...
  std::vector<int> failed;                      // lambda indices that failed to integrate
  int common_k = 0;  // zero indices present at every successful lambda
  struct Violation {
    int k;
    double lambda_lo, lambda_hi;  // lambda_hi > lambda_lo but x_k did not move left
  };
  std::vector<Violation> violations;
  bool verdict = false;  // true iff violations is empty
};

// Tabulates x_k(lambda) over an increasing lambda ladder and verifies the
// strict leftward drift of every common zero index.
MonotonicityReport zero_monotonicity(const Problem& problem,
                                     const std::vector<double>& lambdas,
                                     PruferInit init = {}, Tolerances tol = {});

}  // namespace prufer
