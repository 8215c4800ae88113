#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "prufer/integrate.hpp"
#include "prufer/problem.hpp"

namespace prufer {

enum class OutputFormat { Table, Csv, Json };
OutputFormat format_from_string(const std::string& name);  // throws ValidationError

// Everything a CLI run needs, loaded from one JSON document.  The problem
// spec is kept unvalidated here; build_problem() performs the checks so
// config errors and validation errors surface through the same path.
struct RunConfig {
  ProblemSpec problem;
  double theta0 = std::numbers::pi;  // 0 or pi
  Tolerances tol;
  int N = 4;                     // solve/bounds/oracle index count
  std::vector<double> lambdas;   // phase/zeros/compare/residual
  int mesh = 2000;               // oracle mesh
  int grid_points = 1000;        // phase output grid
  std::optional<CoefficientFn> bound_f, bound_h;
  std::optional<double> bound_c;
  std::optional<CoefficientFn> q2;  // second potential for compare
};

RunConfig load_config(const std::string& path);

}  // namespace prufer
