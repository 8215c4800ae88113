// Command-line front end: spectral computations for the quasi-derivative
// Sturm-Liouville problem via the generalized Prufer transformation.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure,
// 4 internal error.  Errors are a single machine-parsable line on stderr:
//   error: <config|numeric|internal>: <message>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prufer/bounds.hpp"
#include "prufer/errors.hpp"
#include "prufer/integrate.hpp"
#include "prufer/oscillation.hpp"
#include "prufer/runconfig.hpp"
#include "prufer/selfadjoint.hpp"
#include "prufer/shooting.hpp"

namespace {

using nlohmann::json;
using namespace prufer;

// 17 significant digits: enough to round-trip IEEE doubles, locale-free.
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommandArgs {
  std::string config_path;
  std::string out_path;
  std::string format = "table";
  int n = 0;  // 0: take from config
  std::vector<double> lambdas;
  int mesh = 0;
  int grid = 0;
  double tol_abs = 0.0;
  double tol_rel = 0.0;
};

void add_common_options(CLI::App* sub, CommandArgs* args) {
  sub->add_option("--config", args->config_path, "JSON problem/run configuration")
      ->required();
  sub->add_option("--out", args->out_path, "output file (default: stdout)");
  sub->add_option("--format", args->format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  sub->add_option("--n", args->n, "number of eigenvalue indices");
  sub->add_option("--lambda", args->lambdas, "spectral parameter value(s)")
      ->delimiter(',');
  sub->add_option("--mesh", args->mesh, "finite-difference oracle mesh");
  sub->add_option("--grid", args->grid, "trajectory output grid points");
  sub->add_option("--tol-abs", args->tol_abs, "integrator absolute tolerance");
  sub->add_option("--tol-rel", args->tol_rel, "integrator relative tolerance");
}

RunConfig load_and_override(const CommandArgs& args) {
  RunConfig cfg = load_config(args.config_path);
  if (args.n > 0) cfg.N = args.n;
  if (!args.lambdas.empty()) cfg.lambdas = args.lambdas;
  if (args.mesh > 0) cfg.mesh = args.mesh;
  if (args.grid > 0) cfg.grid_points = args.grid;
  if (args.tol_abs > 0.0) cfg.tol.abs = args.tol_abs;
  if (args.tol_rel > 0.0) cfg.tol.rel = args.tol_rel;
  return cfg;
}

void emit(const CommandArgs& args, const std::string& text) {
  if (args.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(args.out_path);
  if (!out) throw ValidationError("cannot open output file: " + args.out_path);
  out << text;
}

double required_lambda(const RunConfig& cfg) {
  if (cfg.lambdas.empty()) {
    throw ValidationError("this command needs a lambda (config key 'lambda' or --lambda)");
  }
  return cfg.lambdas.front();
}

ShootingOptions shooting_options(const RunConfig& cfg) {
  ShootingOptions opts;
  opts.theta0 = cfg.theta0;
  opts.tol = cfg.tol;
  return opts;
}

json eigen_to_json(const EigenResult& r) {
  json zeros = json::array();
  for (const auto& c : r.zeros.crossings) zeros.push_back({{"k", c.k}, {"x", c.x}});
  return {{"n", r.n},
          {"lambda", r.lambda},
          {"theta_b", r.theta_b},
          {"phase_residual", r.residual},
          {"equation_residual", r.equation_residual_max},
          {"interior_zeros", r.interior_zeros},
          {"zeros", zeros},
          {"iterations", r.iterations},
          {"bracket", {r.bracket.first, r.bracket.second}},
          {"phase_monotone", r.phase_monotone},
          {"status", to_string(r.status)},
          {"message", r.message}};
}

int run_solve(const CommandArgs& args, const RunConfig& cfg, const Problem& problem) {
  const auto results = eigenvalues_up_to(problem, cfg.N, shooting_options(cfg));
  const OutputFormat format = format_from_string(args.format);
  std::ostringstream os;
  if (format == OutputFormat::Json) {
    json doc = {{"command", "solve"}, {"form", to_string(problem.form())},
                {"results", json::array()}};
    for (const auto& r : results) doc["results"].push_back(eigen_to_json(r));
    os << doc.dump(2) << '\n';
  } else if (format == OutputFormat::Csv) {
    os << "n,lambda,theta_b,phase_residual,equation_residual,interior_zeros,status\n";
    for (const auto& r : results) {
      os << r.n << ',' << num(r.lambda) << ',' << num(r.theta_b) << ','
         << num(r.residual) << ',' << num(r.equation_residual_max) << ','
         << r.interior_zeros << ',' << to_string(r.status) << '\n';
    }
  } else {
    char line[256];
    os << "   n          lambda        phase_resid     eq_resid  zeros  status\n";
    for (const auto& r : results) {
      std::snprintf(line, sizeof line, "%4d %18.12g %12.3g %12.3g %6d  %s %s\n",
                    r.n, r.lambda, r.residual, r.equation_residual_max,
                    r.interior_zeros, to_string(r.status).c_str(), r.message.c_str());
      os << line;
    }
  }
  emit(args, os.str());
  return 0;
}

int run_phase(const CommandArgs& args, const RunConfig& cfg, const Problem& problem) {
  const double lambda = required_lambda(cfg);
  const PruferPath path =
      integrate_prufer(problem, lambda, {cfg.theta0, std::nullopt}, cfg.tol);
  if (!path.complete()) {
    throw NumericError("integration " + to_string(path.status) + " at x=" +
                       num(path.fail_x) + " for lambda=" + num(lambda));
  }
  const int G = std::max(cfg.grid_points, 2);
  const OutputFormat format = format_from_string(args.format);
  std::ostringstream os;

  auto row_values = [&](int i) {
    const double x = problem.a() + problem.length() * i / (G - 1);
    const PruferState st = path.at(x);
    const CoeffValues c = problem.coefficients_at(x);
    const double y = st.r * std::sin(st.theta);
    // u is the quasi-derivative y' + s*y in both forms.
    double u = -(st.r / c.p) * std::cos(st.theta);
    if (problem.form() == EquationForm::LinearB) u += c.s * y;
    return std::array<double, 5>{x, st.theta, st.r, y, u};
  };

  if (format == OutputFormat::Json) {
    json doc = {{"command", "phase"}, {"lambda", lambda},
                {"columns", {"x", "theta", "r", "y", "u"}},
                {"rows", json::array()}};
    for (int i = 0; i < G; ++i) {
      const auto v = row_values(i);
      doc["rows"].push_back({v[0], v[1], v[2], v[3], v[4]});
    }
    os << doc.dump(2) << '\n';
  } else {
    os << "x,theta,r,y,u\n";
    for (int i = 0; i < G; ++i) {
      const auto v = row_values(i);
      os << num(v[0]) << ',' << num(v[1]) << ',' << num(v[2]) << ',' << num(v[3])
         << ',' << num(v[4]) << '\n';
    }
  }
  emit(args, os.str());
  return 0;
}

int run_zeros(const CommandArgs& args, const RunConfig& cfg, const Problem& problem) {
  if (cfg.lambdas.empty()) {
    throw ValidationError("zeros needs at least one lambda (config key 'lambda' or --lambda)");
  }
  const OutputFormat format = format_from_string(args.format);
  std::ostringstream os;
  json doc = {{"command", "zeros"}, {"results", json::array()}};
  std::ostringstream csv;
  csv << "lambda,k,x\n";
  for (double lambda : cfg.lambdas) {
    const PruferPath path =
        integrate_prufer(problem, lambda, {cfg.theta0, std::nullopt}, cfg.tol);
    json entry = {{"lambda", lambda}};
    if (!path.complete()) {
      entry["status"] = to_string(path.status);
      entry["fail_x"] = path.fail_x;
    } else {
      entry["status"] = "complete";
      json cr = json::array();
      for (const auto& c : detect_pi_crossings(path).crossings) {
        cr.push_back({{"k", c.k}, {"x", c.x}});
        csv << num(lambda) << ',' << c.k << ',' << num(c.x) << '\n';
      }
      entry["crossings"] = cr;
    }
    doc["results"].push_back(entry);
  }
  if (format == OutputFormat::Json) {
    os << doc.dump(2) << '\n';
  } else {
    os << csv.str();
  }
  emit(args, os.str());
  return 0;
}

int run_bounds(const CommandArgs& args, const RunConfig& cfg, const Problem& problem) {
  BoundsOptions opts;
  opts.f = cfg.bound_f;
  opts.h = cfg.bound_h;
  opts.c = cfg.bound_c;
  const OutputFormat format = format_from_string(args.format);
  std::ostringstream os;
  json doc = {{"command", "bounds"}, {"results", json::array()}};
  std::ostringstream table;
  table << "   n             lower             upper\n";
  std::ostringstream csv;
  csv << "n,lower,upper,m,M,c,D,integral_inv_f,integral_inv_h\n";
  for (int n = 1; n <= cfg.N; ++n) {
    const BoundsResult r = compute_bounds(problem, n, opts);
    doc["results"].push_back({{"n", r.n},
                              {"lower", r.lower},
                              {"upper", r.upper},
                              {"m", r.m},
                              {"M", r.M},
                              {"c", r.c},
                              {"D", r.D},
                              {"integral_inv_f", r.integral_inv_f},
                              {"integral_inv_h", r.integral_inv_h},
                              {"nonlinear_form_caveat", r.nonlinear_form_caveat}});
    char line[128];
    std::snprintf(line, sizeof line, "%4d %17.12g %17.12g\n", r.n, r.lower, r.upper);
    table << line;
    csv << r.n << ',' << num(r.lower) << ',' << num(r.upper) << ',' << num(r.m)
        << ',' << num(r.M) << ',' << num(r.c) << ',' << num(r.D) << ','
        << num(r.integral_inv_f) << ',' << num(r.integral_inv_h) << '\n';
  }
  if (format == OutputFormat::Json) {
    os << doc.dump(2) << '\n';
  } else if (format == OutputFormat::Csv) {
    os << csv.str();
  } else {
    os << table.str();
  }
  emit(args, os.str());
  return 0;
}

int run_oracle(const CommandArgs& args, const RunConfig& cfg, const Problem& problem) {
  const OracleResult r = fd_oracle_eigenvalues(problem, cfg.N, cfg.mesh);
  const OutputFormat format = format_from_string(args.format);
  std::ostringstream os;
  if (format == OutputFormat::Csv) {
    os << "n,raw_coarse,raw_fine,extrapolated\n";
    for (std::size_t i = 0; i < r.extrapolated.size(); ++i) {
      os << (i + 1) << ',' << num(r.raw_coarse[i]) << ',' << num(r.raw_fine[i])
         << ',' << num(r.extrapolated[i]) << '\n';
    }
  } else if (format == OutputFormat::Table) {
    os << "mesh " << r.mesh << " / " << r.mesh_fine
       << ", observed order " << num(r.observed_order) << "\n";
    for (std::size_t i = 0; i < r.extrapolated.size(); ++i) {
      char line[96];
      std::snprintf(line, sizeof line, "%4zu %17.12g\n", i + 1, r.extrapolated[i]);
      os << line;
    }
  } else {
    json doc = {{"command", "oracle"},
                {"mesh", r.mesh},
                {"mesh_fine", r.mesh_fine},
                {"raw_coarse", r.raw_coarse},
                {"raw_fine", r.raw_fine},
                {"extrapolated", r.extrapolated},
                {"observed_order", r.observed_order},
                {"form_caveat", problem.form() == EquationForm::NonlinearA}};
    os << doc.dump(2) << '\n';
  }
  emit(args, os.str());
  return 0;
}

int run_compare(const CommandArgs& args, const RunConfig& cfg, const Problem& problem) {
  if (!cfg.q2) {
    throw ValidationError("compare needs the second potential (config key 'q2')");
  }
  ProblemSpec spec2;
  spec2.a = cfg.problem.a;
  spec2.b = cfg.problem.b;
  spec2.p = cfg.problem.p;
  spec2.s = cfg.problem.s;
  spec2.q = *cfg.q2;
  spec2.omega = cfg.problem.omega;
  spec2.form = cfg.problem.form;
  spec2.r0 = cfg.problem.r0;
  const Problem problem2 = build_problem(std::move(spec2));

  const double lambda = cfg.lambdas.empty() ? 0.0 : cfg.lambdas.front();
  const InterlacingReport rep =
      check_interlacing(problem, problem2, lambda, {cfg.theta0, std::nullopt}, cfg.tol);

  json witnesses = json::array();
  for (const auto& w : rep.witnesses) {
    json entry = {{"x_lo", w.x_lo}, {"x_hi", w.x_hi}};
    if (w.witness) {
      entry["witness"] = *w.witness;
    } else {
      entry["witness"] = nullptr;
    }
    witnesses.push_back(entry);
  }
  json doc = {{"command", "compare"},
              {"lambda", rep.lambda},
              {"verdict", rep.verdict},
              {"vacuous_equal_q", rep.vacuous_equal_q},
              {"note", rep.note},
              {"zeros1", rep.zeros1},
              {"zeros2", rep.zeros2},
              {"witnesses", witnesses}};
  std::ostringstream os;
  if (format_from_string(args.format) == OutputFormat::Table) {
    os << "verdict: " << (rep.verdict ? "true" : "false")
       << (rep.vacuous_equal_q ? " (vacuous: equal potentials)" : "") << '\n'
       << "zeros1: " << rep.zeros1.size() << ", zeros2: " << rep.zeros2.size() << '\n';
    if (!rep.note.empty()) os << "note: " << rep.note << '\n';
  } else {
    os << doc.dump(2) << '\n';
  }
  emit(args, os.str());
  return 0;
}

int run_residual(const CommandArgs& args, const RunConfig& cfg, const Problem& problem) {
  const double lambda = required_lambda(cfg);
  const PruferPath path =
      integrate_prufer(problem, lambda, {cfg.theta0, std::nullopt}, cfg.tol);
  if (!path.complete()) {
    throw NumericError("integration " + to_string(path.status) + " at x=" +
                       num(path.fail_x) + " for lambda=" + num(lambda));
  }
  const ResidualReport rep = equation_residual(path, problem);
  json doc = {{"command", "residual"},
              {"lambda", lambda},
              {"form", to_string(problem.form())},
              {"max_residual", rep.max_residual},
              {"argmax_x", rep.argmax_x},
              {"grid_points", rep.grid_points}};
  std::ostringstream os;
  if (format_from_string(args.format) == OutputFormat::Table) {
    os << "max residual " << num(rep.max_residual) << " at x=" << num(rep.argmax_x)
       << " (grid " << rep.grid_points << ")\n";
  } else {
    os << doc.dump(2) << '\n';
  }
  emit(args, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalues, phase trajectories, zeros, and variational bounds "
               "for quasi-derivative Sturm-Liouville problems"};
  app.require_subcommand(1);

  CommandArgs args;
  struct Command {
    const char* name;
    const char* desc;
    int (*run)(const CommandArgs&, const RunConfig&, const Problem&);
  };
  const Command commands[] = {
      {"solve", "eigenvalues 1..N with zeros and residual diagnostics", run_solve},
      {"phase", "theta/r trajectory at a fixed lambda (plot-ready columns)", run_phase},
      {"zeros", "zero tables x_k(lambda) over a lambda list", run_zeros},
      {"bounds", "variational lower/upper eigenvalue bounds", run_bounds},
      {"oracle", "finite-difference oracle eigenvalues with extrapolation", run_oracle},
      {"compare", "interlacing report for a potential pair (needs 'q2')", run_compare},
      {"residual", "original-equation residual at a fixed lambda", run_residual},
  };
  for (const auto& cmd : commands) {
    add_common_options(app.add_subcommand(cmd.name, cmd.desc), &args);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = load_and_override(args);
    const Problem problem = build_problem(cfg.problem);
    for (const auto& cmd : commands) {
      if (app.get_subcommand(cmd.name)->parsed()) {
        return cmd.run(args, cfg, problem);
      }
    }
    std::cerr << "error: config: no command selected\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const EvalError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: numeric: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 4;
  }
}
