#include "prufer/runconfig.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace prufer {

namespace {

using nlohmann::json;

// Two-column CSV (x,value); an optional non-numeric header line is skipped.
std::pair<std::vector<double>, std::vector<double>> load_table_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open table file: " + path.string());
  std::vector<double> xs, vs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    }
    std::istringstream row(line);
    double x, v;
    if (!(row >> x >> v)) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw ValidationError("malformed table row in " + path.string() + ": " + line);
    }
    first = false;
    xs.push_back(x);
    vs.push_back(v);
  }
  if (xs.size() < 2) throw ValidationError("table file has fewer than 2 rows: " + path.string());
  return {std::move(xs), std::move(vs)};
}

std::pair<std::vector<double>, std::vector<double>> table_from_json(
    const json& j, const std::string& name, const std::filesystem::path& base_dir) {
  if (j.is_string()) {
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return load_table_csv(p);
  }
  if (j.is_array()) {
    std::vector<double> xs, vs;
    for (const auto& row : j) {
      if (!row.is_array() || row.size() != 2) {
        throw ValidationError("coefficient '" + name +
                              "': table rows must be [x, value] pairs");
      }
      xs.push_back(row[0].get<double>());
      vs.push_back(row[1].get<double>());
    }
    return {std::move(xs), std::move(vs)};
  }
  throw ValidationError("coefficient '" + name +
                        "': table must be a file path or an array of pairs");
}

Expr parse_wrapped(const std::string& src, const std::string& name) {
  try {
    return Expr::parse(src);
  } catch (const ParseError& e) {
    throw ValidationError("coefficient '" + name + "': " + e.what());
  }
}

CoefficientFn coefficient_from_json(const json& j, const std::string& name,
                                    const std::filesystem::path& base_dir) {
  if (j.is_number()) return CoefficientFn::constant(j.get<double>());
  if (j.is_string()) {
    return CoefficientFn::expression(parse_wrapped(j.get<std::string>(), name));
  }
  if (j.is_object()) {
    CoefficientFn fn;
    if (j.contains("expr")) {
      fn = CoefficientFn::expression(parse_wrapped(j["expr"].get<std::string>(), name));
    } else if (j.contains("table")) {
      auto [xs, vs] = table_from_json(j["table"], name, base_dir);
      fn = CoefficientFn::table(std::move(xs), std::move(vs));
    } else {
      throw ValidationError("coefficient '" + name + "': need 'expr' or 'table'");
    }
    if (j.contains("deriv")) {
      fn.set_derivative(parse_wrapped(j["deriv"].get<std::string>(), name + ".deriv"));
    }
    if (j.contains("deriv_table")) {
      auto [xs, vs] = table_from_json(j["deriv_table"], name, base_dir);
      fn.set_derivative_table(std::move(xs), std::move(vs));
    }
    return fn;
  }
  throw ValidationError("coefficient '" + name +
                        "': expected an expression string, a number, or an object");
}

double theta0_from_json(const json& j) {
  double v;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "pi") return std::numbers::pi;
    if (s == "0") return 0.0;
    throw ValidationError("theta0: expected 0, pi, or a number");
  }
  v = j.get<double>();
  if (std::fabs(v) < 1e-12) return 0.0;
  if (std::fabs(v - std::numbers::pi) < 1e-9) return std::numbers::pi;
  throw ValidationError("theta0 must be 0 or pi");
}

}  // namespace

OutputFormat format_from_string(const std::string& name) {
  if (name == "table") return OutputFormat::Table;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ValidationError("unknown output format '" + name + "' (table|csv|json)");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }

  const std::filesystem::path base_dir = std::filesystem::path(path).parent_path();
  RunConfig cfg;
  try {
    if (!j.contains("a") || !j.contains("b")) {
      throw ValidationError("config must define the interval endpoints 'a' and 'b'");
    }
    cfg.problem.a = j["a"].get<double>();
    cfg.problem.b = j["b"].get<double>();

    for (const char* name : {"p", "s", "q"}) {
      if (!j.contains(name)) {
        throw ValidationError(std::string("config is missing coefficient '") + name + "'");
      }
    }
    cfg.problem.p = coefficient_from_json(j["p"], "p", base_dir);
    cfg.problem.s = coefficient_from_json(j["s"], "s", base_dir);
    cfg.problem.q = coefficient_from_json(j["q"], "q", base_dir);
    if (j.contains("omega")) {
      cfg.problem.omega = coefficient_from_json(j["omega"], "omega", base_dir);
    }
    if (j.contains("form")) {
      cfg.problem.form = form_from_string(j["form"].get<std::string>());
    }
    if (j.contains("r0")) cfg.problem.r0 = j["r0"].get<double>();
    if (j.contains("theta0")) cfg.theta0 = theta0_from_json(j["theta0"]);
    if (j.contains("tol")) {
      const auto& t = j["tol"];
      if (t.contains("abs")) cfg.tol.abs = t["abs"].get<double>();
      if (t.contains("rel")) cfg.tol.rel = t["rel"].get<double>();
    }
    for (double t : {cfg.tol.abs, cfg.tol.rel}) {
      if (!(t >= 1e-13 && t <= 1e-2)) {
        throw ValidationError("tolerances must lie in [1e-13, 1e-2]");
      }
    }
    if (j.contains("N")) cfg.N = j["N"].get<int>();
    if (j.contains("lambda")) {
      if (j["lambda"].is_array()) {
        cfg.lambdas = j["lambda"].get<std::vector<double>>();
      } else {
        cfg.lambdas = {j["lambda"].get<double>()};
      }
    }
    if (j.contains("mesh")) cfg.mesh = j["mesh"].get<int>();
    if (j.contains("grid")) cfg.grid_points = j["grid"].get<int>();
    if (j.contains("f")) cfg.bound_f = coefficient_from_json(j["f"], "f", base_dir);
    if (j.contains("h")) cfg.bound_h = coefficient_from_json(j["h"], "h", base_dir);
    if (j.contains("c")) cfg.bound_c = j["c"].get<double>();
    if (j.contains("q2")) cfg.q2 = coefficient_from_json(j["q2"], "q2", base_dir);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace prufer
