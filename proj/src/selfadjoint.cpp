#include "prufer/selfadjoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "prufer/errors.hpp"

namespace prufer {

AssociatedQ associated_Q(const Problem& problem) {
  const double a = problem.a();
  const double b = problem.b();
  // Copies keep the evaluator independent of the Problem's lifetime.
  const CoefficientFn p = problem.p();
  const CoefficientFn s = problem.s();
  const CoefficientFn q = problem.q();

  AssociatedQ out;
  if (p.has_analytic_derivative() && s.has_analytic_derivative()) {
    out.analytic = true;
    out.hd = 0.0;
    out.eval = [p, s, q](double x) {
      const double sv = s(x);
      const double ps_d = p.derivative(x) * sv + p(x) * s.derivative(x);
      return q(x) - ps_d + p(x) * sv * sv;
    };
    return out;
  }

  for (const CoefficientFn* c : {&p, &s}) {
    if (c->is_table() && c->table_size() < 10) {
      throw ValidationError(
          "table coefficient too coarse to differentiate numerically "
          "(need at least 10 samples, got " +
          std::to_string(c->table_size()) + ")");
    }
  }

  const double hd = (b - a) * 1e-5;
  out.analytic = false;
  out.hd = hd;
  out.eval = [p, s, q, a, b, hd](double x) {
    auto ps = [&](double t) { return p(t) * s(t); };
    double d;
    if (x - hd < a) {
      d = (-3.0 * ps(x) + 4.0 * ps(x + hd) - ps(x + 2.0 * hd)) / (2.0 * hd);
    } else if (x + hd > b) {
      d = (3.0 * ps(x) - 4.0 * ps(x - hd) + ps(x - 2.0 * hd)) / (2.0 * hd);
    } else {
      d = (ps(x + hd) - ps(x - hd)) / (2.0 * hd);
    }
    const double sv = s(x);
    return q(x) - d + p(x) * sv * sv;
  };
  return out;
}

EigenResult linear_eigen_shoot(const Problem& problem, int n,
                               ShootingOptions opts) {
  if (problem.form() != EquationForm::LinearB) {
    throw std::invalid_argument("linear_eigen_shoot requires the linear form");
  }
  return find_eigenvalue(problem, n, std::move(opts));
}

std::vector<double> tridiag_smallest_eigenvalues(std::span<const double> diag,
                                                 std::span<const double> off,
                                                 int count, double abs_tol) {
  const int n = static_cast<int>(diag.size());
  if (n < 1) throw std::invalid_argument("empty matrix");
  if (off.size() + 1 != diag.size()) throw std::invalid_argument("off-diagonal size mismatch");
  if (count < 1 || count > n) throw std::invalid_argument("eigenvalue count out of range");

  double maxoff2 = 0.0;
  for (double e : off) maxoff2 = std::max(maxoff2, e * e);
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, maxoff2);

  // Number of eigenvalues strictly below x, from the inertia of the shifted
  // LDL^T factorization (Sturm sequence).
  auto count_below = [&](double x) {
    int cnt = 0;
    double d = 1.0;
    for (int i = 0; i < n; ++i) {
      d = diag[i] - x - (i > 0 ? off[i - 1] * off[i - 1] / d : 0.0);
      if (std::fabs(d) < pivmin) d = -pivmin;
      if (d < 0.0) ++cnt;
    }
    return cnt;
  };

  double glo = std::numeric_limits<double>::infinity();
  double ghi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double rad = (i > 0 ? std::fabs(off[i - 1]) : 0.0) +
                       (i + 1 < n ? std::fabs(off[i]) : 0.0);
    glo = std::min(glo, diag[i] - rad);
    ghi = std::max(ghi, diag[i] + rad);
  }
  const double widen =
      1e-12 * std::max(1.0, std::fabs(glo) + std::fabs(ghi)) + 10.0 * abs_tol;
  glo -= widen;
  ghi += widen;

  if (count_below(glo) != 0 || count_below(ghi) != n) {
    throw std::logic_error("inertia count inconsistency in tridiagonal bisection");
  }

  std::vector<double> eig;
  eig.reserve(count);
  for (int j = 1; j <= count; ++j) {
    double lo = glo, hi = ghi;
    while (hi - lo > abs_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;  // interval below ulp spacing
      const int c = count_below(mid);
      if (c < 0 || c > n) throw std::logic_error("inertia count inconsistency");
      if (c >= j) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    eig.push_back(0.5 * (lo + hi));
  }
  return eig;
}

namespace {

// Raw discrete spectrum on `mesh` subintervals: conservative three-point
// scheme with half-point p, symmetrized by the congruence
// B^{-1/2} A B^{-1/2} which keeps the matrix tridiagonal.
std::vector<double> oracle_mesh_eigenvalues(const Problem& problem,
                                            const AssociatedQ& Q, int N,
                                            int mesh) {
  const double a = problem.a();
  const double b = problem.b();
  const double h = (b - a) / mesh;
  const int n = mesh - 1;  // interior nodes

  std::vector<double> w(n), diag(n), off(std::max(0, n - 1));
  std::vector<double> phalf(mesh);  // p at x_{i+1/2}, i = 0..mesh-1
  for (int i = 0; i < mesh; ++i) {
    phalf[i] = problem.p()(a + (i + 0.5) * h);
  }
  for (int i = 1; i <= n; ++i) {
    const double x = a + i * h;
    w[i - 1] = problem.omega()(x);
    diag[i - 1] = (phalf[i - 1] + phalf[i]) / (h * h) + Q(x);
  }
  for (int i = 0; i < n; ++i) diag[i] /= w[i];
  for (int i = 0; i + 1 < n; ++i) {
    off[i] = (-phalf[i + 1] / (h * h)) / std::sqrt(w[i] * w[i + 1]);
  }
  return tridiag_smallest_eigenvalues(diag, off, N, 1e-12);
}

}  // namespace

OracleResult fd_oracle_eigenvalues(const Problem& problem, int N, int mesh) {
  if (mesh < 100) throw std::invalid_argument("oracle mesh must be at least 100");
  if (N < 1 || N >= mesh / 10) {
    throw std::invalid_argument("need 1 <= N < mesh/10");
  }
  const AssociatedQ Q = associated_Q(problem);

  OracleResult out;
  out.mesh = mesh;
  out.mesh_fine = 2 * mesh;
  // The extra half-resolution run only feeds the observed-order estimate;
  // the extrapolation itself uses (mesh, 2*mesh).
  const std::vector<double> half = oracle_mesh_eigenvalues(problem, Q, N, mesh / 2);
  out.raw_coarse = oracle_mesh_eigenvalues(problem, Q, N, mesh);
  out.raw_fine = oracle_mesh_eigenvalues(problem, Q, N, 2 * mesh);

  out.extrapolated.resize(N);
  std::vector<double> orders;
  for (int j = 0; j < N; ++j) {
    out.extrapolated[j] = (4.0 * out.raw_fine[j] - out.raw_coarse[j]) / 3.0;
    const double d1 = half[j] - out.raw_coarse[j];
    const double d2 = out.raw_coarse[j] - out.raw_fine[j];
    if (d1 * d2 > 0.0) orders.push_back(std::log2(d1 / d2));
  }
  if (!orders.empty()) {
    std::sort(orders.begin(), orders.end());
    out.observed_order = orders[orders.size() / 2];
  }

  for (int j = 0; j + 1 < N; ++j) {
    if (!(out.extrapolated[j] < out.extrapolated[j + 1])) {
      throw NumericError("oracle produced non-increasing eigenvalues at index " +
                         std::to_string(j + 1));
    }
  }
  return out;
}

}  // namespace prufer
