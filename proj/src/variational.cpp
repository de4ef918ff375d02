#include "singprof/variational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

namespace singprof {

namespace {

struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1

  std::vector<double> apply(const std::vector<double>& x) const {
    const std::size_t n = diag.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = diag[i] * x[i];
      if (i > 0) s += off[i - 1] * x[i - 1];
      if (i + 1 < n) s += off[i] * x[i + 1];
      y[i] = s;
    }
    return y;
  }

  // Thomas algorithm; the matrix is symmetric and diagonally dominant here.
  std::vector<double> solve(const std::vector<double>& b) const {
    const std::size_t n = diag.size();
    std::vector<double> c(n), d(n), x(n);
    double denom = diag[0];
    c[0] = n > 1 ? off[0] / denom : 0.0;
    d[0] = b[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      denom = diag[i] - off[i - 1] * c[i - 1];
      c[i] = i + 1 < n ? off[i] / denom : 0.0;
      d[i] = (b[i] - off[i - 1] * d[i - 1]) / denom;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
  }
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sin_pow(double t, int dim) { return dim == 2 ? 1.0 : std::pow(std::sin(t), dim - 2.0); }

// Discrete functional on the free nodes 0..n-2 (the last node is pinned to 0).
struct NodeProblem {
  int dim;
  double q;
  double ell;
  double h;
  std::vector<double> mass;  // lumped, free nodes
  Tridiag stiff;
  Tridiag precond;

  std::vector<double> edge;  // sin^{N-2} at midpoints over h; edge i joins nodes i, i+1

  // Edge form of w.(A w) - ell w.(M w).
  double J(const std::vector<double>& w) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double d = (i + 1 < w.size() ? w[i + 1] : 0.0) - w[i];
      s += edge[i] * d * d;
    }
    return s - ell * mass_dot(w, w);
  }
  double mass_dot(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += mass[i] * a[i] * b[i];
    return s;
  }
  double C(const std::vector<double>& w) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] > 0.0) s += mass[i] * std::pow(w[i], q + 1.0);
    return s;
  }
  double R(const std::vector<double>& w) const { return J(w) / std::pow(C(w), 2.0 / (q + 1.0)); }
  void normalize(std::vector<double>& w) const {
    for (double& x : w) x = std::max(x, 0.0);
    const double s = std::pow(C(w), 1.0 / (q + 1.0));
    for (double& x : w) x /= s;
  }
};

NodeProblem build_problem(const Params& p, int n) {
  NodeProblem pr{p.dim, p.q, p.ell, (std::numbers::pi / 2.0) / (n - 1), {}, {}, {}, {}};
  const int m = n - 1;
  pr.mass.resize(m);
  for (int i = 0; i < m; ++i) pr.mass[i] = sin_pow(i * pr.h, p.dim) * pr.h * (i == 0 ? 0.5 : 1.0);
  pr.stiff.diag.assign(m, 0.0);
  pr.stiff.off.assign(m > 1 ? m - 1 : 0, 0.0);
  for (int i = 0; i < m; ++i) {
    const double k = sin_pow((i + 0.5) * pr.h, p.dim) / pr.h;
    pr.edge.push_back(k);
    pr.stiff.diag[i] += k;
    if (i + 1 < m) {
      pr.stiff.diag[i + 1] += k;
      pr.stiff.off[i] = -k;
    }
  }
  pr.precond = pr.stiff;
  for (int i = 0; i < m; ++i) pr.precond.diag[i] += pr.mass[i];
  return pr;
}

}  // namespace

std::vector<double> DiscreteProfile::rescaled() const {
  const double s = std::pow(lagrange_multiplier, 1.0 / (params.q - 1.0));
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = s * values[i];
  return out;
}

DiscreteProfile minimize_profile(const Params& p, int n, int max_iter, const ProgressFn& progress) {
  validate(p);
  if (n < 64) throw InvalidArgument("minimize_profile needs n >= 64");
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  const NodeProblem pr = build_problem(p, n);
  const CriticalExponents ce = critical_exponents(p.dim);
  const int m = n - 1;

  std::vector<double> w(m);
  for (int i = 0; i < m; ++i) w[i] = std::cos(i * pr.h);
  pr.normalize(w);

  DiscreteProfile out;
  out.params = p;
  out.outside_theory = !(p.q > ce.q1 && !nearly_equal(p.q, ce.q1) && p.q < ce.q3 &&
                         !(ce.q3.is_finite() && nearly_equal(p.q, ce.q3.value())));
  out.theta_grid.resize(n);
  out.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    out.theta_grid[i] = i * pr.h;
    out.weight[i] = sin_pow(i * pr.h, p.dim);
  }
  out.theta_grid.back() = std::numbers::pi / 2.0;

  auto finish = [&](const std::vector<double>& x, double J, double res, int it) {
    out.values.assign(x.begin(), x.end());
    out.values.push_back(0.0);
    out.functional = J;
    out.lagrange_multiplier = J;
    out.constraint = pr.C(x);
    out.el_residual = res;
    out.iterations = it;
  };

  double step = 1.0;
  double armijo_step = 0.5;
  double R = pr.R(w);
  for (int it = 0; it <= max_iter; ++it) {
    const double J = pr.J(w);
    std::vector<double> wq(m);
    for (int i = 0; i < m; ++i) wq[i] = w[i] > 0.0 ? pr.mass[i] * std::pow(w[i], p.q) : 0.0;
    std::vector<double> r = pr.stiff.apply(w);
    for (int i = 0; i < m; ++i) r[i] -= p.ell * pr.mass[i] * w[i] + J * wq[i];
    const std::vector<double> Hr = pr.precond.solve(r);
    const std::vector<double> Hb = pr.precond.solve(wq);
    const double rr = dot(r, Hr);
    const double bb = J * J * dot(wq, Hb);
    const double res = std::sqrt(std::max(rr, 0.0)) / std::sqrt(std::max(bb, 1e-300));
    if (progress) progress({it, J, res});
    if (res < kElResidualTarget) {
      finish(w, J, res, it);
      if (!(J > 0.0)) throw NonConvergence("non-positive multiplier: the functional is not coercive here", out);
      return out;
    }
    if (it == max_iter) {
      finish(w, J, res, it);
      throw NonConvergence("Euler-Lagrange residual above target after max_iter iterations", out);
    }
    // Armijo backtracking on R along -H^{-1} r, projected and renormalized.
    // Once the predicted decrease drops below the rounding level of R the
    // test carries no information; the last Armijo step length is reused.
    const double noise = 64.0 * kEps * std::abs(R);
    const bool noise_regime = 2.0 * armijo_step * rr < noise;
    step = noise_regime ? armijo_step : std::min(1.0, 2.0 * armijo_step);
    bool moved = false;
    for (int k = 0; k < 60; ++k) {
      std::vector<double> cand(m);
      for (int i = 0; i < m; ++i) cand[i] = w[i] - step * Hr[i];
      pr.normalize(cand);
      const double Rc = pr.R(cand);
      const bool ok = noise_regime ? Rc <= R + noise : Rc <= R - 1e-4 * step * 2.0 * rr;
      if (std::isfinite(Rc) && ok) {
        w = std::move(cand);
        R = Rc;
        if (!noise_regime) armijo_step = step;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      finish(w, J, res, it);
      throw NonConvergence("line search stalled before the residual target was met", out);
    }
  }
  finish(w, pr.J(w), HUGE_VAL, max_iter);
  throw NonConvergence("iteration budget exhausted", out);
}

void write_csv(const DiscreteProfile& d, std::ostream& os) {
  os << "theta,v,v_theta\n";
  const auto v = d.rescaled();
  const std::size_t n = v.size();
  char buf[96];
  for (std::size_t i = 0; i < n; ++i) {
    double dv;
    if (i == 0)
      dv = (v[1] - v[0]) / (d.theta_grid[1] - d.theta_grid[0]);
    else if (i + 1 == n)
      dv = (v[n - 1] - v[n - 2]) / (d.theta_grid[n - 1] - d.theta_grid[n - 2]);
    else
      dv = (v[i + 1] - v[i - 1]) / (d.theta_grid[i + 1] - d.theta_grid[i - 1]);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", d.theta_grid[i], v[i], dv);
    os << buf;
  }
}

namespace {

// Smallest eigenvalue of the pencil (A, M) by shifted inverse iteration.
double smallest_eigenvalue(const Tridiag& A, const std::vector<double>& M) {
  const std::size_t n = M.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, A.diag[i] / M[i]);
  const double shift = -1e-6 * scale - 1e-12;
  Tridiag S = A;
  for (std::size_t i = 0; i < n; ++i) S.diag[i] -= shift * M[i];
  std::vector<double> x(n, 1.0);
  double lambda = HUGE_VAL;
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> Mx(n);
    for (std::size_t i = 0; i < n; ++i) Mx[i] = M[i] * x[i];
    x = S.solve(Mx);
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += M[i] * x[i] * x[i];
    nrm = std::sqrt(nrm);
    for (double& xi : x) xi /= nrm;
    const double next = dot(x, A.apply(x));
    if (std::abs(next - lambda) <= 1e-15 * std::max(std::abs(next), 1e-3)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::max(lambda, 0.0);
}

double cell_eigenvalue(int dim, double theta_c, int n, bool cos_weight) {
  const double h = theta_c / n;
  auto weight = [&](double t) { return (cos_weight ? std::cos(t) : 1.0) * sin_pow(t, dim); };
  Tridiag A;
  A.diag.assign(n, 0.0);
  A.off.assign(n - 1, 0.0);
  std::vector<double> M(n);
  for (int i = 0; i < n; ++i) M[i] = weight((i + 0.5) * h) * h;
  for (int k = 1; k < n; ++k) {
    const double c = weight(k * h) / h;
    A.diag[k - 1] += c;
    A.diag[k] += c;
    A.off[k - 1] = -c;
  }
  A.diag[n - 1] += std::max(weight(theta_c), 0.0) / (0.5 * h);
  return smallest_eigenvalue(A, M);
}

}  // namespace

LambdaEstimate lambda_cap(int dim, double theta_c, int n) {
  if (dim < 2) throw InvalidArgument("dimension must be >= 2");
  if (!(theta_c > 0.0) || theta_c > std::numbers::pi / 2.0 + 1e-15)
    throw InvalidArgument("theta_c must lie in (0, pi/2]");
  if (n < 64) throw InvalidArgument("lambda_cap needs n >= 64");
  return {dim, theta_c, cell_eigenvalue(dim, std::min(theta_c, std::numbers::pi / 2.0), n, true), n};
}

double dirichlet_eigenvalue_hemisphere(int dim, int n) {
  if (dim < 2) throw InvalidArgument("dimension must be >= 2");
  if (n < 64) throw InvalidArgument("grid needs n >= 64");
  return cell_eigenvalue(dim, std::numbers::pi / 2.0, n, false);
}

}  // namespace singprof
