#include "singprof/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace singprof::quad {

namespace {

Rule build_rule(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double fixed(const Fn& f, double a, double b, int n_nodes) {
  const Rule& r = gauss_legendre(n_nodes);
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n_nodes; ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
  return s * h;
}

double composite(const Fn& f, double a, double b, int panels, int n_nodes) {
  if (panels < 1) throw std::invalid_argument("composite rule needs >= 1 panel");
  double s = 0.0;
  const double w = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * w;
    const double hi = (k + 1 == panels) ? b : a + (k + 1) * w;
    s += fixed(f, lo, hi, n_nodes);
  }
  return s;
}

double over_edges(const Fn& f, const std::vector<double>& edges, int n_nodes) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) s += fixed(f, edges[k], edges[k + 1], n_nodes);
  return s;
}

std::vector<double> graded_edges(double a, double b, int uniform_panels, bool grade_left, bool grade_right,
                                 int levels) {
  const double w = (b - a) / uniform_panels;
  std::vector<double> edges;
  if (grade_left) {
    for (int k = levels; k >= 1; --k) edges.push_back(a + w * std::ldexp(1.0, -k));
  }
  edges.insert(edges.begin(), a);
  for (int k = 1; k < uniform_panels; ++k) edges.push_back(a + k * w);
  if (grade_right) {
    for (int k = 1; k <= levels; ++k) edges.push_back(b - w * std::ldexp(1.0, -k));
    std::sort(edges.begin(), edges.end());
  }
  edges.push_back(b);
  return edges;
}

namespace {

double adaptive_step(const Fn& f, double a, double b, double whole, double abs_tol, double rel_tol, int n,
                     int depth) {
  const double m = 0.5 * (a + b);
  const double left = fixed(f, a, m, n);
  const double right = fixed(f, m, b, n);
  const double both = left + right;
  if (depth <= 0 || std::abs(both - whole) <= std::max(abs_tol, rel_tol * std::abs(both))) return both;
  return adaptive_step(f, a, m, left, 0.5 * abs_tol, rel_tol, n, depth - 1) +
         adaptive_step(f, m, b, right, 0.5 * abs_tol, rel_tol, n, depth - 1);
}

}  // namespace

double adaptive(const Fn& f, double a, double b, double abs_tol, double rel_tol, int n_nodes, int max_depth) {
  return adaptive_step(f, a, b, fixed(f, a, b, n_nodes), abs_tol, rel_tol, n_nodes, max_depth);
}

}  // namespace singprof::quad
