#include "singprof/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "singprof/quadrature.hpp"

namespace singprof {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double domain_end(const Trajectory& t) { return t.first_zero ? *t.first_zero : kHalfPi; }

double signed_pow(double x, double p) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), p), x);
}

}  // namespace

double sphere_area(int k) {
  if (k < 0) throw InvalidArgument("sphere dimension must be >= 0");
  const double h = 0.5 * (k + 1.0);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double half_sphere_integral(int dim, double end, const std::function<double(double)>& f,
                            const QuadratureSpec& qs) {
  const double nm2 = dim - 2.0;
  auto g = [&](double t) { return f(t) * (dim == 2 ? 1.0 : std::pow(std::sin(t), nm2)); };
  return sphere_area(dim - 2) * quad::composite(g, 0.0, end, qs.panels, qs.nodes);
}

PohozaevCoefficients pohozaev_coefficients(int dim, double q, double ell) {
  const double n = dim;
  return {(n - 3.0) / 2.0 - (n - 1.0) / (q + 1.0), -(n - 1.0) / 2.0 * (ell * (q - 1.0) + n - 1.0) / (q + 1.0)};
}

PohozaevReport pohozaev(const ProfileSolution& sol, const QuadratureSpec& qs) {
  const Params& p = sol.params;
  const Trajectory& t = sol.trajectory;
  const double end = domain_end(t);
  const auto c = pohozaev_coefficients(p.dim, p.q, p.ell);
  const double grad = half_sphere_integral(
      p.dim, end, [&](double th) { return t.slope(th) * t.slope(th) * std::cos(th); }, qs);
  const double mass = half_sphere_integral(
      p.dim, end, [&](double th) { return t.value(th) * t.value(th) * std::cos(th); }, qs);
  PohozaevReport r;
  r.grad_term = c.grad * grad;
  r.mass_term = c.mass * mass;
  // <grad phi, nu> = -1 on the equator, sin(pi/2)^{N-2} = 1
  r.boundary_term = -0.5 * sphere_area(p.dim - 2) * sol.boundary_slope * sol.boundary_slope;
  r.residual = r.grad_term + r.mass_term - r.boundary_term;
  r.relative_residual = std::abs(r.residual) / std::max({std::abs(r.grad_term), std::abs(r.mass_term),
                                                          std::abs(r.boundary_term), 1e-30});
  return r;
}

Identity91Report identity_91(const ProfileSolution& sol, const QuadratureSpec& qs) {
  const Params& p = sol.params;
  if (!ell_is_separable(p)) throw NotApplicable("the integral identity holds only for ell = ell_{N,q}");
  const Trajectory& t = sol.trajectory;
  const double end = domain_end(t);
  Identity91Report r;
  r.coefficient = p.dim - 1.0 - p.ell;
  r.lhs = r.coefficient * half_sphere_integral(p.dim, end, [&](double th) { return t.value(th) * std::cos(th); }, qs);
  r.rhs = half_sphere_integral(
      p.dim, end, [&](double th) { return signed_pow(t.value(th), p.q) * std::cos(th); }, qs);
  r.relative_residual = std::abs(r.lhs - r.rhs) / std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-30});
  return r;
}

EnergyFunctions::EnergyFunctions(int dim_, double q_, double ell_) : dim(dim_), q(q_), ell(ell_) {
  a_exp = 2.0 * (dim - 2.0) / (q + 3.0);
  b_exp = a_exp * (q - 1.0);
}

double EnergyFunctions::G(double t) const {
  const double s = std::sin(t);
  const double A = a_exp * (dim - 2.0 - a_exp) + ell;
  const double B = a_exp * (a_exp + 3.0 - dim);
  return (A * s * s + B) * std::pow(s, b_exp - 2.0);
}

double EnergyFunctions::G_theta(double t) const {
  const double s = std::sin(t);
  const double A = a_exp * (dim - 2.0 - a_exp) + ell;
  const double B = a_exp * (a_exp + 3.0 - dim);
  return (A * b_exp * s * s + B * (b_exp - 2.0)) * std::pow(s, b_exp - 3.0) * std::cos(t);
}

double EnergyFunctions::w(const Trajectory& tr, double t) const {
  return std::pow(std::sin(t), a_exp) * tr.value(t);
}

double EnergyFunctions::w_theta(const Trajectory& tr, double t) const {
  const double s = std::sin(t);
  return a_exp * std::pow(s, a_exp - 1.0) * std::cos(t) * tr.value(t) + std::pow(s, a_exp) * tr.slope(t);
}

double EnergyFunctions::E(const Trajectory& tr, double t) const {
  const double wt = w_theta(tr, t);
  const double wv = w(tr, t);
  return std::pow(std::sin(t), b_exp) * wt * wt / 2.0 + G(t) * wv * wv / 2.0 +
         std::pow(std::abs(wv), q + 1.0) / (q + 1.0);
}

EnergyTrace energy_trace(const ProfileSolution& sol, const QuadratureSpec& qs) {
  const Params& p = sol.params;
  const Trajectory& t = sol.trajectory;
  const EnergyFunctions ef(p.dim, p.q, p.ell);
  EnergyTrace tr;
  tr.alpha_exp = ef.a_exp;
  tr.beta_exp = ef.b_exp;

  const double end = domain_end(t);
  // Geometric panels off the pole, where E may be unbounded, then uniform ones.
  std::vector<double> edges{kEnergyThetaLow};
  const double uniform_start = std::min(0.1, 0.5 * end);
  while (edges.back() * 2.0 < uniform_start) edges.push_back(edges.back() * 2.0);
  for (int k = 0; k <= qs.panels; ++k) {
    const double e = uniform_start + (end - uniform_start) * k / qs.panels;
    if (e > edges.back()) edges.push_back(e);
  }
  edges.back() = end;

  auto dE = [&](double th) {
    const double wv = ef.w(t, th);
    return ef.G_theta(th) * wv * wv / 2.0;
  };
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double th = edges[k];
    tr.theta_grid.push_back(th);
    tr.w.push_back(ef.w(t, th));
    tr.E.push_back(ef.E(t, th));
    tr.G.push_back(ef.G(th));
    if (k > 0) {
      const double integral = quad::fixed(dE, edges[k - 1], th, qs.nodes);
      const double r = std::abs(tr.E[k] - tr.E[k - 1] - integral);
      tr.identity_residual_max = std::max(tr.identity_residual_max, r);
    }
  }
  const double e_end = ef.E(t, kHalfPi);
  tr.endpoint_energy_residual = std::abs(e_end - sol.boundary_slope * sol.boundary_slope / 2.0);
  return tr;
}

double wronskian_rhs(const Trajectory& t1, const Trajectory& t2, double theta) {
  const double v1 = t1.value(theta);
  const double v2 = t2.value(theta);
  const double J = v1 * t2.slope(theta) - v2 * t1.slope(theta);
  const double q = t1.params.q;
  const double cot = std::cos(theta) / std::sin(theta);
  return -(t1.params.dim - 2.0) * cot * J +
         v1 * v2 * (signed_pow(v1, q - 1.0) - signed_pow(v2, q - 1.0));
}

WronskianResult wronskian_J(const Trajectory& t1, const Trajectory& t2, const std::vector<double>& grid) {
  if (!(t1.params == t2.params)) throw InvalidArgument("trajectories use different parameters");
  if (t1.alpha < t2.alpha) throw InvalidArgument("expected t1.alpha >= t2.alpha");
  const double end = std::min(t1.theta_end(), t2.theta_end());
  WronskianResult r;
  const int n = t1.params.dim;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double th = grid[i];
    if (th < 0.0 || th > end || (i > 0 && th <= grid[i - 1]))
      throw InvalidArgument("Wronskian grid must be increasing and inside both trajectories");
    const double J = t1.value(th) * t2.slope(th) - t2.value(th) * t1.slope(th);
    r.theta.push_back(th);
    r.J.push_back(J);
    r.weighted.push_back(n == 2 ? J : std::pow(std::sin(th), n - 2.0) * J);
    r.J_theta.push_back(t1.value(th) * t2.curvature(th) - t2.value(th) * t1.curvature(th));
  }
  return r;
}

WronskianResult wronskian_J(const Trajectory& t1, const Trajectory& t2) {
  if (t1.theta_grid != t2.theta_grid) throw InvalidArgument("trajectories are stored on different grids");
  return wronskian_J(t1, t2, t1.theta_grid);
}

double phase_plane_check(const Trajectory& t, const Params& p, int samples) {
  if (p.dim != 2) throw NotApplicable("the phase-plane law is stated for N = 2");
  if (t.alpha == 0.0) return 0.0;
  const double end = domain_end(t);
  const double q = p.q;
  auto level = [&](double xi) { return p.ell * xi * xi + 2.0 * std::pow(std::abs(xi), q + 1.0) / (q + 1.0); };
  const double top = t.first_zero ? t.v_theta.back() * t.v_theta.back() : level(t.alpha);
  double worst = 0.0;
  double prev = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double th = end * i / samples;
    const double V = t.slope(th);
    if (i > 0 && V > 0.0)
      throw NonMonotoneError("profile is not decreasing on the checked range", prev, th);
    const double xi = t.value(th);
    worst = std::max(worst, std::abs(V * V - (top - level(xi))));
    prev = th;
  }
  return worst;
}

ZTransformResult z_transform_check(const Trajectory& t, const Params& p) {
  if (p.dim != 3) throw NotApplicable("the z transform applies to N = 3");
  ZTransformResult r;
  if (t.alpha == 0.0) return r;
  const double end = domain_end(t);
  const double q = p.q;
  auto check = [&](double th) {
    const double s = std::sin(th);
    const double c = std::cos(th);
    const double v = t.value(th);
    const double rs = std::sqrt(s);
    const double z = rs * v;
    const double zpp = -0.25 * c * c * v / (s * rs) - 0.5 * rs * v + c * t.slope(th) / rs + rs * t.curvature(th);
    const double res = zpp + (p.ell + 0.25 + 0.25 / (s * s)) * z + signed_pow(z, q) / std::pow(s, 0.5 * (q - 1.0));
    r.residual_max = std::max(r.residual_max, std::abs(res));
    const double scale = std::abs(z) + 1.0;
    if (p.ell >= -0.25 && v > 0.0 && zpp > 1e-8 * scale) r.concave = false;
  };
  for (const auto& seg : t.segments) {
    for (double x : {1.0 / 3.0, 2.0 / 3.0}) {
      const double th = seg.t_start + x * seg.h;
      if (th < end) check(th);
    }
  }
  return r;
}

InvariantReport evaluate_invariants(const ProfileSolution& sol, const QuadratureSpec& qs) {
  InvariantReport r;
  r.pohozaev = pohozaev(sol, qs);
  if (ell_is_separable(sol.params)) r.identity91 = identity_91(sol, qs);
  const EnergyTrace e = energy_trace(sol, qs);
  r.energy_alpha_exp = e.alpha_exp;
  r.energy_beta_exp = e.beta_exp;
  r.energy_identity_residual_max = e.identity_residual_max;
  r.endpoint_energy_residual = e.endpoint_energy_residual;
  if (sol.params.dim == 2) r.phase_plane_residual_max = phase_plane_check(sol.trajectory, sol.params);
  if (sol.params.dim == 3) {
    const auto z = z_transform_check(sol.trajectory, sol.params);
    r.z_transform_residual_max = z.residual_max;
    r.z_concave = z.concave;
  }
  return r;
}

}  // namespace singprof
