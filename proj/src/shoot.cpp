#include "singprof/shoot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "singprof/parallel.hpp"
#include "singprof/quadrature.hpp"

namespace singprof {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

double shooting_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidArgument("tolerance must be finite and > 0");
  return std::max(tol * 1e-2, 1e-13);
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw InvalidArgument("geometric grid needs 0 < lo < hi, n >= 2");
  std::vector<double> g(n);
  const double r = std::log(hi / lo);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(r * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

ScanPoint shooting_function(const Params& p, double alpha, double tol) {
  const ZeroResult z = first_zero_of(p, alpha, shooting_tolerance(tol));
  ScanPoint s;
  s.alpha = alpha;
  s.first_zero = z.theta;
  s.diverged = z.diverged;
  s.F = z.theta ? *z.theta - kHalfPi : 1.0;
  return s;
}

std::vector<ScanPoint> scan_alpha(const Params& p, const std::vector<double>& alphas, double tol,
                                  unsigned threads) {
  std::vector<ScanPoint> out(alphas.size());
  parallel_for(alphas.size(), threads, [&](std::size_t i) { out[i] = shooting_function(p, alphas[i], tol); });
  return out;
}

std::vector<Bracket> sign_change_brackets(const std::vector<ScanPoint>& scan) {
  std::vector<Bracket> b;
  for (std::size_t i = 0; i + 1 < scan.size(); ++i)
    if (scan[i].negative() != scan[i + 1].negative()) b.push_back({scan[i].alpha, scan[i + 1].alpha});
  return b;
}

ProfileSolution profile_at(const Params& p, double alpha, double tol) {
  IvpOptions o;
  o.tol = shooting_tolerance(tol);
  o.stop_at_first_zero = true;
  ProfileSolution s;
  s.params = p;
  s.alpha_star = alpha;
  s.tol = tol;
  s.trajectory = integrate(p, alpha, kHalfPi + 1e-6, o);
  const Trajectory& t = s.trajectory;
  if (t.first_zero) {
    s.boundary_slope = t.v_theta.back();
    s.bc_residual = std::abs(*t.first_zero - kHalfPi);
  } else {
    s.boundary_slope = t.slope(kHalfPi);
    s.bc_residual = std::numeric_limits<double>::infinity();
  }
  const double end = t.theta_end();
  double r = 0.0;
  if (alpha != 0.0) {
    r = std::abs(t.ode_residual(0.5 * t.launch_theta()));
    for (const auto& seg : t.segments) {
      for (double x : {1.0 / 3.0, 2.0 / 3.0}) {
        const double th = seg.t_start + x * seg.h;
        if (th < end) r = std::max(r, std::abs(t.ode_residual(th)));
      }
    }
  }
  s.ode_residual_max = r;
  return s;
}

ProfileSolution solve_profile(const Params& p, double tol, const ShootOptions& opt) {
  validate(p);
  const std::vector<double> grid = geometric_grid(opt.alpha_lo, opt.alpha_hi, opt.n_scan);

  std::vector<ScanPoint> scan;
  std::vector<Bracket> brackets;
  if (opt.window) {
    std::vector<double> sub;
    for (double a : grid)
      if (a >= opt.window->lo && a <= opt.window->hi) sub.push_back(a);
    if (sub.size() >= 2) {
      scan = scan_alpha(p, sub, tol, opt.threads);
      brackets = sign_change_brackets(scan);
    }
    if (brackets.size() != 1) brackets.clear();
  }
  if (brackets.empty()) {
    scan = scan_alpha(p, grid, tol, opt.threads);
    brackets = sign_change_brackets(scan);
  }
  if (brackets.empty())
    throw NoRootError("no sign change of the shooting function on the alpha grid", scan);
  if (brackets.size() > 1)
    throw MultipleRootsError("shooting function changes sign on several disjoint brackets", brackets);

  double lo = brackets[0].lo;
  double hi = brackets[0].hi;
  ScanPoint f_lo = shooting_function(p, lo, tol);
  ScanPoint f_hi = shooting_function(p, hi, tol);
  while (hi / lo - 1.0 > opt.alpha_rel_tol) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    const ScanPoint fm = shooting_function(p, mid, tol);
    if (fm.negative() == f_lo.negative()) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
      f_hi = fm;
    }
  }
  auto quality = [](const ScanPoint& s) { return s.first_zero ? std::abs(s.F) : HUGE_VAL; };
  const double alpha = quality(f_lo) <= quality(f_hi) ? lo : hi;

  ProfileSolution sol = profile_at(p, alpha, tol);
  sol.bracket = {lo, hi};
  sol.scanned_points = static_cast<int>(scan.size());
  return sol;
}

int count_bvp_roots(const Params& p, double alpha_lo, double alpha_hi, int n_scan, double tol,
                    unsigned threads) {
  validate(p);
  const auto scan = scan_alpha(p, geometric_grid(alpha_lo, alpha_hi, n_scan), tol, threads);
  return static_cast<int>(sign_change_brackets(scan).size());
}

double half_period_2d(double q, double ell, double m) {
  if (!(q > 1.0)) throw InvalidArgument("q must be > 1");
  if (!(m > 0.0)) throw InvalidArgument("m must be > 0");
  bool unreachable = false;
  const double k = 0.5 * (q + 1.0);
  const double mq1 = std::pow(m, q + 1.0);
  auto integrand = [&](double psi) {
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    const double c2 = c * c;
    // (1 - sin^{q+1}) / cos^2, smooth through psi = pi/2
    double ratio;
    if (c2 == 0.0) {
      ratio = k;
    } else {
      const double log_s2 = c2 < 0.5 ? std::log1p(-c2) : std::log(s * s);
      ratio = -std::expm1(k * log_s2) / c2;
    }
    const double g = ell * m * m + 2.0 * mq1 * ratio / (q + 1.0);
    if (!(g > 0.0)) {
      unreachable = true;
      return 0.0;
    }
    return m / std::sqrt(g);
  };
  const double val = quad::adaptive(integrand, 0.0, kHalfPi, 1e-16, 1e-15, 20, 30);
  if (unreachable) return std::numeric_limits<double>::infinity();
  return val;
}

double quadrature_oracle_2d(double q, double ell) {
  const auto grid = geometric_grid(1e-6, 1e6, 241);
  std::vector<ScanPoint> table;
  table.reserve(grid.size());
  for (double m : grid) {
    ScanPoint s;
    s.alpha = m;
    s.F = half_period_2d(q, ell, m) - kHalfPi;
    table.push_back(s);
  }
  std::size_t i = 0;
  while (i + 1 < table.size() && table[i].negative() == table[i + 1].negative()) ++i;
  if (i + 1 >= table.size())
    throw NoRootError("half period never crosses pi/2 for m in [1e-6, 1e6]", table);
  double lo = table[i].alpha;
  double hi = table[i + 1].alpha;
  const bool lo_negative = table[i].negative();
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    const bool neg = half_period_2d(q, ell, mid) - kHalfPi <= 0.0;
    if (neg == lo_negative)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo * hi);
}

double eval_separable(const ProfileSolution& sol, const std::vector<double>& x) {
  const std::size_t n = static_cast<std::size_t>(sol.params.dim);
  if (x.size() != n) throw InvalidArgument("point dimension does not match N");
  const double xn = x.back();
  if (xn < 0.0) throw InvalidArgument("point must lie in the closed upper half-space");
  double tangential2 = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) tangential2 += x[i] * x[i];
  const double r = std::sqrt(tangential2 + xn * xn);
  if (r == 0.0) throw SingularPointError("u is singular at the origin");
  if (xn == 0.0) return 0.0;
  const double theta = std::atan2(std::sqrt(tangential2), xn);
  return std::pow(r, -2.0 / (sol.params.q - 1.0)) * sol.trajectory.value(theta);
}

PhasePlaneCurve phase_plane_curve(const Trajectory& t, int samples) {
  PhasePlaneCurve c;
  const double end = t.theta_end();
  for (int i = samples; i >= 0; --i) {
    const double th = end * i / samples;
    c.xi_grid.push_back(i == samples && t.first_zero ? 0.0 : t.value(th));
    c.V.push_back(i == 0 ? 0.0 : t.slope(th));
  }
  return c;
}

int intersection_count(const Trajectory& t1, const Trajectory& t2, int samples) {
  const double end = std::min(t1.theta_end(), t2.theta_end());
  int count = 0;
  int last = 0;
  for (int i = 1; i < samples; ++i) {
    const double th = end * i / samples;
    const double d = t1.value(th) - t2.value(th);
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s != 0) {
      if (last != 0 && s != last) ++count;
      last = s;
    }
  }
  return count;
}

}  // namespace singprof
