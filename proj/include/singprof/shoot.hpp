#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "singprof/ivp.hpp"
#include "singprof/params.hpp"

namespace singprof {

struct ScanPoint {
  double alpha = 0.0;
  std::optional<double> first_zero;
  bool diverged = false;
  double F = 1.0;  // first_zero - pi/2, or +1 when there is no zero

  bool negative() const { return F <= 0.0; }
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct NoRootError : std::runtime_error {
  NoRootError(const std::string& what, std::vector<ScanPoint> table)
      : std::runtime_error(what), scan(std::move(table)) {}
  std::vector<ScanPoint> scan;
};

struct MultipleRootsError : std::runtime_error {
  MultipleRootsError(const std::string& what, std::vector<Bracket> b)
      : std::runtime_error(what), brackets(std::move(b)) {}
  std::vector<Bracket> brackets;
};

struct ShootOptions {
  double alpha_lo = 1e-4;
  double alpha_hi = 1e4;
  int n_scan = 400;
  double alpha_rel_tol = 1e-12;
  // Restrict the scan to grid points inside this interval; the full grid is
  // used when the window holds no sign change.
  std::optional<Bracket> window;
  unsigned threads = 0;  // 0: default_threads()
};

// Integration tolerance used internally for a requested profile tolerance.
double shooting_tolerance(double tol);

// Geometric grid of n points from lo to hi.
std::vector<double> geometric_grid(double lo, double hi, int n);

ScanPoint shooting_function(const Params& p, double alpha, double tol);

std::vector<ScanPoint> scan_alpha(const Params& p, const std::vector<double>& alphas, double tol,
                                  unsigned threads = 0);

std::vector<Bracket> sign_change_brackets(const std::vector<ScanPoint>& scan);

struct ProfileSolution {
  Params params;
  double alpha_star = 0.0;
  Trajectory trajectory;
  double boundary_slope = 0.0;
  double ode_residual_max = 0.0;
  double bc_residual = 0.0;
  double tol = 1e-10;
  Bracket bracket;
  int scanned_points = 0;
};

ProfileSolution solve_profile(const Params& p, double tol = 1e-10, const ShootOptions& opt = {});

// Profile for a known alpha (no shooting).
ProfileSolution profile_at(const Params& p, double alpha, double tol = 1e-10);

int count_bvp_roots(const Params& p, double alpha_lo, double alpha_hi, int n_scan, double tol = 1e-10,
                    unsigned threads = 0);

// N = 2: time to travel from v = m down to v = 0 along the conserved energy
// level, computed with the substitution xi = m sin(psi). +inf when the level
// set does not reach zero.
double half_period_2d(double q, double ell, double m);

// Pole value m with half_period_2d(q, ell, m) = pi/2, searched on [1e-6, 1e6].
double quadrature_oracle_2d(double q, double ell);

struct SingularPointError : std::domain_error {
  using std::domain_error::domain_error;
};

// u(x) = |x|^{-2/(q-1)} omega(theta), theta = arccos(x_N/|x|).
double eval_separable(const ProfileSolution& sol, const std::vector<double>& x);

struct PhasePlaneCurve {
  std::vector<double> xi_grid;  // ascending, from 0 to v(0)
  std::vector<double> V;        // v_theta at v^{-1}(xi)
};

PhasePlaneCurve phase_plane_curve(const Trajectory& t, int samples = 400);

// Sign changes of v1 - v2 on (0, min end) sampled uniformly.
int intersection_count(const Trajectory& t1, const Trajectory& t2, int samples = 2000);

}  // namespace singprof
