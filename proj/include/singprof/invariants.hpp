#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "singprof/ivp.hpp"
#include "singprof/shoot.hpp"

namespace singprof {

// |S^k| = 2 pi^{(k+1)/2} / Gamma((k+1)/2); |S^0| = 2.
double sphere_area(int k);

struct QuadratureSpec {
  int panels = 16;
  int nodes = 64;
};

// Weighted integral over the half-sphere of an axially symmetric integrand:
// |S^{N-2}| int_0^end f(t) sin^{N-2}(t) dt.
double half_sphere_integral(int dim, double end, const std::function<double(double)>& f,
                            const QuadratureSpec& qs = {});

struct PohozaevCoefficients {
  double grad = 0.0;  // (N-3)/2 - (N-1)/(q+1)
  double mass = 0.0;  // -(N-1)/2 * (ell(q-1) + N-1)/(q+1)
};

PohozaevCoefficients pohozaev_coefficients(int dim, double q, double ell);

struct PohozaevReport {
  double grad_term = 0.0;
  double mass_term = 0.0;
  double boundary_term = 0.0;
  double residual = 0.0;
  double relative_residual = 0.0;
};

PohozaevReport pohozaev(const ProfileSolution& sol, const QuadratureSpec& qs = {});

struct Identity91Report {
  double coefficient = 0.0;  // N - 1 - ell
  double lhs = 0.0;          // coefficient * int omega phi
  double rhs = 0.0;          // int omega^q phi
  double relative_residual = 0.0;
};

// Requires ell = ell_{N,q}.
Identity91Report identity_91(const ProfileSolution& sol, const QuadratureSpec& qs = {});

struct EnergyTrace {
  double alpha_exp = 0.0;
  double beta_exp = 0.0;
  std::vector<double> theta_grid;  // panel edges
  std::vector<double> w;
  std::vector<double> E;
  std::vector<double> G;
  double identity_residual_max = 0.0;
  double endpoint_energy_residual = 0.0;
};

struct EnergyFunctions {
  int dim;
  double q;
  double ell;
  double a_exp;
  double b_exp;

  EnergyFunctions(int dim, double q, double ell);
  double G(double t) const;
  double G_theta(double t) const;
  double w(const Trajectory& tr, double t) const;
  double w_theta(const Trajectory& tr, double t) const;
  double E(const Trajectory& tr, double t) const;
};

inline constexpr double kEnergyThetaLow = 1e-3;

EnergyTrace energy_trace(const ProfileSolution& sol, const QuadratureSpec& qs = {});

struct WronskianResult {
  std::vector<double> theta;
  std::vector<double> J;           // v1 v2' - v2 v1'
  std::vector<double> weighted;    // sin^{N-2} J
  std::vector<double> J_theta;     // from dense second derivatives
};

// Sampled on the common stored grid (t1 and t2 must share it).
WronskianResult wronskian_J(const Trajectory& t1, const Trajectory& t2);
// Sampled on a caller-supplied grid inside both trajectories.
WronskianResult wronskian_J(const Trajectory& t1, const Trajectory& t2, const std::vector<double>& grid);

// Right-hand side of the Wronskian equation: -(N-2) cot J + v1 v2 (v1^{q-1} - v2^{q-1}).
double wronskian_rhs(const Trajectory& t1, const Trajectory& t2, double theta);

struct NonMonotoneError : std::runtime_error {
  NonMonotoneError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), interval_lo(lo), interval_hi(hi) {}
  double interval_lo;
  double interval_hi;
};

// N = 2 only. Max deviation of V^2 from its integrated phase-plane law.
double phase_plane_check(const Trajectory& t, const Params& p, int samples = 2000);

struct ZTransformResult {
  double residual_max = 0.0;
  bool concave = true;
};

// N = 3 only.
ZTransformResult z_transform_check(const Trajectory& t, const Params& p);

struct InvariantReport {
  PohozaevReport pohozaev;
  std::optional<Identity91Report> identity91;
  double energy_alpha_exp = 0.0;
  double energy_beta_exp = 0.0;
  double energy_identity_residual_max = 0.0;
  double endpoint_energy_residual = 0.0;
  std::optional<double> phase_plane_residual_max;
  std::optional<double> z_transform_residual_max;
  std::optional<bool> z_concave;
};

InvariantReport evaluate_invariants(const ProfileSolution& sol, const QuadratureSpec& qs = {});

}  // namespace singprof
