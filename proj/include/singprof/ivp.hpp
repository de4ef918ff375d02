#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "singprof/ode.hpp"
#include "singprof/params.hpp"

namespace singprof {

enum class IvpStatus { ReachedEnd, HitZero, Diverged };

std::string to_string(IvpStatus s);

inline constexpr double kThetaMaxDefault = 3.141592653589793 - 1e-3;
inline constexpr double kDivergenceBound = 1e12;

struct IvpOptions {
  double tol = 1e-10;
  bool stop_at_first_zero = false;
  // Multiplies |v|^{q-1} v. 0 turns the equation linear.
  double nonlinear_coeff = 1.0;
  // Overrides the automatic launch point of the pole series.
  std::optional<double> launch_theta;
};

// Even expansion v = alpha + a2 t^2 + a4 t^4 about the pole.
struct PoleSeries {
  double alpha = 0.0;
  double a2 = 0.0;
  double a4 = 0.0;
  double theta_s = 0.0;

  static PoleSeries make(const Params& p, double alpha, double nonlinear_coeff);
  double value(double t) const { return alpha + t * t * (a2 + a4 * t * t); }
  double slope(double t) const { return t * (2.0 * a2 + 4.0 * a4 * t * t); }
  double curvature(double t) const { return 2.0 * a2 + 12.0 * a4 * t * t; }
};

// Default launch angle: 1e-3, pulled in when the quadratic term would exceed
// 1e-7 of alpha there.
double default_launch_theta(const PoleSeries& s);

class Trajectory {
 public:
  Params params;
  double alpha = 0.0;
  double nonlinear_coeff = 1.0;
  std::vector<double> theta_grid;
  std::vector<double> v;
  std::vector<double> v_theta;
  std::optional<double> first_zero;
  IvpStatus status = IvpStatus::ReachedEnd;
  std::string diagnostic;
  PoleSeries series;
  std::vector<ode::DenseSegment<2>> segments;

  double launch_theta() const { return series.theta_s; }
  double theta_end() const { return theta_grid.back(); }

  // Continuous solution; the pole series below the launch point, dense
  // output above it. Slightly past theta_end the last segment extrapolates.
  double value(double theta) const;
  double slope(double theta) const;
  // Derivative of the dense v_theta component, not the ODE right-hand side.
  double curvature(double theta) const;

  double nonlinearity(double x) const;
  // v'' + (N-2) cot(t) v' + ell v + |v|^{q-1} v
  double ode_residual(double theta) const;

  const ode::DenseSegment<2>* segment_at(double theta) const;
};

Trajectory integrate(const Params& p, double alpha, double theta_max = kThetaMaxDefault,
                     const IvpOptions& opt = {});

struct ZeroResult {
  std::optional<double> theta;
  bool diverged = false;
  std::string diagnostic;
};

ZeroResult first_zero_of(const Params& p, double alpha, double tol = 1e-10);

void write_csv(const Trajectory& t, std::ostream& os);

}  // namespace singprof
