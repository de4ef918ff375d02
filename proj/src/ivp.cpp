#include "singprof/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace singprof {

std::string to_string(IvpStatus s) {
  switch (s) {
    case IvpStatus::ReachedEnd: return "ReachedEnd";
    case IvpStatus::HitZero: return "HitZero";
    case IvpStatus::Diverged: return "Diverged";
  }
  return "Diverged";
}

PoleSeries PoleSeries::make(const Params& p, double alpha, double nonlinear_coeff) {
  PoleSeries s;
  s.alpha = alpha;
  const double n = p.dim;
  const double pw = std::pow(std::abs(alpha), p.q - 1.0);
  const double f = p.ell * alpha + nonlinear_coeff * pw * alpha;
  const double fp = p.ell + nonlinear_coeff * p.q * pw;
  s.a2 = -f / (2.0 * (n - 1.0));
  s.a4 = s.a2 * (2.0 * (n - 2.0) / 3.0 - fp) / (4.0 * (n + 1.0));
  return s;
}

double default_launch_theta(const PoleSeries& s) {
  double ts = 1e-3;
  if (s.a2 != 0.0 && s.alpha != 0.0) ts = std::min(ts, std::sqrt(1e-7 * std::abs(s.alpha) / std::abs(s.a2)));
  return ts;
}

double Trajectory::nonlinearity(double x) const {
  if (x == 0.0) return 0.0;
  return nonlinear_coeff * std::copysign(std::pow(std::abs(x), params.q), x);
}

const ode::DenseSegment<2>* Trajectory::segment_at(double theta) const {
  if (segments.empty()) return nullptr;
  auto it = std::lower_bound(segments.begin(), segments.end(), theta,
                             [](const ode::DenseSegment<2>& s, double t) { return s.t_end() < t; });
  if (it == segments.end()) return &segments.back();
  return &*it;
}

double Trajectory::value(double theta) const {
  if (segments.empty() || theta <= series.theta_s) return series.value(theta);
  return segment_at(theta)->value(theta)[0];
}

double Trajectory::slope(double theta) const {
  if (segments.empty() || theta <= series.theta_s) return series.slope(theta);
  return segment_at(theta)->value(theta)[1];
}

double Trajectory::curvature(double theta) const {
  if (segments.empty() || theta <= series.theta_s) return series.curvature(theta);
  return segment_at(theta)->derivative(theta)[1];
}

double Trajectory::ode_residual(double theta) const {
  const double x = value(theta);
  const double cot = std::cos(theta) / std::sin(theta);
  return curvature(theta) + (params.dim - 2.0) * cot * slope(theta) + params.ell * x + nonlinearity(x);
}

Trajectory integrate(const Params& p, double alpha, double theta_max, const IvpOptions& opt) {
  validate(p);
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be finite and >= 0");
  if (!(theta_max > 0.0) || theta_max > std::numbers::pi - 1e-3 + 1e-15)
    throw InvalidArgument("theta_max must lie in (0, pi - 1e-3]");
  if (!(opt.tol > 0.0) || !std::isfinite(opt.tol)) throw InvalidArgument("tolerance must be finite and > 0");

  Trajectory tr;
  tr.params = p;
  tr.alpha = alpha;
  tr.nonlinear_coeff = opt.nonlinear_coeff;
  tr.series = PoleSeries::make(p, alpha, opt.nonlinear_coeff);
  tr.theta_grid.push_back(0.0);
  tr.v.push_back(alpha);
  tr.v_theta.push_back(0.0);

  if (alpha == 0.0) {
    tr.theta_grid.push_back(theta_max);
    tr.v.push_back(0.0);
    tr.v_theta.push_back(0.0);
    return tr;
  }

  double ts = opt.launch_theta ? *opt.launch_theta : default_launch_theta(tr.series);
  ts = std::min(ts, 0.5 * theta_max);
  if (!(ts > 0.0)) throw InvalidArgument("launch angle must be > 0");
  tr.series.theta_s = ts;
  tr.theta_grid.push_back(ts);
  tr.v.push_back(tr.series.value(ts));
  tr.v_theta.push_back(tr.series.slope(ts));

  const double nm2 = p.dim - 2.0;
  const double ell = p.ell;
  auto rhs = [&](double t, const ode::State<2>& y) -> ode::State<2> {
    const double cot = std::cos(t) / std::sin(t);
    return {y[1], -nm2 * cot * y[1] - ell * y[0] - tr.nonlinearity(y[0])};
  };

  ode::Options o;
  o.rtol = 0.1 * opt.tol;
  o.atol = 0.1 * opt.tol;
  o.max_step_rel = 0.05;
  bool diverged = false;
  auto observer = [&](const ode::DenseSegment<2>& seg, const ode::State<2>& y) {
    const double v0 = seg.y_start[0];
    tr.segments.push_back(seg);
    if (!tr.first_zero && v0 > 0.0 && y[0] <= 0.0) {
      double lo = seg.t_start;
      double hi = seg.t_end();
      if (y[0] < 0.0) {
        while (true) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          if (seg.value(mid)[0] > 0.0)
            lo = mid;
          else
            hi = mid;
        }
      }
      tr.first_zero = hi;
      if (opt.stop_at_first_zero) {
        const auto z = seg.value(hi);
        tr.theta_grid.push_back(hi);
        tr.v.push_back(z[0]);
        tr.v_theta.push_back(z[1]);
        return false;
      }
    }
    if (!(std::abs(y[0]) <= kDivergenceBound) || !std::isfinite(y[1])) {
      diverged = true;
      tr.theta_grid.push_back(seg.t_end());
      tr.v.push_back(y[0]);
      tr.v_theta.push_back(y[1]);
      return false;
    }
    tr.theta_grid.push_back(seg.t_end());
    tr.v.push_back(y[0]);
    tr.v_theta.push_back(y[1]);
    return true;
  };

  const ode::State<2> y0{tr.series.value(ts), tr.series.slope(ts)};
  const auto res = ode::integrate<2>(rhs, ts, y0, theta_max, o, observer);

  if (diverged) {
    tr.status = IvpStatus::Diverged;
    tr.diagnostic = "|v| exceeded the divergence bound";
  } else if (res.outcome == ode::Outcome::StepTooSmall || res.outcome == ode::Outcome::NonFinite ||
             res.outcome == ode::Outcome::TooManySteps) {
    tr.status = IvpStatus::Diverged;
    tr.diagnostic = res.outcome == ode::Outcome::StepTooSmall ? "step size collapsed"
                    : res.outcome == ode::Outcome::NonFinite  ? "non-finite state"
                                                              : "step budget exhausted";
  } else {
    tr.status = tr.first_zero ? IvpStatus::HitZero : IvpStatus::ReachedEnd;
  }
  return tr;
}

ZeroResult first_zero_of(const Params& p, double alpha, double tol) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
  IvpOptions o;
  o.tol = tol;
  o.stop_at_first_zero = true;
  const Trajectory t = integrate(p, alpha, kThetaMaxDefault, o);
  ZeroResult z;
  if (t.status == IvpStatus::Diverged) {
    z.diverged = true;
    z.diagnostic = t.diagnostic;
    return z;
  }
  z.theta = t.first_zero;
  return z;
}

void write_csv(const Trajectory& t, std::ostream& os) {
  os << "theta,v,v_theta\n";
  char buf[96];
  for (std::size_t i = 0; i < t.theta_grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t.theta_grid[i], t.v[i], t.v_theta[i]);
    os << buf;
  }
}

}  // namespace singprof
