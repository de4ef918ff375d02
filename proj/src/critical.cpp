#include "singprof/critical.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "singprof/invariants.hpp"
#include "singprof/ode.hpp"
#include "singprof/params.hpp"
#include "singprof/quadrature.hpp"

namespace singprof {

double kappa_from_theta(int dim, double theta_const) {
  if (!(theta_const > 0.0)) throw InvalidArgument("theta constant must be > 0");
  return std::pow(dim * (dim - 1.0) / (2.0 * theta_const), 0.5 * (dim - 1.0));
}

KappaResult kappa(int dim, int n_quad) {
  if (dim < 2) throw InvalidArgument("dimension must be >= 2");
  if (n_quad < 2) throw InvalidArgument("n_quad must be >= 2");
  KappaResult r;
  r.dim = dim;
  r.q1 = critical_exponents(dim).q1;
  const double p = r.q1 + 1.0;
  auto f = [&](double t) {
    return std::pow(std::cos(t), p) * (dim == 2 ? 1.0 : std::pow(std::sin(t), dim - 2.0));
  };
  const auto edges = quad::graded_edges(0.0, std::numbers::pi / 2.0, 8, false, true);
  r.theta_const = sphere_area(dim - 2) * quad::over_edges(f, edges, n_quad);
  r.kappa = kappa_from_theta(dim, r.theta_const);
  return r;
}

double eval_critical_profile(int dim, double kappa_value, const std::vector<double>& x) {
  if (x.size() != static_cast<std::size_t>(dim)) throw InvalidArgument("point dimension does not match N");
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double r = std::sqrt(r2);
  if (r == 0.0) throw std::domain_error("the critical profile is singular at the origin");
  if (r >= 1.0) throw std::domain_error("log(1/|x|) requires |x| < 1");
  if (x.back() < 0.0) throw InvalidArgument("point must lie in the closed upper half-space");
  const double n1 = dim - 1.0;
  return kappa_value * (x.back() / r) * std::pow(r, -n1) * std::pow(std::log(1.0 / r), -0.5 * n1);
}

namespace {

AsymptoticFit fit_log(const std::vector<ode::DenseSegment<2>>& segs, double t0, double t1, int samples) {
  if (samples < 4) throw DegenerateFit("need at least 4 samples for a 4-term fit");
  Eigen::MatrixXd A(samples, 4);
  Eigen::VectorXd L(samples);
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (samples - 1);
    auto it = std::find_if(segs.begin(), segs.end(), [&](const auto& s) { return s.contains(t); });
    if (it == segs.end()) --it;
    A(i, 0) = 1.0;
    A(i, 1) = t;
    A(i, 2) = std::log(t);
    A(i, 3) = 1.0 / t;
    L(i) = it->value(t)[1];
  }
  Eigen::VectorXd scale = A.colwise().norm();
  for (int j = 0; j < 4; ++j) A.col(j) /= scale(j);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < 4) throw DegenerateFit("log-linear basis is collinear on the sampled interval");
  Eigen::VectorXd c = qr.solve(L);
  AsymptoticFit f;
  f.rate = c(1) / scale(1);
  f.power = c(2) / scale(2);
  return f;
}

}  // namespace

Lemma23Result check_lemma_2_3(const LinearODESpec& s, double t0, double t1, int samples) {
  if (s.a == 0.0) throw InvalidArgument("a must be nonzero");
  if (!(t0 > 0.0) || !(t1 > t0)) throw InvalidArgument("need 0 < t0 < t1");
  // Riccati form: r = y'/y, L = log y.
  auto rhs = [&](double t, const ode::State<2>& y) -> ode::State<2> {
    const double r = y[0];
    return {-r * r - (s.a - s.a1 / t) * r - (s.b - s.b1 / t) / t, r};
  };
  ode::Options o;
  o.rtol = 1e-12;
  o.atol = 1e-14;

  const double p1 = s.a1 + s.b / s.a;
  const double p2 = -s.b / s.a;

  std::vector<ode::DenseSegment<2>> rec;
  ode::integrate<2>(rhs, t1, {p1 / t1 - s.a, 0.0}, t0, o, [&](const auto& seg, const auto&) {
    rec.push_back(seg);
    return true;
  });
  std::vector<ode::DenseSegment<2>> dom;
  ode::integrate<2>(rhs, t0, {p2 / t0, 0.0}, t1, o, [&](const auto& seg, const auto&) {
    dom.push_back(seg);
    return true;
  });
  if (rec.empty() || dom.empty()) throw DegenerateFit("integration produced no steps");
  std::reverse(rec.begin(), rec.end());

  Lemma23Result r;
  r.recessive = fit_log(rec, t0, t1, samples);
  r.recessive.predicted_rate = -s.a;
  r.recessive.predicted_power = p1;
  r.dominant = fit_log(dom, t0, t1, samples);
  r.dominant.predicted_rate = 0.0;
  r.dominant.predicted_power = p2;
  return r;
}

double decay_constant(const DecayODESpec& s) { return std::pow((s.q - 1.0) * s.b / s.a, -1.0 / (s.q - 1.0)); }

double check_lemma_2_1(const DecayODESpec& s, double T, double horizon, std::optional<double> y_initial) {
  if (!(s.a > 1.0) || !(s.b > 0.0) || !(s.c >= 0.0) || !(s.q > 1.0))
    throw InvalidArgument("need a > 1, b > 0, c >= 0, q > 1");
  if (!(T > 0.0) || !(horizon > 2.0 * T)) throw InvalidArgument("need 0 < 2T < horizon");
  const double e = 1.0 / (s.q - 1.0);
  const double y0 = y_initial ? *y_initial : decay_constant(s) * std::pow(T, -e);
  const double yp0 = -(s.b / s.a) * (y0 == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(y0), s.q), y0));
  auto rhs = [&](double t, const ode::State<2>& y) -> ode::State<2> {
    const double nl = y[0] == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(y[0]), s.q), y[0]);
    return {y[1], s.c * std::exp(-t) - s.a * y[1] - s.b * nl};
  };
  ode::Options o;
  o.rtol = 1e-11;
  o.atol = 1e-14;
  double sup = 0.0;
  const double lo = 2.0 * T;
  auto observer = [&](const ode::DenseSegment<2>& seg, const ode::State<2>&) {
    for (int k = 0; k <= 8; ++k) {
      const double t = seg.t_start + seg.h * k / 8.0;
      if (t < lo) continue;
      sup = std::max(sup, seg.value(t)[0] * std::pow(t, e));
    }
    return true;
  };
  const auto res = ode::integrate<2>(rhs, T, {y0, yp0}, horizon, o, observer);
  if (res.outcome != ode::Outcome::Finished || !std::isfinite(res.y[0]))
    throw BranchSelection("integration did not reach the horizon; re-shoot the initial state");
  if (std::abs(res.y[0]) > std::abs(y0) && y0 != 0.0)
    throw BranchSelection("solution grows instead of decaying; re-shoot the initial state");
  return sup;
}

}  // namespace singprof
