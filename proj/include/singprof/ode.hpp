#pragma once

// Adaptive explicit Runge-Kutta integration (DOP853) with continuous output.
//
// The stepper hands every accepted step to an observer as a DenseSegment, a
// 7th-order polynomial interpolant of the state over the step. Callers that
// need the solution between steps (event location, residuals, quadrature)
// keep the segments; callers that only need the endpoint discard them.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "singprof/dop853_tableau.hpp"

namespace singprof::ode {

template <std::size_t Dim>
using State = std::array<double, Dim>;

template <std::size_t Dim>
struct DenseSegment {
  double t_start = 0.0;
  double h = 0.0;  // signed step
  State<Dim> y_start{};
  std::array<State<Dim>, 7> coeffs{};

  double t_end() const { return t_start + h; }

  bool contains(double t) const {
    const double lo = std::min(t_start, t_end());
    const double hi = std::max(t_start, t_end());
    return t >= lo && t <= hi;
  }

  // y(t) = y0 + x(F0 + (1-x)(F1 + x(F2 + (1-x)(F3 + x(F4 + (1-x)(F5 + x F6))))))
  State<Dim> value(double t) const {
    const double x = (t - t_start) / h;
    State<Dim> y{};
    for (std::size_t k = 0; k < Dim; ++k) {
      double acc = 0.0;
      for (int i = 6; i >= 0; --i) {
        acc += coeffs[i][k];
        acc *= (i % 2 == 0) ? x : (1.0 - x);
      }
      y[k] = y_start[k] + acc;
    }
    return y;
  }

  // Exact derivative of the interpolant with respect to t.
  State<Dim> derivative(double t) const {
    const double x = (t - t_start) / h;
    State<Dim> dy{};
    for (std::size_t k = 0; k < Dim; ++k) {
      double acc = 0.0;
      double dacc = 0.0;
      for (int i = 6; i >= 0; --i) {
        acc += coeffs[i][k];
        if (i % 2 == 0) {
          dacc = dacc * x + acc;
          acc *= x;
        } else {
          dacc = dacc * (1.0 - x) - acc;
          acc *= (1.0 - x);
        }
      }
      dy[k] = dacc / h;
    }
    return dy;
  }
};

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double first_step = 0.0;  // 0 selects automatically
  double max_step = std::numeric_limits<double>::infinity();
  // Steps are also capped at max_step_rel * |t| (resolution near t = 0).
  double max_step_rel = std::numeric_limits<double>::infinity();
  // A step shorter than min_step_rel * max(|t|, min_step_floor) aborts.
  double min_step_rel = 1e-14;
  double min_step_floor = 0.0;
  std::size_t max_steps = 2'000'000;
};

enum class Outcome { Finished, Stopped, StepTooSmall, NonFinite, TooManySteps };

template <std::size_t Dim>
struct Result {
  Outcome outcome = Outcome::Finished;
  double t = 0.0;
  State<Dim> y{};
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

namespace detail {

template <std::size_t Dim>
double rms_norm(const State<Dim>& v, const State<Dim>& scale) {
  double s = 0.0;
  for (std::size_t k = 0; k < Dim; ++k) {
    const double r = v[k] / scale[k];
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(Dim));
}

template <std::size_t Dim>
bool all_finite(const State<Dim>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace detail

// Integrates y' = rhs(t, y) from t0 to t_end (either direction). The observer
// receives each accepted step as observer(segment, y_new) and returns false to
// stop the integration after that step.
template <std::size_t Dim, class Rhs, class Observer>
Result<Dim> integrate(Rhs&& rhs, double t0, const State<Dim>& y0, double t_end,
                      const Options& opt, Observer&& observer) {
  namespace tab = dop853;
  using S = State<Dim>;

  Result<Dim> res;
  res.t = t0;
  res.y = y0;
  if (t_end == t0) return res;

  const double dir = t_end > t0 ? 1.0 : -1.0;
  auto eval = [&](double t, const S& y) {
    ++res.evaluations;
    return rhs(t, y);
  };
  auto scale_of = [&](const S& a, const S& b) {
    S sc{};
    for (std::size_t k = 0; k < Dim; ++k)
      sc[k] = opt.atol + opt.rtol * std::max(std::abs(a[k]), std::abs(b[k]));
    return sc;
  };

  double t = t0;
  S y = y0;
  S f = eval(t, y);
  if (!detail::all_finite(f) || !detail::all_finite(y)) {
    res.outcome = Outcome::NonFinite;
    return res;
  }

  double h_abs = opt.first_step;
  if (h_abs <= 0.0) {
    const S sc = scale_of(y, y);
    const double d0 = detail::rms_norm<Dim>(y, sc);
    const double d1 = detail::rms_norm<Dim>(f, sc);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(t_end - t0));
    S y1{};
    for (std::size_t k = 0; k < Dim; ++k) y1[k] = y[k] + dir * h0 * f[k];
    const S f1 = eval(t + dir * h0, y1);
    S df{};
    for (std::size_t k = 0; k < Dim; ++k) df[k] = f1[k] - f[k];
    const double d2 = detail::rms_norm<Dim>(df, sc) / h0;
    double h1 = 0.0;
    if (d1 <= 1e-15 && d2 <= 1e-15)
      h1 = std::max(1e-6, h0 * 1e-3);
    else
      h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / 8.0);
    h_abs = std::min(100.0 * h0, h1);
  }
  h_abs = std::min({h_abs, opt.max_step, std::abs(t_end - t0)});

  std::array<S, tab::kStagesExtended> K{};
  constexpr double kSafety = 0.9;
  constexpr double kMinFactor = 0.2;
  constexpr double kMaxFactor = 10.0;
  constexpr double kErrExponent = -1.0 / 8.0;

  while (dir * (t_end - t) > 0.0) {
    if (res.accepted >= opt.max_steps) {
      res.outcome = Outcome::TooManySteps;
      break;
    }
    const double min_step = std::max(opt.min_step_rel * std::max(std::abs(t), opt.min_step_floor),
                                      10.0 * std::abs(std::nextafter(t, dir * HUGE_VAL) - t));
    bool accepted = false;
    bool rejected_once = false;
    double h = 0.0;
    double t_new = t;
    S y_new{};
    S f_new{};
    while (!accepted) {
      if (h_abs < min_step) {
        res.outcome = Outcome::StepTooSmall;
        res.t = t;
        res.y = y;
        return res;
      }
      h_abs = std::min({h_abs, opt.max_step, opt.max_step_rel * std::abs(t)});
      h = dir * h_abs;
      t_new = t + h;
      if (dir * (t_new - t_end) > 0.0) t_new = t_end;
      h = t_new - t;
      h_abs = std::abs(h);

      K[0] = f;
      for (int s = 1; s < tab::kStages; ++s) {
        S ys = y;
        for (int j = 0; j < s; ++j) {
          const double a = tab::kA[s][j];
          if (a == 0.0) continue;
          for (std::size_t k = 0; k < Dim; ++k) ys[k] += h * a * K[j][k];
        }
        K[s] = eval(t + tab::kC[s] * h, ys);
      }
      y_new = y;
      for (int j = 0; j < tab::kStages; ++j) {
        const double b = tab::kA[tab::kStages][j];
        if (b == 0.0) continue;
        for (std::size_t k = 0; k < Dim; ++k) y_new[k] += h * b * K[j][k];
      }
      f_new = eval(t_new, y_new);
      K[tab::kStages] = f_new;

      if (!detail::all_finite(y_new) || !detail::all_finite(f_new)) {
        // Treat as a rejected step; persistent non-finiteness ends in a
        // step-size collapse that is reported as NonFinite.
        h_abs *= kMinFactor;
        rejected_once = true;
        ++res.rejected;
        if (h_abs < min_step) {
          res.outcome = Outcome::NonFinite;
          res.t = t;
          res.y = y;
          return res;
        }
        continue;
      }

      const S sc = scale_of(y, y_new);
      S e5{};
      S e3{};
      for (int j = 0; j <= tab::kStages; ++j) {
        for (std::size_t k = 0; k < Dim; ++k) {
          e5[k] += tab::kE5[j] * K[j][k];
          e3[k] += tab::kE3[j] * K[j][k];
        }
      }
      double n5 = 0.0;
      double n3 = 0.0;
      for (std::size_t k = 0; k < Dim; ++k) {
        n5 += (e5[k] / sc[k]) * (e5[k] / sc[k]);
        n3 += (e3[k] / sc[k]) * (e3[k] / sc[k]);
      }
      double err = 0.0;
      if (n5 > 0.0 || n3 > 0.0)
        err = h_abs * n5 / std::sqrt((n5 + 0.01 * n3) * static_cast<double>(Dim));

      if (err < 1.0) {
        double factor = err == 0.0 ? kMaxFactor
                                   : std::min(kMaxFactor, kSafety * std::pow(err, kErrExponent));
        if (rejected_once) factor = std::min(1.0, factor);
        h_abs *= factor;
        accepted = true;
      } else {
        h_abs *= std::max(kMinFactor, kSafety * std::pow(err, kErrExponent));
        rejected_once = true;
        ++res.rejected;
      }
    }

    // Continuous extension: three extra stages, then the interpolant coefficients.
    for (int s = tab::kStages + 1; s < tab::kStagesExtended; ++s) {
      S ys = y;
      for (int j = 0; j < s; ++j) {
        const double a = tab::kA[s][j];
        if (a == 0.0) continue;
        for (std::size_t k = 0; k < Dim; ++k) ys[k] += h * a * K[j][k];
      }
      K[s] = eval(t + tab::kC[s] * h, ys);
    }
    DenseSegment<Dim> seg;
    seg.t_start = t;
    seg.h = h;
    seg.y_start = y;
    for (std::size_t k = 0; k < Dim; ++k) {
      const double dy = y_new[k] - y[k];
      seg.coeffs[0][k] = dy;
      seg.coeffs[1][k] = h * f[k] - dy;
      seg.coeffs[2][k] = 2.0 * dy - h * (f_new[k] + f[k]);
    }
    for (int r = 0; r < 4; ++r) {
      for (std::size_t k = 0; k < Dim; ++k) {
        double acc = 0.0;
        for (int j = 0; j < tab::kStagesExtended; ++j) acc += tab::kD[r][j] * K[j][k];
        seg.coeffs[3 + r][k] = h * acc;
      }
    }

    t = t_new;
    y = y_new;
    f = f_new;
    ++res.accepted;
    res.t = t;
    res.y = y;
    if (!observer(static_cast<const DenseSegment<Dim>&>(seg), static_cast<const S&>(y))) {
      res.outcome = Outcome::Stopped;
      return res;
    }
  }
  return res;
}

template <std::size_t Dim, class Rhs>
Result<Dim> integrate(Rhs&& rhs, double t0, const State<Dim>& y0, double t_end, const Options& opt) {
  return integrate<Dim>(std::forward<Rhs>(rhs), t0, y0, t_end, opt,
                        [](const DenseSegment<Dim>&, const State<Dim>&) { return true; });
}

}  // namespace singprof::ode
