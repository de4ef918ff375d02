#pragma once

// Reference computations written independently of the library: fixed-step
// integrators, closed forms, hand-rolled quadrature.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Gauss-Legendre via Golub-Welsch-free Newton on P_n (separate from the library's).
struct GL {
  std::vector<double> x, w;
  explicit GL(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double z = std::cos(pi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) {
          x[i] = z;
          w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
          break;
        }
      }
    }
  }
  double operator()(const std::function<double(double)>& f, double a, double b, int panels = 1) const {
    double s = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * h;
      for (std::size_t i = 0; i < x.size(); ++i) s += 0.5 * h * w[i] * f(lo + 0.5 * h * (x[i] + 1.0));
    }
    return s;
  }
};

// Picard iterate of the pole fixed-point map
//   v(t) = alpha - int_0^t sin^{-(N-2)}(s) int_0^s sin^{N-2}(r) f(v(r)) dr ds,
// f(v) = ell v + |v|^{q-1} v, nested Gauss-Legendre quadrature.
inline double picard(int dim, double q, double ell, double alpha, double t, int iterations, const GL& gl) {
  std::function<double(double, int)> v = [&](double th, int k) -> double {
    if (k == 0 || th == 0.0) return alpha;
    auto inner = [&](double s) {
      if (s == 0.0) return 0.0;
      const double ws = std::pow(std::sin(s), dim - 2.0);
      const double I = gl(
          [&](double r) {
            const double x = v(r, k - 1);
            return std::pow(std::sin(r), dim - 2.0) * (ell * x + std::pow(std::abs(x), q - 1.0) * x);
          },
          0.0, s);
      return I / ws;
    };
    return alpha - gl(inner, 0.0, th);
  };
  return v(t, iterations);
}

// int_0^{pi/2} cos^a sin^b = B((a+1)/2, (b+1)/2) / 2
inline double cos_sin_integral(double a, double b) { return 0.5 * std::beta((a + 1.0) / 2.0, (b + 1.0) / 2.0); }

inline double sphere_area(int k) { return 2.0 * std::pow(pi, (k + 1) / 2.0) / std::tgamma((k + 1) / 2.0); }

// Half-sphere measure factor for axially symmetric integrands.
inline double half_sphere_factor(int dim) { return dim == 2 ? 2.0 : sphere_area(dim - 2); }

// Fixed-step RK4 for v'' + (N-2) cot v' + ell v + c |v|^{q-1} v = 0 from the
// pole (Taylor start at t = h). Returns the first zero by cubic Hermite
// bisection inside the crossing step, or nothing before t_max.
inline std::optional<double> rk4_first_zero(int dim, double q, double ell, double c, double alpha, double t_max,
                                            int steps) {
  auto f = [&](double x) { return ell * x + c * std::pow(std::abs(x), q - 1.0) * x; };
  auto rhs = [&](double t, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -(dim - 2.0) * std::cos(t) / std::sin(t) * y[1] - f(y[0])};
  };
  const double h = t_max / steps;
  const double a2 = -f(alpha) / (2.0 * (dim - 1.0));
  double t = h;
  std::array<double, 2> y{alpha + a2 * h * h, 2.0 * a2 * h};
  for (int i = 1; i < steps; ++i) {
    const auto k1 = rhs(t, y);
    std::array<double, 2> y2{y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]};
    const auto k2 = rhs(t + 0.5 * h, y2);
    std::array<double, 2> y3{y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]};
    const auto k3 = rhs(t + 0.5 * h, y3);
    std::array<double, 2> y4{y[0] + h * k3[0], y[1] + h * k3[1]};
    const auto k4 = rhs(t + h, y4);
    std::array<double, 2> yn{y[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                             y[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    if (yn[0] <= 0.0) {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 200; ++it) {
        const double s = 0.5 * (lo + hi);
        const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
        const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
        const double val = h00 * y[0] + h10 * h * y[1] + h01 * yn[0] + h11 * h * yn[1];
        (val > 0.0 ? lo : hi) = s;
      }
      return t + h * 0.5 * (lo + hi);
    }
    y = yn;
    t += h;
  }
  return std::nullopt;
}

// Inequality (C) evaluated directly.
inline bool condition_c(int dim, double q, double ell, double lambda) {
  return ell * (q - 1.0) >= 1.0 - dim + (q * (dim - 3.0) - dim - 1.0) / (dim - 1.0) * lambda;
}

// Two-dimensional half-period at level m by direct trapezoid-free midpoint
// quadrature in psi (xi = m sin psi), independent of the library's rule.
inline double half_period_2d(double q, double ell, double m, const GL& gl) {
  auto g = [&](double psi) {
    const double s = std::sin(psi);
    const double e_m = ell * m * m / 2.0 + std::pow(m, q + 1.0) / (q + 1.0);
    const double e_x = ell * m * m * s * s / 2.0 + std::pow(m * s, q + 1.0) / (q + 1.0);
    const double c = std::cos(psi);
    const double d = 2.0 * (e_m - e_x);
    return m * c / std::sqrt(d);
  };
  return gl(g, 0.0, pi / 2.0, 64);
}

}  // namespace oracle

namespace oracle {

// Pole value whose RK4 trajectory first vanishes at pi/2, by bisection on a
// caller-supplied bracket with F(lo) > 0 > F(hi) convention of "zero after pi/2".
inline double rk4_alpha_star(int dim, double q, double ell, double lo, double hi, int steps = 20000) {
  auto after = [&](double a) {
    const auto z = rk4_first_zero(dim, q, ell, 1.0, a, pi - 1e-3, steps);
    return !z || *z > pi / 2;
  };
  const bool lo_after = after(lo);
  for (int it = 0; it < 80; ++it) {
    const double mid = std::sqrt(lo * hi);
    (after(mid) == lo_after ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace oracle
