#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "singprof/params.hpp"
#include "singprof/shoot.hpp"

using namespace singprof;
using std::numbers::pi;

namespace {

void check_profile(const ProfileSolution& s) {
  REQUIRE(s.trajectory.first_zero);
  CHECK(std::abs(*s.trajectory.first_zero - pi / 2) <= 1e-10);
  CHECK(s.bc_residual <= 1e-10);
  CHECK(s.boundary_slope < 0.0);
  CHECK(s.ode_residual_max <= 1e-8);
  CHECK(s.alpha_star > 0.0);
}

}  // namespace

TEST_CASE("nonexistence at q = q1 surfaces as NoRoot") {
  const auto p = Params::make(3, 2.0, 2.0);
  try {
    solve_profile(p);
    FAIL("expected NoRootError");
  } catch (const NoRootError& e) {
    CHECK(e.scan.size() == 400);
    for (const auto& pt : e.scan) CHECK(pt.negative());
  }
}

TEST_CASE("profile regression constants against an RK4 shooting oracle") {
  struct Case {
    int n;
    double q;
    double alpha;  // frozen from the oracle below
  };
  for (const Case c : {Case{4, 2.0, 4.92437995659238}, Case{3, 3.0, 2.0}, Case{4, 3.0, 4.0},
                       Case{5, 2.0, 13.1748302061304}, Case{2, 4.0, 0.948685267488606}}) {
    CAPTURE(c.n);
    CAPTURE(c.q);
    const auto p = Params::make(c.n, c.q);
    const auto s = solve_profile(p);
    check_profile(s);
    CHECK(std::abs(s.alpha_star - c.alpha) <= 1e-10 * c.alpha);
    const double ref = oracle::rk4_alpha_star(c.n, c.q, p.ell, c.alpha / 1.5, c.alpha * 1.5);
    CHECK(std::abs(ref - c.alpha) <= 1e-7 * c.alpha);
  }
}

TEST_CASE("profile is decreasing on (0, pi/2]") {
  for (auto [n, q] : {std::pair{4, 2.0}, {3, 3.0}, {2, 5.0}, {5, 2.2}, {6, 1.7}}) {
    const auto s = solve_profile(Params::make(n, q));
    for (double th = 1e-3; th <= pi / 2; th += 1e-3) CHECK(s.trajectory.slope(th) < 0.0);
  }
}

TEST_CASE("warm-start window reproduces the cold solve") {
  for (auto [n, q] : {std::pair{4, 2.0}, {4, 4.5}, {3, 4.0}, {2, 7.0}}) {
    const auto p = Params::make(n, q);
    const auto cold = solve_profile(p);
    ShootOptions o;
    o.window = Bracket{cold.alpha_star / 4.0, cold.alpha_star * 4.0};
    const auto warm = solve_profile(p, 1e-10, o);
    CHECK(std::abs(warm.alpha_star - cold.alpha_star) <= 1e-10 * cold.alpha_star);
    CHECK(warm.scanned_points < cold.scanned_points);
    o.window = Bracket{1e3, 4e3};
    const auto fallback = solve_profile(p, 1e-10, o);
    CHECK(fallback.alpha_star == cold.alpha_star);
  }
}

TEST_CASE("serial and threaded scans agree") {
  const auto p = Params::make(4, 2.5);
  const auto grid = geometric_grid(1e-2, 1e2, 64);
  const auto a = scan_alpha(p, grid, 1e-10, 1);
  const auto b = scan_alpha(p, grid, 1e-10, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].F == b[i].F);
}

TEST_CASE("sign change brackets") {
  std::vector<ScanPoint> scan(6);
  const double F[] = {1.0, 0.5, -0.1, -0.2, 0.3, -0.4};
  for (int i = 0; i < 6; ++i) {
    scan[i].alpha = i + 1.0;
    scan[i].F = F[i];
  }
  const auto b = sign_change_brackets(scan);
  REQUIRE(b.size() == 3);
  CHECK(b[0].lo == 2.0);
  CHECK(b[0].hi == 3.0);
  CHECK(b[2].lo == 5.0);
  const auto g = geometric_grid(1e-4, 1e4, 400);
  CHECK(g.size() == 400);
  CHECK(g.front() == 1e-4);
  CHECK(g.back() == 1e4);
}

TEST_CASE("root counts") {
  const auto p43 = Params::make(4, 3.0);
  const double a43 = solve_profile(p43).alpha_star;
  CHECK(count_bvp_roots(p43, a43 / 10, a43 * 10, 200) == 1);
  CHECK(count_bvp_roots(Params::make(3, 2.0, 2.0), 1e-3, 1e3, 200) == 0);
  CHECK(count_bvp_roots(Params::make(4, 5.0, -0.75), 1e-3, 1e3, 200) == 0);
  CHECK_THROWS_AS(count_bvp_roots(p43, 2.0, 1.0, 200), InvalidArgument);
  CHECK_THROWS_AS(count_bvp_roots(p43, 1.0, 2.0, 1), InvalidArgument);
}

TEST_CASE("uniqueness scan across the existence window") {
  for (int n = 2; n <= 5; ++n) {
    const auto e = critical_exponents(n);
    const double top = e.q3.is_finite() ? std::min(e.q3.value(), e.q1 + 6.0) : e.q1 + 6.0;
    for (int k = 1; k <= 4; ++k) {
      const double q = e.q1 + (top - e.q1) * k / 5.0;
      CAPTURE(n);
      CAPTURE(q);
      const auto p = Params::make(n, q);
      const double a = solve_profile(p).alpha_star;
      CHECK(count_bvp_roots(p, a / 10, a * 10, 200) == 1);
    }
    for (double q : {1.0 + (e.q1 - 1.0) * 0.5, e.q1}) CHECK(count_bvp_roots(Params::make(n, q), 1e-3, 1e3, 200) == 0);
    if (e.q3.is_finite())
      for (double q : {e.q3.value(), e.q3.value() + 1.0})
        CHECK(count_bvp_roots(Params::make(n, q), 1e-3, 1e3, 200) == 0);
  }
}

TEST_CASE("two-dimensional quadrature oracle") {
  const oracle::GL gl(20);
  for (double q : {4.0, 5.0, 7.0}) {
    const double ell = ell_coeff(2, q);
    const double m = quadrature_oracle_2d(q, ell);
    CHECK(std::abs(half_period_2d(q, ell, m) - pi / 2) <= 1e-12);
    CHECK(std::abs(oracle::half_period_2d(q, ell, m, gl) - pi / 2) <= 1e-10);
    const auto s = solve_profile(Params::make(2, q));
    CHECK(std::abs(s.alpha_star - m) <= 1e-8 * s.alpha_star);
    const double slope2 = ell * m * m + 2.0 * std::pow(m, q + 1.0) / (q + 1.0);
    CHECK(std::abs(s.boundary_slope * s.boundary_slope - slope2) <= 1e-8 * slope2);
  }
  for (double m : {0.1, 1.0, 3.0}) CHECK(half_period_2d(3.0, 1e3, m) < pi / 2);
  CHECK_THROWS_AS(quadrature_oracle_2d(3.0, 1e3), NoRootError);
}

TEST_CASE("separable solution evaluation") {
  const auto s = solve_profile(Params::make(2, 4.0));
  const double q = 4.0;
  const double e = -2.0 / (q - 1.0);
  CHECK(eval_separable(s, {0.0, 2.0}) == doctest::Approx(std::pow(2.0, e) * s.alpha_star).epsilon(1e-15));
  CHECK(eval_separable(s, {1.5, 0.0}) == 0.0);
  CHECK_THROWS_AS(eval_separable(s, {0.0, 0.0}), SingularPointError);
  CHECK_THROWS_AS(eval_separable(s, {0.1, -0.1}), InvalidArgument);
  CHECK_THROWS_AS(eval_separable(s, {0.1, 0.1, 0.1}), InvalidArgument);

  SUBCASE("finite-difference Laplacian at (0.3, 0.4)") {
    const double h = 1e-3;
    auto u = [&](double x, double y) { return eval_separable(s, {x, y}); };
    const double lap = (u(0.3 + h, 0.4) + u(0.3 - h, 0.4) + u(0.3, 0.4 + h) + u(0.3, 0.4 - h) - 4 * u(0.3, 0.4)) / (h * h);
    CHECK(std::abs(lap + std::pow(u(0.3, 0.4), q)) <= 1e-4);
  }
  SUBCASE("scaling identity") {
    for (double sc : {0.25, 2.0, 8.0})
      for (auto x : {std::vector<double>{0.3, 0.4}, {-1.2, 0.05}, {0.0, 3.0}}) {
        const double lhs = eval_separable(s, {sc * x[0], sc * x[1]});
        const double rhs = std::pow(sc, e) * eval_separable(s, x);
        CHECK(std::abs(lhs - rhs) <= 4e-16 * std::abs(rhs));
      }
  }
  SUBCASE("pointwise bound by the pole value") {
    for (double th = 0.0; th <= pi / 2; th += 0.01) {
      const double r = 0.7;
      const std::vector<double> x{r * std::sin(th), r * std::cos(th)};
      CHECK(std::pow(r, 2.0 / (q - 1.0)) * eval_separable(s, x) <= s.alpha_star * (1 + 1e-15));
    }
  }
}

TEST_CASE("phase-plane curve") {
  const auto s = solve_profile(Params::make(2, 5.0));
  const auto c = phase_plane_curve(s.trajectory, 400);
  REQUIRE(c.xi_grid.size() == c.V.size());
  CHECK(c.xi_grid.front() == 0.0);
  CHECK(c.xi_grid.back() == doctest::Approx(s.alpha_star).epsilon(1e-15));
  CHECK(std::abs(c.V.back()) <= 1e-12);
  for (std::size_t i = 0; i + 1 < c.V.size(); ++i) CHECK(c.V[i] < 0.0);
}
