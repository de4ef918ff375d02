#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "singprof/ivp.hpp"
#include "singprof/shoot.hpp"

using namespace singprof;
using std::numbers::pi;

TEST_CASE("zero initial value stays zero") {
  const auto t = integrate(Params::make(4, 2.0), 0.0);
  for (double v : t.v) CHECK(v == 0.0);
  CHECK_FALSE(t.first_zero);
  const auto z = first_zero_of(Params::make(4, 3.0), 1e-300);
  CHECK((!z.theta || *z.theta > pi / 2));
}

TEST_CASE("linear equation at ell = N-1 reproduces cos") {
  for (int n = 2; n <= 6; ++n) {
    IvpOptions o;
    o.nonlinear_coeff = 0.0;
    const auto t = integrate(Params::make(n, 2.0, n - 1.0), 1.0, kThetaMaxDefault, o);
    REQUIRE(t.first_zero);
    CHECK(std::abs(*t.first_zero - pi / 2) <= 1e-10);
    double err = 0.0;
    for (double th = 0.0; th < 3.0; th += 0.01) err = std::max(err, std::abs(t.value(th) - std::cos(th)));
    CHECK(err <= 1e-9);
  }
}

TEST_CASE("pole series against the Picard fixed point") {
  const oracle::GL gl(12);
  SUBCASE("N=3, q=3, ell=0, alpha=1") {
    const auto s = PoleSeries::make(Params::make(3, 3.0, 0.0), 1.0, 1.0);
    CHECK(-s.a2 == doctest::Approx(0.25).epsilon(1e-15));
    const double picard = oracle::picard(3, 3.0, 0.0, 1.0, 1e-3, 3, gl);
    CHECK(std::abs(s.value(1e-3) - picard) <= 1e-15);
    CHECK(std::abs((1.0 - picard) / 1e-6 - 0.25) <= 1e-6);
  }
  SUBCASE("fourth-order coefficient") {
    for (auto [n, q, ell, alpha] : {std::tuple{4, 2.5, -0.3, 2.0}, {5, 2.0, 1.0, 0.7}, {2, 4.0, 0.4, 1.3}}) {
      const auto s = PoleSeries::make(Params::make(n, q, ell), alpha, 1.0);
      const double t = 0.02;
      const double picard = oracle::picard(n, q, ell, alpha, t, 3, gl);
      // Truncation after t^4 leaves O(t^6).
      CHECK(std::abs(s.value(t) - picard) <= 1e-9 * alpha);
    }
  }
}

TEST_CASE("trajectory structural invariants") {
  for (auto [n, q, alpha] : {std::tuple{4, 2.0, 3.0}, {3, 3.0, 2.5}, {2, 4.0, 0.5}, {5, 1.8, 10.0}}) {
    const auto p = Params::make(n, q);
    const auto t = integrate(p, alpha);
    REQUIRE(t.theta_grid.size() == t.v.size());
    REQUIRE(t.v.size() == t.v_theta.size());
    CHECK(t.v[0] == alpha);
    CHECK(t.v_theta[0] == 0.0);
    for (std::size_t i = 1; i < t.theta_grid.size(); ++i) CHECK(t.theta_grid[i] > t.theta_grid[i - 1]);
    if (t.first_zero) {
      CHECK(std::abs(t.value(*t.first_zero)) <= 1e-10);
      for (std::size_t i = 0; i < t.theta_grid.size() && t.theta_grid[i] < *t.first_zero; ++i) CHECK(t.v[i] > 0.0);
    }
  }
}

TEST_CASE("first zero of the linearized equation") {
  for (auto [n, ell] : {std::pair{4, 1.5}, {3, 0.9}, {5, 6.0}, {2, 2.0}}) {
    IvpOptions o;
    o.nonlinear_coeff = 0.0;
    o.stop_at_first_zero = true;
    const auto t = integrate(Params::make(n, 2.0, ell), 1.0, kThetaMaxDefault, o);
    const auto ref = oracle::rk4_first_zero(n, 2.0, ell, 0.0, 1.0, kThetaMaxDefault, 40000);
    REQUIRE(ref);
    REQUIRE(t.first_zero);
    CHECK(std::abs(*t.first_zero - *ref) <= 1e-8);
  }
}

TEST_CASE("small alpha with ell below N-1 crosses after pi/2") {
  const auto z = first_zero_of(Params::make(4, 2.0, 0.0), 1e-6);
  CHECK((!z.theta || *z.theta > pi / 2));
  CHECK_FALSE(oracle::rk4_first_zero(4, 2.0, 0.0, 1.0, 1e-6, kThetaMaxDefault, 20000));
  const auto z2 = first_zero_of(Params::make(4, 2.5, 1.0), 1e-6);
  const auto ref = oracle::rk4_first_zero(4, 2.5, 1.0, 0.0, 1.0, kThetaMaxDefault, 20000);
  REQUIRE(z2.theta);
  REQUIRE(ref);
  CHECK(*z2.theta > pi / 2);
  CHECK(std::abs(*z2.theta - *ref) <= 1e-6);
}

TEST_CASE("N=3, q=2 trajectories vanish before pi/2") {
  const auto p = Params::make(3, 2.0);
  for (double a : geometric_grid(1e-3, 1e3, 61)) {
    const auto z = first_zero_of(p, a);
    REQUIRE(z.theta);
    CHECK(*z.theta < pi / 2);
    const auto ref = oracle::rk4_first_zero(3, 2.0, 2.0, 1.0, a, 2.0, 40000);
    if (a <= 30.0 && ref) CHECK(std::abs(*z.theta - *ref) <= 1e-6);
  }
}

TEST_CASE("divergence is a status, not an exception") {
  const auto t = integrate(Params::make(4, 2.0), 1e13);
  CHECK(t.status == IvpStatus::Diverged);
  CHECK_FALSE(t.diagnostic.empty());
  const auto z = first_zero_of(Params::make(4, 2.0), 1e13);
  CHECK(z.diverged);
  CHECK_FALSE(z.theta);
}

TEST_CASE("argument validation") {
  const auto p = Params::make(4, 2.0);
  CHECK_THROWS_AS(integrate(p, -1.0), InvalidArgument);
  CHECK_THROWS_AS(integrate(p, 1.0, pi), InvalidArgument);
  CHECK_THROWS_AS(integrate(p, 1.0, 0.0), InvalidArgument);
  IvpOptions o;
  o.tol = 0.0;
  CHECK_THROWS_AS(integrate(p, 1.0, 1.0, o), InvalidArgument);
  CHECK_THROWS_AS(first_zero_of(p, 0.0), InvalidArgument);
}

TEST_CASE("halving the launch angle barely moves the solution") {
  const double tol = 1e-10;
  for (auto [n, q] : {std::pair{4, 2.0}, {3, 3.0}, {2, 5.0}, {5, 2.2}}) {
    const auto p = Params::make(n, q);
    for (double a : {1e-3, 1e-1, 1.0, 30.0, 1e3}) {
      IvpOptions o;
      o.tol = tol;
      const auto base = integrate(p, a, 0.2, o);
      o.launch_theta = 0.5 * base.launch_theta();
      const auto half = integrate(p, a, 0.2, o);
      CHECK(std::abs(base.value(0.1) - half.value(0.1)) <= 10.0 * tol);
    }
  }
}

TEST_CASE("value at pi/4 stabilizes under tolerance refinement") {
  for (auto [n, q, a] : {std::tuple{4, 2.0, 4.9}, {3, 3.0, 2.0}, {2, 4.0, 0.95}}) {
    const auto p = Params::make(n, q);
    IvpOptions lo, hi;
    lo.tol = 1e-10;
    hi.tol = 1e-12;
    const double v1 = integrate(p, a, 1.0, lo).value(pi / 4);
    const double v2 = integrate(p, a, 1.0, hi).value(pi / 4);
    CHECK(std::abs(v1 - v2) <= 1e-12 * std::abs(v2));
  }
}

TEST_CASE("csv schema") {
  const auto t = integrate(Params::make(4, 2.0), 1.0, 0.5);
  std::ostringstream os;
  write_csv(t, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "theta,v,v_theta");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == t.theta_grid.size());
  CHECK(os.str().find("1,0") != std::string::npos);
}
