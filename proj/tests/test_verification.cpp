#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "singprof/io.hpp"
#include "singprof/verification.hpp"

using namespace singprof;

namespace {

std::string without_stamps(const VerificationDocument& d) {
  Json j = to_json(d);
  j["timestamp"] = "";
  j["versions"] = Json::object();
  return dump(j);
}

void check_document_invariants(const VerificationDocument& d) {
  if (d.profile) CHECK(d.invariants.has_value());
  for (const auto& [name, c] : d.oracle_checks) {
    CAPTURE(name);
    CHECK(c.pass == (c.value <= c.tolerance));
  }
  const Json j = to_json(d);
  CHECK(exit_code_from_json(j) == exit_code(d));
  CHECK(dump(to_json(document_from_json(j))) == dump(j));
}

}  // namespace

TEST_CASE("verify on an existence case") {
  const auto d = verify(Params::make(4, 2.0));
  REQUIRE(d.profile);
  REQUIRE(d.invariants);
  CHECK_FALSE(d.failure);
  for (const char* name : {"ode_residual_scaled", "boundary_condition", "boundary_slope_negative", "pohozaev",
                           "identity91", "energy_identity", "endpoint_energy", "bvp_root_count"}) {
    REQUIRE(d.oracle_checks.count(name) == 1);
    CHECK(d.oracle_checks.at(name).pass);
  }
  CHECK(exit_code(d) == 0);
  CHECK(d.timestamp.size() == 20);
  CHECK(d.versions.count("singprof") == 1);
  check_document_invariants(d);
}

TEST_CASE("verify on nonexistence and forced runs") {
  const auto d = verify(Params::make(3, 2.0));
  CHECK(d.regime.existence == Existence::NotExists);
  CHECK_FALSE(d.profile);
  CHECK_FALSE(d.invariants);
  CHECK(exit_code(d) == 0);
  check_document_invariants(d);

  VerifyOptions force;
  force.force = true;
  const auto f = verify(Params::make(3, 2.0), force);
  REQUIRE(f.failure);
  CHECK(f.failure->kind == "NoRoot");
  CHECK(f.failure->expected);
  CHECK(exit_code(f) == 0);
  check_document_invariants(f);

  const auto two = verify(Params::make(2, 3.0));
  CHECK(two.regime.existence == Existence::NotExists);
  CHECK_FALSE(two.profile);
}

TEST_CASE("verify in two dimensions carries the quadrature check") {
  for (double q : {4.0, 7.0}) {
    const auto d = verify(Params::make(2, q));
    REQUIRE(d.oracle_checks.count("quadrature_2d_alpha") == 1);
    CHECK(d.oracle_checks.at("quadrature_2d_alpha").pass);
    CHECK(d.oracle_checks.count("phase_plane") == 1);
    check_document_invariants(d);
  }
  const auto d3 = verify(Params::make(3, 3.0));
  CHECK(d3.oracle_checks.count("z_transform") == 1);
  CHECK(d3.oracle_checks.count("z_concave") == 1);
}

TEST_CASE("exit codes re-derive from documents") {
  auto d = verify(Params::make(4, 2.0));
  d.oracle_checks["pohozaev"] = OracleCheck::make(1.0, 1e-6);
  CHECK(exit_code(d) == 2);
  CHECK(exit_code_from_json(to_json(d)) == 2);
  d.failure = Failure{"MultipleRoots", "synthetic", {{1.0, 2.0}, {3.0, 4.0}}, false};
  CHECK(exit_code(d) == 4);
  CHECK(exit_code_from_json(to_json(d)) == 4);
  check_document_invariants(d);
  const auto back = document_from_json(to_json(d));
  REQUIRE(back.failure);
  CHECK(back.failure->brackets.size() == 2);
  CHECK(back.failure->brackets[1].hi == 4.0);
}

TEST_CASE("repeated verify runs agree apart from the timestamp") {
  for (auto [n, q] : {std::pair{4, 2.0}, {2, 5.0}, {3, 2.0}}) {
    const auto a = verify(Params::make(n, q));
    const auto b = verify(Params::make(n, q));
    CHECK(without_stamps(a) == without_stamps(b));
  }
}

TEST_CASE("number encoding") {
  CHECK(number(std::numeric_limits<double>::infinity()) == "+inf");
  CHECK(number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(number(std::nan("")).is_null());
  CHECK(std::isinf(number_from(Json("+inf"))));
  CHECK(std::isnan(number_from(Json())));
  CHECK_THROWS_AS(number_from(Json("x")), InvalidArgument);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-300.0, 300.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::pow(10.0, u(rng) / 10.0) * (i % 2 ? -1.0 : 1.0);
    const Json j = Json::parse(Json{{"x", number(x)}}.dump());
    CHECK(number_from(j["x"]) == x);
  }
  CHECK(format_g17(0.1) == "0.10000000000000001");
  CHECK(format_g17(std::numeric_limits<double>::infinity()) == "+inf");
}

TEST_CASE("regime json round trip keeps infinite thresholds") {
  const auto r = classify(Params::make(2, 4.0));
  const Json j = to_json(r);
  CHECK(j["thresholds"]["q2"] == "+inf");
  CHECK(regime_from_json(j) == r);
}

TEST_CASE("sweep grid validation") {
  SweepSpec s;
  s.q_from = 2.0;
  s.q_to = 2.0;
  CHECK_THROWS_AS(sweep_grid(s), InvalidArgument);
  s.q_to = 3.0;
  s.steps = 1;
  CHECK_THROWS_AS(sweep_grid(s), InvalidArgument);
  s.steps = 2;
  CHECK(sweep_grid(s) == std::vector<double>{2.0, 3.0});
  s.q_from = 0.5;
  CHECK_THROWS_AS(sweep_grid(s), InvalidArgument);
  CHECK(sweep_file_name(1.8) == "q_1.8.json");
  CHECK(sweep_file_name(2.0) == "q_2.json");
}

TEST_CASE("minimal and subcritical sweeps") {
  SweepSpec s;
  s.dim = 4;
  s.q_from = 2.0;
  s.q_to = 3.0;
  s.steps = 2;
  CHECK(sweep(s).size() == 2);

  s.dim = 3;
  s.q_from = 1.2;
  s.q_to = 1.9;
  s.steps = 8;
  for (const auto& d : sweep(s)) {
    CHECK(d.regime.existence == Existence::NotExists);
    CHECK_FALSE(d.profile);
  }
}

TEST_CASE("sweep across the N=4 existence window") {
  SweepSpec s;
  s.dim = 4;
  s.q_from = 1.8;
  s.q_to = 4.8;
  s.steps = 31;
  const auto warm = sweep(s, 1e-10, 1, true);
  const auto cold = sweep(s, 1e-10, 1, false);
  const auto threaded = sweep(s, 1e-10, 4, true);
  REQUIRE(warm.size() == 31);
  const auto e = critical_exponents(4);
  for (std::size_t i = 0; i < warm.size(); ++i) {
    const double q = warm[i].params.q;
    CAPTURE(q);
    const bool inside = q > e.q1 && q < e.q3.value();
    CHECK(warm[i].profile.has_value() == inside);
    CHECK(exit_code(warm[i]) == 0);
    if (warm[i].profile) {
      REQUIRE(cold[i].profile);
      CHECK(std::abs(warm[i].profile->alpha_star - cold[i].profile->alpha_star) <=
            1e-10 * cold[i].profile->alpha_star);
    }
    CHECK(without_stamps(warm[i]) == without_stamps(threaded[i]));
  }

  const auto dir = std::filesystem::temp_directory_path() / "singprof_sweep_test";
  std::filesystem::remove_all(dir);
  s.outputs = dir;
  write_sweep(s, warm);
  std::ifstream index(dir / "index.csv");
  std::string header;
  std::getline(index, header);
  CHECK(header == "q,ell,existence,alpha_star,pohozaev_rel_residual,identity91_residual,energy_residual");
  int rows = 0;
  for (std::string line; std::getline(index, line);) ++rows;
  CHECK(rows == 31);
  for (const auto& d : warm) {
    const auto path = dir / sweep_file_name(d.params.q);
    REQUIRE(std::filesystem::exists(path));
    std::ifstream f(path);
    const Json j = Json::parse(f);
    CHECK(dump(to_json(document_from_json(j))) == dump(j));
  }
  std::filesystem::remove_all(dir);
}
