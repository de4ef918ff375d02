#include "singprof/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace singprof {

Json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  return x;
}

double number_from(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InvalidArgument("not a number: " + s);
  }
  return j.get<double>();
}

std::string format_g17(double x) {
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const Params& p) { return {{"N", p.dim}, {"q", number(p.q)}, {"ell", number(p.ell)}}; }

Json to_json(const ExtendedReal& e) {
  if (e.is_infinite()) return "+inf";
  return e.value();
}

static ExtendedReal extended_from(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "+inf") return ExtendedReal::infinity();
  return ExtendedReal::finite(j.get<double>());
}

Json to_json(const RegimeReport& r) {
  Json th = Json::object();
  for (const auto& [k, v] : r.thresholds) th[k] = to_json(v);
  return {{"existence", to_string(r.existence)},
          {"uniqueness", to_string(r.uniqueness)},
          {"existence_basis", r.existence_basis},
          {"uniqueness_basis", r.uniqueness_basis},
          {"applied_results", r.applied_results},
          {"thresholds", th},
          {"notes", r.notes}};
}

RegimeReport regime_from_json(const Json& j) {
  RegimeReport r;
  r.existence = existence_from_string(j.at("existence").get<std::string>());
  r.uniqueness = uniqueness_from_string(j.at("uniqueness").get<std::string>());
  r.existence_basis = j.at("existence_basis").get<std::string>();
  r.uniqueness_basis = j.at("uniqueness_basis").get<std::string>();
  r.applied_results = j.at("applied_results").get<std::vector<std::string>>();
  for (const auto& [k, v] : j.at("thresholds").items()) r.thresholds.emplace(k, extended_from(v));
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

Json to_json(const InvariantReport& r) {
  Json j;
  j["pohozaev"] = {{"grad_term", number(r.pohozaev.grad_term)},
                   {"mass_term", number(r.pohozaev.mass_term)},
                   {"boundary_term", number(r.pohozaev.boundary_term)},
                   {"residual", number(r.pohozaev.residual)},
                   {"relative_residual", number(r.pohozaev.relative_residual)}};
  if (r.identity91)
    j["identity91"] = {{"coefficient", number(r.identity91->coefficient)},
                       {"lhs", number(r.identity91->lhs)},
                       {"rhs", number(r.identity91->rhs)},
                       {"relative_residual", number(r.identity91->relative_residual)}};
  else
    j["identity91"] = nullptr;
  j["energy"] = {{"alpha_exp", number(r.energy_alpha_exp)},
                 {"beta_exp", number(r.energy_beta_exp)},
                 {"identity_residual_max", number(r.energy_identity_residual_max)},
                 {"endpoint_residual", number(r.endpoint_energy_residual)}};
  j["phase_plane_residual_max"] = r.phase_plane_residual_max ? number(*r.phase_plane_residual_max) : Json();
  if (r.z_transform_residual_max)
    j["z_transform"] = {{"residual_max", number(*r.z_transform_residual_max)},
                        {"concave", r.z_concave.value_or(false)}};
  else
    j["z_transform"] = nullptr;
  return j;
}

static InvariantReport invariants_from_json(const Json& j) {
  InvariantReport r;
  const auto& ph = j.at("pohozaev");
  r.pohozaev = {number_from(ph.at("grad_term")), number_from(ph.at("mass_term")),
                number_from(ph.at("boundary_term")), number_from(ph.at("residual")),
                number_from(ph.at("relative_residual"))};
  if (const auto& id = j.at("identity91"); !id.is_null())
    r.identity91 = Identity91Report{number_from(id.at("coefficient")), number_from(id.at("lhs")),
                                    number_from(id.at("rhs")), number_from(id.at("relative_residual"))};
  const auto& en = j.at("energy");
  r.energy_alpha_exp = number_from(en.at("alpha_exp"));
  r.energy_beta_exp = number_from(en.at("beta_exp"));
  r.energy_identity_residual_max = number_from(en.at("identity_residual_max"));
  r.endpoint_energy_residual = number_from(en.at("endpoint_residual"));
  if (const auto& pp = j.at("phase_plane_residual_max"); !pp.is_null()) r.phase_plane_residual_max = number_from(pp);
  if (const auto& z = j.at("z_transform"); !z.is_null()) {
    r.z_transform_residual_max = number_from(z.at("residual_max"));
    r.z_concave = z.at("concave").get<bool>();
  }
  return r;
}

static Json bracket_json(const Bracket& b) { return Json::array({number(b.lo), number(b.hi)}); }
static Bracket bracket_from(const Json& j) { return {number_from(j.at(0)), number_from(j.at(1))}; }

Json to_json(const VerificationDocument& d) {
  Json j;
  j["params"] = to_json(d.params);
  j["regime"] = to_json(d.regime);
  if (d.profile) {
    const auto& p = *d.profile;
    j["profile"] = {{"alpha_star", number(p.alpha_star)},
                    {"boundary_slope", number(p.boundary_slope)},
                    {"residuals", {{"ode_residual_max", number(p.ode_residual_max)},
                                   {"bc_residual", number(p.bc_residual)}}},
                    {"tol", number(p.tol)},
                    {"bracket", bracket_json(p.bracket)},
                    {"trajectory_points", p.trajectory_points}};
  } else {
    j["profile"] = nullptr;
  }
  j["invariants"] = d.invariants ? to_json(*d.invariants) : Json();
  Json checks = Json::object();
  for (const auto& [name, c] : d.oracle_checks)
    checks[name] = {{"value", number(c.value)}, {"tolerance", number(c.tolerance)}, {"pass", c.pass}};
  j["oracle_checks"] = checks;
  if (d.failure) {
    Json br = Json::array();
    for (const auto& b : d.failure->brackets) br.push_back(bracket_json(b));
    j["failure"] = {{"kind", d.failure->kind},
                    {"message", d.failure->message},
                    {"brackets", br},
                    {"expected", d.failure->expected}};
  } else {
    j["failure"] = nullptr;
  }
  j["timestamp"] = d.timestamp;
  j["versions"] = d.versions;
  return j;
}

VerificationDocument document_from_json(const Json& j) {
  VerificationDocument d;
  const auto& pj = j.at("params");
  d.params = Params{pj.at("N").get<int>(), number_from(pj.at("q")), number_from(pj.at("ell"))};
  d.regime = regime_from_json(j.at("regime"));
  if (const auto& p = j.at("profile"); !p.is_null()) {
    ProfileSummary s;
    s.alpha_star = number_from(p.at("alpha_star"));
    s.boundary_slope = number_from(p.at("boundary_slope"));
    s.ode_residual_max = number_from(p.at("residuals").at("ode_residual_max"));
    s.bc_residual = number_from(p.at("residuals").at("bc_residual"));
    s.tol = number_from(p.at("tol"));
    s.bracket = bracket_from(p.at("bracket"));
    s.trajectory_points = p.at("trajectory_points").get<std::size_t>();
    d.profile = s;
  }
  if (const auto& inv = j.at("invariants"); !inv.is_null()) d.invariants = invariants_from_json(inv);
  for (const auto& [name, c] : j.at("oracle_checks").items())
    d.oracle_checks[name] = {number_from(c.at("value")), number_from(c.at("tolerance")), c.at("pass").get<bool>()};
  if (const auto& f = j.at("failure"); !f.is_null()) {
    Failure fl;
    fl.kind = f.at("kind").get<std::string>();
    fl.message = f.at("message").get<std::string>();
    for (const auto& b : f.at("brackets")) fl.brackets.push_back(bracket_from(b));
    fl.expected = f.at("expected").get<bool>();
    d.failure = fl;
  }
  d.timestamp = j.at("timestamp").get<std::string>();
  d.versions = j.at("versions").get<std::map<std::string, std::string>>();
  return d;
}

int exit_code_from_json(const Json& j) {
  const auto& f = j.at("failure");
  if (!f.is_null() && !f.at("expected").get<bool>()) return 4;
  for (const auto& [name, c] : j.at("oracle_checks").items())
    if (!(number_from(c.at("value")) <= number_from(c.at("tolerance")))) return 2;
  return 0;
}

Json to_json(const KappaResult& k) {
  return {{"N", k.dim}, {"q1", number(k.q1)}, {"theta_const", number(k.theta_const)}, {"kappa", number(k.kappa)}};
}

Json to_json(const LambdaEstimate& l) {
  return {{"N", l.dim}, {"theta_c", number(l.theta_c)}, {"lambda", number(l.lambda)}, {"n", l.n_grid}};
}

Json to_json(const ProfileSolution& s, const std::string& trajectory_csv_path) {
  return {{"params", to_json(s.params)},
          {"alpha_star", number(s.alpha_star)},
          {"boundary_slope", number(s.boundary_slope)},
          {"residuals", {{"ode_residual_max", number(s.ode_residual_max)}, {"bc_residual", number(s.bc_residual)}}},
          {"trajectory_csv_path", trajectory_csv_path}};
}

}  // namespace singprof
