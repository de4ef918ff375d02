#include "singprof/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <limits>

#include "singprof/io.hpp"
#include "singprof/parallel.hpp"

#ifndef SINGPROF_VERSION
#define SINGPROF_VERSION "0.0.0"
#endif

namespace singprof {

namespace {

std::map<std::string, std::string> version_map() {
  char nl[32];
  std::snprintf(nl, sizeof nl, "%d.%d.%d", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                NLOHMANN_JSON_VERSION_PATCH);
  return {{"singprof", SINGPROF_VERSION}, {"nlohmann_json", nl}, {"compiler", __VERSION__}};
}

ProfileSummary summarize(const ProfileSolution& s) {
  ProfileSummary out;
  out.alpha_star = s.alpha_star;
  out.boundary_slope = s.boundary_slope;
  out.ode_residual_max = s.ode_residual_max;
  out.bc_residual = s.bc_residual;
  out.tol = s.tol;
  out.bracket = s.bracket;
  out.trajectory_points = s.trajectory.theta_grid.size();
  return out;
}

void add_checks(VerificationDocument& doc, const ProfileSolution& sol, const InvariantReport& inv,
                const VerifyOptions& opt) {
  namespace tl = tolerance;
  auto& c = doc.oracle_checks;
  const Params& p = doc.params;
  // Measured against the size of the nonlinear term at the pole.
  const double scale = std::max(1.0, std::pow(sol.alpha_star, p.q));
  c["ode_residual_scaled"] = OracleCheck::make(sol.ode_residual_max / scale, tl::kOdeResidual);
  c["boundary_condition"] = OracleCheck::make(sol.bc_residual, tl::kBoundaryCondition);
  c["boundary_slope_negative"] = OracleCheck::make(sol.boundary_slope, 0.0);
  c["pohozaev"] = OracleCheck::make(inv.pohozaev.relative_residual, tl::kPohozaev);
  if (inv.identity91) c["identity91"] = OracleCheck::make(inv.identity91->relative_residual, tl::kIdentity91);
  c["energy_identity"] = OracleCheck::make(inv.energy_identity_residual_max, tl::kEnergyIdentity);
  c["endpoint_energy"] = OracleCheck::make(inv.endpoint_energy_residual, tl::kEndpointEnergy);
  if (inv.phase_plane_residual_max)
    c["phase_plane"] = OracleCheck::make(*inv.phase_plane_residual_max, tl::kPhasePlane);
  if (inv.z_transform_residual_max) {
    c["z_transform"] = OracleCheck::make(*inv.z_transform_residual_max, tl::kZTransform);
    c["z_concave"] = OracleCheck::make(inv.z_concave.value_or(false) ? 0.0 : 1.0, 0.0);
  }

  const int roots = count_bvp_roots(p, sol.alpha_star / 10.0, sol.alpha_star * 10.0, 200, opt.tol, opt.threads);
  c["bvp_root_count"] = OracleCheck::make(std::abs(roots - 1.0), 0.0);

  if (p.dim == 2) {
    double rel = std::numeric_limits<double>::infinity();
    try {
      const double m = quadrature_oracle_2d(p.q, p.ell);
      rel = std::abs(sol.alpha_star - m) / sol.alpha_star;
    } catch (const std::exception&) {
    }
    c["quadrature_2d_alpha"] = OracleCheck::make(rel, tl::kQuadrature2d);
  }
}

}  // namespace

std::string iso8601_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

VerificationDocument verify(const Params& p, const VerifyOptions& opt) {
  validate(p);
  VerificationDocument doc;
  doc.params = p;
  doc.regime = classify(p);
  doc.timestamp = iso8601_now();
  doc.versions = version_map();
  if (doc.regime.existence != Existence::Exists && !opt.force) return doc;

  const bool nonexistence_possible = doc.regime.existence != Existence::Exists;
  ShootOptions so;
  so.window = opt.alpha_window;
  so.threads = opt.threads;
  try {
    const ProfileSolution sol = solve_profile(p, opt.tol, so);
    const InvariantReport inv = evaluate_invariants(sol);
    add_checks(doc, sol, inv, opt);
    doc.profile = summarize(sol);
    doc.invariants = inv;
  } catch (const NoRootError& e) {
    doc.failure = Failure{"NoRoot", e.what(), {}, nonexistence_possible};
  } catch (const MultipleRootsError& e) {
    doc.failure = Failure{"MultipleRoots", e.what(), e.brackets, false};
  } catch (const std::exception& e) {
    doc.oracle_checks.clear();
    doc.failure = Failure{"Error", e.what(), {}, false};
  }
  return doc;
}

int exit_code(const VerificationDocument& doc) {
  if (doc.failure && !doc.failure->expected) return 4;
  for (const auto& [name, c] : doc.oracle_checks)
    if (!c.pass) return 2;
  return 0;
}

std::vector<double> sweep_grid(const SweepSpec& s) {
  if (!(s.q_from < s.q_to)) throw InvalidArgument("sweep: q_from must be below q_to");
  if (s.steps < 2) throw InvalidArgument("sweep: at least two steps required");
  std::vector<double> q(static_cast<std::size_t>(s.steps));
  const double h = (s.q_to - s.q_from) / (s.steps - 1);
  for (int i = 0; i < s.steps; ++i) q[i] = s.q_from + h * i;
  q.back() = s.q_to;
  for (double qi : q) validate(Params::make(s.dim, qi, s.ell_fixed));
  return q;
}

std::vector<VerificationDocument> sweep(const SweepSpec& s, double tol, unsigned threads, bool warm_start) {
  const std::vector<double> qs = sweep_grid(s);
  const std::size_t n = qs.size();
  const unsigned avail = threads == 0 ? default_threads() : threads;
  const std::size_t chunks = std::clamp<std::size_t>(avail, 1, n);
  const std::size_t per = (n + chunks - 1) / chunks;
  std::vector<VerificationDocument> docs(n);

  parallel_for(chunks, static_cast<unsigned>(chunks), [&](std::size_t c) {
    std::optional<double> hint;
    for (std::size_t i = c * per; i < std::min(n, (c + 1) * per); ++i) {
      const Params p = Params::make(s.dim, qs[i], s.ell_fixed);
      VerifyOptions vo;
      vo.tol = tol;
      vo.threads = chunks > 1 ? 1 : avail;
      if (warm_start && hint) vo.alpha_window = Bracket{*hint / 4.0, *hint * 4.0};
      try {
        docs[i] = verify(p, vo);
      } catch (const std::exception& e) {
        docs[i].params = p;
        docs[i].regime = classify(p);
        docs[i].timestamp = iso8601_now();
        docs[i].versions = version_map();
        docs[i].failure = Failure{"Error", e.what(), {}, false};
      }
      if (docs[i].profile) hint = docs[i].profile->alpha_star;
    }
  });
  return docs;
}

std::string sweep_file_name(double q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "q_%.10g.json", q);
  return buf;
}

void write_sweep(const SweepSpec& s, const std::vector<VerificationDocument>& docs) {
  std::filesystem::create_directories(s.outputs);
  std::ofstream index(s.outputs / "index.csv");
  if (!index) throw std::runtime_error("cannot write " + (s.outputs / "index.csv").string());
  index << "q,ell,existence,alpha_star,pohozaev_rel_residual,identity91_residual,energy_residual\n";
  for (const auto& d : docs) {
    std::ofstream f(s.outputs / sweep_file_name(d.params.q));
    if (!f) throw std::runtime_error("cannot write " + (s.outputs / sweep_file_name(d.params.q)).string());
    f << dump(to_json(d));
    index << format_g17(d.params.q) << ',' << format_g17(d.params.ell) << ',' << to_string(d.regime.existence)
          << ',';
    if (d.profile) index << format_g17(d.profile->alpha_star);
    index << ',';
    if (d.invariants) index << format_g17(d.invariants->pohozaev.relative_residual);
    index << ',';
    if (d.invariants && d.invariants->identity91) index << format_g17(d.invariants->identity91->relative_residual);
    index << ',';
    if (d.invariants) index << format_g17(d.invariants->energy_identity_residual_max);
    index << '\n';
  }
}

}  // namespace singprof
