#include "singprof/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "singprof/critical.hpp"
#include "singprof/io.hpp"
#include "singprof/params.hpp"
#include "singprof/shoot.hpp"
#include "singprof/variational.hpp"
#include "singprof/verification.hpp"

namespace singprof {

namespace {

constexpr int kUsage = 3;
constexpr int kNumerical = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int dim = 0;
  double q = 0.0;
  std::string ell = "auto";
  double tol = 1e-10;
  std::string out;
  std::string format;
  bool force = false;
  double q_from = 0.0;
  double q_to = 0.0;
  int steps = 0;
  double theta_c = 0.0;
  int n = 512;
};

std::string g6(double x) {
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::optional<double> parse_ell(const std::string& s) {
  if (s == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--ell expects 'auto' or a real number, got '" + s + "'");
}

Params params_of(const Config& c) {
  try {
    return Params::make(c.dim, c.q, parse_ell(c.ell));
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

void check_tol(double tol) {
  if (!(tol >= 1e-14 && tol <= 1e-4)) throw UsageError("--tol must lie in [1e-14, 1e-4]");
}

std::filesystem::path out_dir(const Config& c, const char* fallback) {
  std::filesystem::path dir = c.out.empty() ? fallback : c.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw UsageError("output directory not writable: " + dir.string());
  return dir;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

int cmd_classify(const Config& c, std::ostream& out) {
  const Params p = params_of(c);
  const RegimeReport r = classify(p);
  if (c.format == "json") {
    Json j;
    j["params"] = to_json(p);
    j["regime"] = to_json(r);
    out << dump(j);
  } else if (c.format == "csv") {
    out << "N,q,ell,existence,uniqueness,existence_basis,uniqueness_basis\n"
        << p.dim << ',' << format_g17(p.q) << ',' << format_g17(p.ell) << ',' << to_string(r.existence) << ','
        << to_string(r.uniqueness) << ',' << csv_cell(r.existence_basis) << ',' << csv_cell(r.uniqueness_basis)
        << '\n';
  } else {
    out << pretty(r) << '\n';
  }
  return 0;
}

int cmd_solve(const Config& c, std::ostream& out, std::ostream& err) {
  check_tol(c.tol);
  const Params p = params_of(c);
  ProfileSolution sol;
  try {
    sol = solve_profile(p, c.tol);
  } catch (const NoRootError& e) {
    err << "NoRoot: " << e.what() << '\n';
    return kNumerical;
  } catch (const MultipleRootsError& e) {
    err << "MultipleRoots: " << e.what() << '\n';
    for (const auto& b : e.brackets) err << "  [" << format_g17(b.lo) << ", " << format_g17(b.hi) << "]\n";
    return kNumerical;
  }
  if (sol.trajectory.status == IvpStatus::Diverged) {
    err << "Diverged: " << sol.trajectory.diagnostic << '\n';
    return kNumerical;
  }
  if (c.format == "csv") {
    write_csv(sol.trajectory, out);
    return 0;
  }
  std::string csv_path;
  if (!c.out.empty()) {
    const auto dir = out_dir(c, ".");
    char name[96];
    std::snprintf(name, sizeof name, "profile_N%d_q%.10g.csv", p.dim, p.q);
    const auto path = dir / name;
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path.string());
    write_csv(sol.trajectory, f);
    csv_path = path.string();
  }
  if (c.format == "pretty") {
    out << "alpha* = " << g6(sol.alpha_star) << ", boundary slope = " << g6(sol.boundary_slope)
        << ", ode residual = " << g6(sol.ode_residual_max) << ", bc residual = " << g6(sol.bc_residual) << '\n';
    if (!csv_path.empty()) out << "profile: " << csv_path << '\n';
  } else {
    Json j = to_json(sol, csv_path);
    if (csv_path.empty()) j["trajectory_csv_path"] = nullptr;
    out << dump(j);
  }
  return 0;
}

int cmd_verify(const Config& c, std::ostream& out) {
  check_tol(c.tol);
  const Params p = params_of(c);
  VerifyOptions vo;
  vo.tol = c.tol;
  vo.force = c.force;
  const VerificationDocument doc = verify(p, vo);
  const Json j = to_json(doc);
  if (!c.out.empty()) {
    const auto dir = out_dir(c, ".");
    std::ofstream f(dir / "verify.json");
    if (!f) throw UsageError("cannot write " + (dir / "verify.json").string());
    f << dump(j);
  }
  if (c.format == "csv") {
    out << "check,value,tolerance,pass\n";
    for (const auto& [name, chk] : doc.oracle_checks)
      out << name << ',' << format_g17(chk.value) << ',' << format_g17(chk.tolerance) << ','
          << (chk.pass ? "true" : "false") << '\n';
  } else if (c.format == "pretty") {
    out << pretty(doc.regime) << '\n';
    if (doc.profile) out << "alpha* = " << g6(doc.profile->alpha_star) << '\n';
    for (const auto& [name, chk] : doc.oracle_checks)
      out << (chk.pass ? "PASS " : "FAIL ") << name << ' ' << g6(chk.value) << " <= " << g6(chk.tolerance) << '\n';
    if (doc.failure) out << doc.failure->kind << ": " << doc.failure->message << '\n';
  } else {
    out << dump(j);
  }
  return exit_code(doc);
}

int cmd_sweep(const Config& c, std::ostream& out) {
  check_tol(c.tol);
  SweepSpec s;
  s.dim = c.dim;
  s.q_from = c.q_from;
  s.q_to = c.q_to;
  s.steps = c.steps;
  s.ell_fixed = parse_ell(c.ell);
  try {
    sweep_grid(s);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  s.outputs = out_dir(c, "sweep");
  const auto docs = sweep(s, c.tol);
  write_sweep(s, docs);

  int code = 0;
  Json points = Json::array();
  for (const auto& d : docs) {
    const int e = exit_code(d);
    code = std::max(code, e);
    points.push_back({{"q", number(d.params.q)},
                      {"ell", number(d.params.ell)},
                      {"existence", to_string(d.regime.existence)},
                      {"alpha_star", d.profile ? number(d.profile->alpha_star) : Json()},
                      {"exit_code", e},
                      {"file", sweep_file_name(d.params.q)}});
  }
  if (c.format == "json") {
    out << dump(Json{{"outputs", s.outputs.string()}, {"points", points}});
  } else {
    std::ifstream index(s.outputs / "index.csv");
    out << index.rdbuf();
  }
  return code;
}

int cmd_kappa(const Config& c, std::ostream& out) {
  if (c.dim < 2) throw UsageError("--dim must be at least 2");
  const KappaResult k = kappa(c.dim);
  if (c.format == "csv")
    out << "N,q1,theta_const,kappa\n"
        << k.dim << ',' << format_g17(k.q1) << ',' << format_g17(k.theta_const) << ',' << format_g17(k.kappa) << '\n';
  else if (c.format == "pretty")
    out << "N = " << k.dim << ", q1 = " << g6(k.q1) << ", theta_const = " << g6(k.theta_const)
        << ", kappa = " << g6(k.kappa) << '\n';
  else
    out << dump(to_json(k));
  return 0;
}

int cmd_lambda(const Config& c, std::ostream& out) {
  LambdaEstimate l;
  try {
    l = lambda_cap(c.dim, c.theta_c, c.n);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (c.format == "csv")
    out << "N,theta_c,lambda,n\n"
        << l.dim << ',' << format_g17(l.theta_c) << ',' << format_g17(l.lambda) << ',' << l.n_grid << '\n';
  else if (c.format == "pretty")
    out << "lambda(theta_c = " << g6(l.theta_c) << ") = " << g6(l.lambda) << '\n';
  else
    out << dump(to_json(l));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separable singular solutions of -Lap u = |u|^{q-1} u on a half-space", "singprof"};
  app.require_subcommand(1);
  Config c;

  const auto formats = CLI::IsMember({"json", "csv", "pretty"});
  auto add_params = [&](CLI::App* sub, bool with_q) {
    sub->add_option("--dim", c.dim, "dimension N")->required()->check(CLI::Range(2, 1000));
    if (with_q) {
      sub->add_option("--q", c.q, "exponent q > 1")->required();
      sub->add_option("--ell", c.ell, "linear coefficient, or 'auto' for ell_{N,q}")->default_str("auto");
    }
  };
  auto add_common = [&](CLI::App* sub, const char* default_format) {
    sub->add_option("--format", c.format, "json | csv | pretty")->check(formats)->default_str(default_format);
    sub->add_option("--out", c.out, "output directory");
  };

  auto* classify_cmd = app.add_subcommand("classify", "existence/uniqueness verdict");
  add_params(classify_cmd, true);
  add_common(classify_cmd, "pretty");

  auto* solve_cmd = app.add_subcommand("solve", "shoot for the profile; --out writes the profile CSV");
  add_params(solve_cmd, true);
  add_common(solve_cmd, "json");
  solve_cmd->add_option("--tol", c.tol, "tolerance in [1e-14, 1e-4]");

  auto* verify_cmd = app.add_subcommand("verify", "full verification document");
  add_params(verify_cmd, true);
  add_common(verify_cmd, "json");
  verify_cmd->add_option("--tol", c.tol, "tolerance in [1e-14, 1e-4]");
  verify_cmd->add_flag("--force", c.force, "solve even when existence is not established");

  auto* sweep_cmd = app.add_subcommand("sweep", "verify along a uniform q grid");
  sweep_cmd->add_option("--dim", c.dim, "dimension N")->required()->check(CLI::Range(2, 1000));
  sweep_cmd->add_option("--ell", c.ell, "'auto' or a fixed value")->default_str("auto");
  sweep_cmd->add_option("--q-from", c.q_from)->required();
  sweep_cmd->add_option("--q-to", c.q_to)->required();
  sweep_cmd->add_option("--steps", c.steps)->required();
  sweep_cmd->add_option("--tol", c.tol, "tolerance in [1e-14, 1e-4]");
  add_common(sweep_cmd, "csv");

  auto* kappa_cmd = app.add_subcommand("kappa", "critical-exponent constants");
  add_params(kappa_cmd, false);
  add_common(kappa_cmd, "json");

  auto* lambda_cmd = app.add_subcommand("lambda", "weighted Poincare constant of a polar cap");
  add_params(lambda_cmd, false);
  lambda_cmd->add_option("--theta-c", c.theta_c, "cap radius in (0, pi/2]")->required();
  lambda_cmd->add_option("--n", c.n, "grid cells (>= 64)");
  add_common(lambda_cmd, "json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (c.format.empty()) c.format = sub == classify_cmd ? "pretty" : sub == sweep_cmd ? "csv" : "json";
  try {
    if (sub == classify_cmd) return cmd_classify(c, out);
    if (sub == solve_cmd) return cmd_solve(c, out, err);
    if (sub == verify_cmd) return cmd_verify(c, out);
    if (sub == sweep_cmd) return cmd_sweep(c, out);
    if (sub == kappa_cmd) return cmd_kappa(c, out);
    return cmd_lambda(c, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace singprof
