#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "singprof/invariants.hpp"
#include "singprof/params.hpp"
#include "singprof/shoot.hpp"

namespace singprof {

struct OracleCheck {
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  static OracleCheck make(double value, double tolerance) {
    return {value, tolerance, value <= tolerance};
  }
};

struct ProfileSummary {
  double alpha_star = 0.0;
  double boundary_slope = 0.0;
  double ode_residual_max = 0.0;
  double bc_residual = 0.0;
  double tol = 0.0;
  Bracket bracket;
  std::size_t trajectory_points = 0;
};

struct Failure {
  std::string kind;  // NoRoot, MultipleRoots, Diverged, NonConvergence, Error
  std::string message;
  std::vector<Bracket> brackets;
  bool expected = false;  // consistent with a NotExists verdict
};

struct VerificationDocument {
  Params params;
  RegimeReport regime;
  std::optional<ProfileSummary> profile;
  std::optional<InvariantReport> invariants;
  std::map<std::string, OracleCheck> oracle_checks;
  std::optional<Failure> failure;
  std::string timestamp;
  std::map<std::string, std::string> versions;
};

struct VerifyOptions {
  double tol = 1e-10;
  bool force = false;
  std::optional<Bracket> alpha_window;
  unsigned threads = 0;
};

namespace tolerance {
inline constexpr double kOdeResidual = 1e-8;
inline constexpr double kBoundaryCondition = 1e-10;
inline constexpr double kPohozaev = 1e-6;
inline constexpr double kIdentity91 = 1e-6;
inline constexpr double kEnergyIdentity = 1e-6;
inline constexpr double kEndpointEnergy = 1e-8;
inline constexpr double kPhasePlane = 1e-8;
inline constexpr double kZTransform = 1e-6;
inline constexpr double kQuadrature2d = 1e-8;
}  // namespace tolerance

VerificationDocument verify(const Params& p, const VerifyOptions& opt = {});

// 4: unexpected numerical failure; 2: a check failed; 0 otherwise.
int exit_code(const VerificationDocument& doc);

struct SweepSpec {
  int dim = 4;
  double q_from = 1.8;
  double q_to = 4.8;
  int steps = 31;
  std::optional<double> ell_fixed;  // empty: ell_{N,q} at every point
  std::filesystem::path outputs;
};

std::vector<double> sweep_grid(const SweepSpec& s);

// One document per grid point, in grid order. Points run in contiguous
// chunks; within a chunk each point seeds the alpha window of the next.
std::vector<VerificationDocument> sweep(const SweepSpec& s, double tol = 1e-10, unsigned threads = 0,
                                        bool warm_start = true);

// q_<value>.json per point plus index.csv.
void write_sweep(const SweepSpec& s, const std::vector<VerificationDocument>& docs);

std::string sweep_file_name(double q);

std::string iso8601_now();

}  // namespace singprof
