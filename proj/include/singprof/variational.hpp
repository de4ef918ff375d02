#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "singprof/params.hpp"

namespace singprof {

struct DiscreteProfile {
  Params params;
  std::vector<double> theta_grid;  // n uniform nodes on [0, pi/2]
  std::vector<double> values;      // minimizer w, normalized so int (w+)^{q+1} = 1
  std::vector<double> weight;      // sin^{N-2} at the nodes
  double lagrange_multiplier = 0.0;
  double functional = 0.0;         // J(w)
  double constraint = 0.0;
  double el_residual = 0.0;
  int iterations = 0;
  bool outside_theory = false;     // q outside (q1, q3)

  // lambda^{1/(q-1)} w
  std::vector<double> rescaled() const;
};

struct NonConvergence : std::runtime_error {
  NonConvergence(const std::string& what, DiscreteProfile last)
      : std::runtime_error(what), last_iterate(std::move(last)) {}
  DiscreteProfile last_iterate;
};

struct MinimizeProgress {
  int iteration;
  double functional;
  double residual;
};

using ProgressFn = std::function<void(const MinimizeProgress&)>;

inline constexpr double kElResidualTarget = 1e-8;

DiscreteProfile minimize_profile(const Params& p, int n, int max_iter, const ProgressFn& progress = {});

// theta, v, v_theta with central differences.
void write_csv(const DiscreteProfile& d, std::ostream& os);

struct LambdaEstimate {
  int dim = 0;
  double theta_c = 0.0;
  double lambda = 0.0;
  int n_grid = 0;
};

// Smallest eigenvalue of the cos-weighted Dirichlet problem on the polar cap
// {theta < theta_c}, cell-centred finite volumes.
LambdaEstimate lambda_cap(int dim, double theta_c, int n);

// First Dirichlet eigenvalue of -Laplace-Beltrami on the half-sphere with the
// same machinery but weight sin^{N-2} alone. Exact value N-1.
double dirichlet_eigenvalue_hemisphere(int dim, int n);

}  // namespace singprof
