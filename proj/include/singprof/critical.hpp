#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

namespace singprof {

struct KappaResult {
  int dim = 0;
  double q1 = 0.0;
  double theta_const = 0.0;  // int over the half-sphere of cos^{q1+1}
  double kappa = 0.0;        // (N(N-1) / (2 theta_const))^{(N-1)/2}
};

KappaResult kappa(int dim, int n_quad = 32);

double kappa_from_theta(int dim, double theta_const);

// kappa (x_N/|x|) |x|^{-(N-1)} (log 1/|x|)^{-(N-1)/2}
double eval_critical_profile(int dim, double kappa, const std::vector<double>& x);

// y'' + (a - a1/t) y' + (b - b1/t) y / t = 0
struct LinearODESpec {
  double a = 1.0;
  double a1 = 0.0;
  double b = 0.0;
  double b1 = 0.0;
};

struct AsymptoticFit {
  double rate = 0.0;   // coefficient of t in log y
  double power = 0.0;  // coefficient of log t in log y
  double predicted_rate = 0.0;
  double predicted_power = 0.0;
};

struct Lemma23Result {
  AsymptoticFit recessive;  // t^{a1+b/a} e^{-a t}
  AsymptoticFit dominant;   // t^{-b/a}
};

struct DegenerateFit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Lemma23Result check_lemma_2_3(const LinearODESpec& spec, double t0, double t1, int samples = 400);

// y'' + a y' + b y^q = c e^{-t}
struct DecayODESpec {
  double a = 2.0;
  double b = 1.0;
  double c = 0.0;
  double q = 3.0;
};

struct BranchSelection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dominant-balance constant ((q-1) b / a)^{-1/(q-1)}.
double decay_constant(const DecayODESpec& spec);

// sup over [2T, horizon] of y t^{1/(q-1)}, starting on the decaying branch at
// t = T (or from y(T) = y_initial with the matching slope when given).
double check_lemma_2_1(const DecayODESpec& spec, double T, double horizon,
                       std::optional<double> y_initial = std::nullopt);

}  // namespace singprof
