#pragma once

#include <functional>
#include <vector>

namespace singprof::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule, Newton on the Legendre recurrence.
const Rule& gauss_legendre(int n);

using Fn = std::function<double(double)>;

double fixed(const Fn& f, double a, double b, int n_nodes);

// Uniform panels.
double composite(const Fn& f, double a, double b, int panels, int n_nodes);

// Integrate over the given panel edges (ascending).
double over_edges(const Fn& f, const std::vector<double>& edges, int n_nodes);

// Panels halved geometrically toward the chosen endpoints, for integrands with
// weak (algebraic) endpoint singularities.
std::vector<double> graded_edges(double a, double b, int uniform_panels, bool grade_left, bool grade_right,
                                 int levels = 45);

// Recursive panel bisection until the n- and 2x(n)-point estimates agree.
double adaptive(const Fn& f, double a, double b, double abs_tol, double rel_tol, int n_nodes = 20,
                int max_depth = 40);

}  // namespace singprof::quad
