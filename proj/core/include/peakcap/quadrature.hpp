#pragma once

#include <functional>
#include <vector>

namespace peakcap {

enum class QuadratureRule {
  kGaussLegendre,  // composite 4-point Gauss-Legendre per panel
  kMidpoint,       // composite midpoint rule (coarse reference)
};

// Controls the panel refinement loop shared by all integral evaluations.
// nodes_per_axis is the minimum panel count per axis of the initial pass;
// refinement doubles the panel count until successive values agree to
// rel_tolerance, giving up after max_refinements doublings.
struct QuadratureSpec {
  int nodes_per_axis = 16;
  QuadratureRule rule = QuadratureRule::kGaussLegendre;
  double rel_tolerance = 1e-8;
  int max_refinements = 4;
};

struct QuadResult {
  double value = 0.0;
  double est_error = 0.0;  // |last - previous| refinement delta
  int refinements = 0;
  bool converged = false;
};

// Integrates f(x, y) over [x0,x1] x [y0,y1] with uniform panels.
// Throws NumericsError if the refinement cap is hit before convergence.
QuadResult integrate_2d(const std::function<double(double, double)>& f,
                        double x0, double x1, double y0, double y1,
                        const QuadratureSpec& spec);

// Same contract, but the initial panels are the cells of the given
// breakpoint lattice (both axes strictly increasing, >= 2 entries each).
// Piecewise-smooth integrands with kinks on the lattice lines converge at
// the per-panel rate this way; uniform panels would stall at the kinks.
QuadResult integrate_cells_2d(const std::function<double(double, double)>& f,
                              const std::vector<double>& x_breaks,
                              const std::vector<double>& y_breaks,
                              const QuadratureSpec& spec);

// One-dimensional variant over breakpoint-aligned panels.
QuadResult integrate_cells_1d(const std::function<double(double)>& f,
                              const std::vector<double>& x_breaks,
                              const QuadratureSpec& spec);

}  // namespace peakcap
