#include "peakcap/quadrature.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "peakcap/errors.hpp"

namespace peakcap {

namespace {

// 4-point Gauss-Legendre nodes/weights on [-1, 1]. Exact for degree <= 7,
// and per-panel error decays as h^8 on smooth integrands, so the doubling
// loop converges in one or two rounds away from kinks.
constexpr double kGlNode[4] = {-0.8611363115940526, -0.3399810435848563,
                               0.3399810435848563, 0.8611363115940526};
constexpr double kGlWeight[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};

void panel_points(QuadratureRule rule, double a, double b,
                  double* xs, double* ws, int* count) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  if (rule == QuadratureRule::kMidpoint) {
    xs[0] = mid;
    ws[0] = b - a;
    *count = 1;
    return;
  }
  for (int i = 0; i < 4; ++i) {
    xs[i] = mid + half * kGlNode[i];
    ws[i] = half * kGlWeight[i];
  }
  *count = 4;
}

// Splits every [breaks[i], breaks[i+1]] into `split` equal panels.
std::vector<double> refine_breaks(const std::vector<double>& breaks, int split) {
  if (split <= 1) return breaks;
  std::vector<double> out;
  out.reserve((breaks.size() - 1) * split + 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    for (int s = 0; s < split; ++s) {
      out.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) * s / split);
    }
  }
  out.push_back(breaks.back());
  return out;
}

double pass_2d(const std::function<double(double, double)>& f,
               const std::vector<double>& xb, const std::vector<double>& yb,
               QuadratureRule rule) {
  double total = 0.0;
  double xs[4], wx[4], ys[4], wy[4];
  int nx = 0, ny = 0;
  for (std::size_t i = 0; i + 1 < xb.size(); ++i) {
    panel_points(rule, xb[i], xb[i + 1], xs, wx, &nx);
    for (std::size_t j = 0; j + 1 < yb.size(); ++j) {
      panel_points(rule, yb[j], yb[j + 1], ys, wy, &ny);
      double cell = 0.0;
      for (int a = 0; a < nx; ++a) {
        double row = 0.0;
        for (int b = 0; b < ny; ++b) row += wy[b] * f(xs[a], ys[b]);
        cell += wx[a] * row;
      }
      total += cell;
    }
  }
  return total;
}

double pass_1d(const std::function<double(double)>& f,
               const std::vector<double>& xb, QuadratureRule rule) {
  double total = 0.0;
  double xs[4], wx[4];
  int nx = 0;
  for (std::size_t i = 0; i + 1 < xb.size(); ++i) {
    panel_points(rule, xb[i], xb[i + 1], xs, wx, &nx);
    for (int a = 0; a < nx; ++a) total += wx[a] * f(xs[a]);
  }
  return total;
}

void check_spec(const QuadratureSpec& spec) {
  if (spec.nodes_per_axis < 8) {
    throw ConfigError("quadrature: nodes_per_axis must be >= 8");
  }
  if (!(spec.rel_tolerance > 0.0)) {
    throw ConfigError("quadrature: tolerance must be positive");
  }
}

void check_breaks(const std::vector<double>& b, const char* axis) {
  if (b.size() < 2) throw ConfigError(std::string("quadrature: need >= 2 breakpoints on ") + axis);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    if (!(b[i] < b[i + 1])) {
      throw ConfigError(std::string("quadrature: breakpoints not strictly increasing on ") + axis);
    }
  }
}

// Pads the breakpoint list by splitting cells until at least min_panels.
std::vector<double> ensure_min_panels(std::vector<double> breaks, int min_panels) {
  while (static_cast<int>(breaks.size()) - 1 < min_panels) {
    breaks = refine_breaks(breaks, 2);
  }
  return breaks;
}

template <typename PassFn>
QuadResult refine_loop(PassFn&& pass, const QuadratureSpec& spec) {
  QuadResult r;
  double prev = pass(1);
  int split = 2;
  for (int k = 1; k <= spec.max_refinements; ++k) {
    const double cur = pass(split);
    r.est_error = std::fabs(cur - prev);
    r.refinements = k;
    const double scale = std::fmax(std::fabs(cur), std::fabs(prev));
    if (r.est_error <= spec.rel_tolerance * scale || scale == 0.0) {
      r.value = cur;
      r.converged = true;
      return r;
    }
    prev = cur;
    split *= 2;
  }
  throw NumericsError("quadrature: refinement cap " +
                      std::to_string(spec.max_refinements) +
                      " hit, last delta " + std::to_string(r.est_error));
}

}  // namespace

QuadResult integrate_cells_2d(const std::function<double(double, double)>& f,
                              const std::vector<double>& x_breaks,
                              const std::vector<double>& y_breaks,
                              const QuadratureSpec& spec) {
  check_spec(spec);
  check_breaks(x_breaks, "x");
  check_breaks(y_breaks, "y");
  const auto xb = ensure_min_panels(x_breaks, spec.nodes_per_axis);
  const auto yb = ensure_min_panels(y_breaks, spec.nodes_per_axis);
  return refine_loop(
      [&](int split) {
        return pass_2d(f, refine_breaks(xb, split), refine_breaks(yb, split), spec.rule);
      },
      spec);
}

QuadResult integrate_2d(const std::function<double(double, double)>& f,
                        double x0, double x1, double y0, double y1,
                        const QuadratureSpec& spec) {
  return integrate_cells_2d(f, {x0, x1}, {y0, y1}, spec);
}

QuadResult integrate_cells_1d(const std::function<double(double)>& f,
                              const std::vector<double>& x_breaks,
                              const QuadratureSpec& spec) {
  check_spec(spec);
  check_breaks(x_breaks, "x");
  const auto xb = ensure_min_panels(x_breaks, spec.nodes_per_axis);
  return refine_loop(
      [&](int split) { return pass_1d(f, refine_breaks(xb, split), spec.rule); },
      spec);
}

}  // namespace peakcap
