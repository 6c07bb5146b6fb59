#include "peakcap/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "peakcap/errors.hpp"

namespace peakcap {

namespace {

void check_axis(const std::vector<double>& a, const char* name) {
  if (a.size() < 2) throw ConfigError(std::string("sampled grid: axis ") + name + " needs >= 2 points");
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    if (!(a[i] < a[i + 1])) {
      throw ConfigError(std::string("sampled grid: axis ") + name + " not strictly increasing");
    }
  }
}

// Exact volume of the bilinear interpolant: per cell, area times the mean
// of the four corner values.
double interpolant_volume(const SampledGrid& grid) {
  double vol = 0.0;
  for (std::size_t i = 0; i + 1 < grid.nu_hz.size(); ++i) {
    const double dnu = grid.nu_hz[i + 1] - grid.nu_hz[i];
    for (std::size_t j = 0; j + 1 < grid.tau_s.size(); ++j) {
      const double dtau = grid.tau_s[j + 1] - grid.tau_s[j];
      const double corner_sum = grid.value[i][j] + grid.value[i + 1][j] +
                                grid.value[i][j + 1] + grid.value[i + 1][j + 1];
      vol += dnu * dtau * 0.25 * corner_sum;
    }
  }
  return vol;
}

// Break list for integrating log(1 + c * C): the lattice coordinates plus
// points graded geometrically toward every lattice line. The bilinear C can
// vanish on lattice lines and its magnitude can swing by orders within one
// cell, so the integrand behaves like a shifted log whose derivatives blow
// up toward the cell boundary; uniform panel doubling cannot resolve that
// within the refinement cap once c * C_max is large. Panels shrinking like
// 2^-k toward each line keep the per-panel variation of 1 + c * C bounded,
// which restores fast composite convergence.
std::vector<double> graded_axis_breaks(const std::vector<double>& coords,
                                       int levels) {
  std::vector<double> out;
  out.reserve(coords.size() * (2 * static_cast<std::size_t>(levels) + 1));
  for (std::size_t i = 0; i + 1 < coords.size(); ++i) {
    out.push_back(coords[i]);
    const double a = coords[i];
    const double b = coords[i + 1];
    const double w = b - a;
    for (int k = levels; k >= 1; --k) {
      const double p = a + std::ldexp(w, -k);
      if (p > out.back() && p < b) out.push_back(p);
    }
    for (int k = 2; k <= levels; ++k) {
      const double p = b - std::ldexp(w, -k);
      if (p > out.back() && p < b) out.push_back(p);
    }
  }
  out.push_back(coords.back());
  return out;
}

// Locates the cell index such that a[idx] <= x <= a[idx+1].
std::size_t cell_index(const std::vector<double>& a, double x) {
  auto it = std::upper_bound(a.begin(), a.end(), x);
  std::size_t idx = static_cast<std::size_t>(it - a.begin());
  if (idx == 0) return 0;
  if (idx >= a.size()) return a.size() - 2;
  return idx - 1;
}

}  // namespace

double SampledGrid::at(double nu, double tau) const {
  if (nu < nu_hz.front() || nu > nu_hz.back() ||
      tau < tau_s.front() || tau > tau_s.back()) {
    return 0.0;
  }
  const std::size_t i = cell_index(nu_hz, nu);
  const std::size_t j = cell_index(tau_s, tau);
  const double tx = (nu - nu_hz[i]) / (nu_hz[i + 1] - nu_hz[i]);
  const double ty = (tau - tau_s[j]) / (tau_s[j + 1] - tau_s[j]);
  const double v00 = value[i][j], v10 = value[i + 1][j];
  const double v01 = value[i][j + 1], v11 = value[i + 1][j + 1];
  return (1.0 - tx) * ((1.0 - ty) * v00 + ty * v01) +
         tx * ((1.0 - ty) * v10 + ty * v11);
}

ScatteringFunction ScatteringFunction::brick(double nu0_hz, double tau0_s) {
  if (!(nu0_hz > 0.0) || !(tau0_s > 0.0)) {
    throw ConfigError("brick profile: support half-widths must be positive");
  }
  ScatteringFunction sf;
  sf.shape_ = Brick{nu0_hz, tau0_s};
  sf.nu0_ = nu0_hz;
  sf.tau0_ = tau0_s;
  if (!(sf.spread() < 1.0)) {
    throw ConfigError("scattering profile: spread 4*nu0*tau0 must be < 1, got " +
                      std::to_string(sf.spread()));
  }
  return sf;
}

ScatteringFunction ScatteringFunction::sampled(std::vector<double> nu_hz,
                                               std::vector<double> tau_s,
                                               std::vector<std::vector<double>> value) {
  check_axis(nu_hz, "nu");
  check_axis(tau_s, "tau");
  if (value.size() != nu_hz.size()) {
    throw ConfigError("sampled grid: value rows must match nu axis length");
  }
  for (const auto& row : value) {
    if (row.size() != tau_s.size()) {
      throw ConfigError("sampled grid: value columns must match tau axis length");
    }
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ConfigError("sampled grid: values must be finite and >= 0");
      }
    }
  }
  SampledGrid grid{std::move(nu_hz), std::move(tau_s), std::move(value), 1.0};
  const double vol = interpolant_volume(grid);
  if (!(vol > 0.0)) throw ConfigError("sampled grid: interpolant volume must be positive");
  grid.norm_scale = 1.0 / vol;
  for (auto& row : grid.value) {
    for (double& v : row) v *= grid.norm_scale;
  }
  ScatteringFunction sf;
  sf.nu0_ = std::max(std::fabs(grid.nu_hz.front()), std::fabs(grid.nu_hz.back()));
  sf.tau0_ = std::max(std::fabs(grid.tau_s.front()), std::fabs(grid.tau_s.back()));
  sf.shape_ = std::move(grid);
  if (!(sf.spread() < 1.0)) {
    throw ConfigError("scattering profile: spread 4*nu0*tau0 must be < 1, got " +
                      std::to_string(sf.spread()));
  }
  return sf;
}

double ScatteringFunction::density(double nu_hz, double tau_s) const {
  if (is_brick()) {
    const auto& b = as_brick();
    if (std::fabs(nu_hz) <= b.nu0_hz && std::fabs(tau_s) <= b.tau0_s) {
      return 1.0 / spread();
    }
    return 0.0;
  }
  return as_grid().at(nu_hz, tau_s);
}

GridParams matched_grid(const ScatteringFunction& sf, double tf_product) {
  if (!(tf_product >= 1.0)) {
    throw ConfigError("grid: TF product must be >= 1, got " + std::to_string(tf_product));
  }
  GridParams g;
  g.t_s = std::sqrt(tf_product * sf.tau0_s() / sf.nu0_hz());
  g.f_hz = tf_product / g.t_s;
  validate_grid(sf, g);
  return g;
}

void validate_grid(const ScatteringFunction& sf, const GridParams& g) {
  if (!(g.t_s > 0.0) || !(g.f_hz > 0.0)) {
    throw ConfigError("grid: spacings must be positive");
  }
  // Slack of 1e-12 relative admits exact boundary grids computed in floating
  // point without admitting genuinely aliased ones.
  if (g.tf() < 1.0 * (1.0 - 1e-12)) {
    throw ConfigError("grid: TF product must be >= 1, got " + std::to_string(g.tf()));
  }
  if (g.t_s * (2.0 * sf.nu0_hz()) > 1.0 + 1e-12) {
    throw ConfigError("grid: T exceeds 1/(2 nu0), Doppler would alias");
  }
  if (g.f_hz * (2.0 * sf.tau0_s()) > 1.0 + 1e-12) {
    throw ConfigError("grid: F exceeds 1/(2 tau0), delay would alias");
  }
}

double spectral_density(const ScatteringFunction& sf, const GridParams& g,
                        double theta, double phi) {
  if (std::fabs(theta) > 0.5 || std::fabs(phi) > 0.5) {
    throw ConfigError("spectral_density: (theta, phi) outside the unit square");
  }
  return sf.density(theta / g.t_s, phi / g.f_hz) / g.tf();
}

double kappa(const ScatteringFunction& sf, const QuadratureSpec& spec) {
  if (sf.is_brick()) return 1.0 / sf.spread();
  const auto& grid = sf.as_grid();
  const auto f2 = [&grid](double nu, double tau) {
    const double v = grid.at(nu, tau);
    return v * v;
  };
  return integrate_cells_2d(f2, grid.nu_hz, grid.tau_s, spec).value;
}

double log_penalty_integral(const ScatteringFunction& sf, double c,
                            const QuadratureSpec& spec) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw ConfigError("log_penalty_integral: c must be finite and >= 0");
  }
  if (c == 0.0) return 0.0;
  if (sf.is_brick()) {
    const double spread = sf.spread();
    return spread * std::log1p(c / spread);
  }
  const auto& grid = sf.as_grid();
  const auto f = [&grid, c](double nu, double tau) {
    return std::log1p(c * grid.at(nu, tau));
  };
  double vmax = 0.0;
  for (const auto& row : grid.value) {
    for (double v : row) vmax = std::max(vmax, v);
  }
  std::vector<double> nu_breaks = grid.nu_hz;
  std::vector<double> tau_breaks = grid.tau_s;
  // Grading depth follows the dynamic range: panels must shrink until
  // c * C drops through 1, i.e. log2(c * C_max) halvings plus margin. Below
  // that range log1p is effectively linear and the plain lattice suffices.
  if (c * vmax > 8.0) {
    const int levels =
        std::min(46, static_cast<int>(std::ceil(std::log2(c * vmax))) + 2);
    nu_breaks = graded_axis_breaks(grid.nu_hz, levels);
    tau_breaks = graded_axis_breaks(grid.tau_s, levels);
  }
  return integrate_cells_2d(f, nu_breaks, tau_breaks, spec).value;
}

ScatteringFunction load_sampled_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("grid CSV is empty: " + path);
  // Tolerate a UTF-8 BOM and surrounding whitespace in the header.
  auto strip = [](std::string s) {
    if (s.size() >= 3 && s.compare(0, 3, "\xEF\xBB\xBF") == 0) s.erase(0, 3);
    s.erase(0, s.find_first_not_of(" \t\r"));
    const auto last = s.find_last_not_of(" \t\r");
    s.erase(last == std::string::npos ? 0 : last + 1);
    return s;
  };
  if (strip(line) != "nu_hz,tau_s,value") {
    throw ConfigError("grid CSV must start with header 'nu_hz,tau_s,value': " + path);
  }
  struct Row { double nu, tau, v; };
  std::vector<Row> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty()) continue;
    std::istringstream ss(s);
    Row r{};
    char c1 = 0, c2 = 0;
    if (!(ss >> r.nu >> c1 >> r.tau >> c2 >> r.v) || c1 != ',' || c2 != ',') {
      throw ConfigError("grid CSV parse failure at line " + std::to_string(lineno));
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw ConfigError("grid CSV has no data rows: " + path);

  std::map<double, std::size_t> nu_ix, tau_ix;
  for (const auto& r : rows) {
    nu_ix.emplace(r.nu, 0);
    tau_ix.emplace(r.tau, 0);
  }
  std::vector<double> nu_axis, tau_axis;
  nu_axis.reserve(nu_ix.size());
  tau_axis.reserve(tau_ix.size());
  for (auto& [k, v] : nu_ix) { v = nu_axis.size(); nu_axis.push_back(k); }
  for (auto& [k, v] : tau_ix) { v = tau_axis.size(); tau_axis.push_back(k); }
  if (nu_axis.size() * tau_axis.size() != rows.size()) {
    throw ConfigError("grid CSV rows do not form a complete lattice (expected " +
                      std::to_string(nu_axis.size() * tau_axis.size()) + " rows, got " +
                      std::to_string(rows.size()) + ")");
  }
  std::vector<std::vector<double>> value(nu_axis.size(),
                                         std::vector<double>(tau_axis.size(), -1.0));
  for (const auto& r : rows) {
    double& slot = value[nu_ix[r.nu]][tau_ix[r.tau]];
    if (slot >= 0.0) throw ConfigError("grid CSV contains a duplicate lattice point");
    slot = r.v;
  }
  return ScatteringFunction::sampled(std::move(nu_axis), std::move(tau_axis),
                                     std::move(value));
}

}  // namespace peakcap
