#pragma once

#include <string>
#include <variant>
#include <vector>

#include "peakcap/quadrature.hpp"

namespace peakcap {

// Rectangular ("brick") scattering profile: constant value 1/spread on
// [-nu0, nu0] x [-tau0, tau0], zero outside. Unit volume by construction.
struct Brick {
  double nu0_hz = 0.0;   // one-sided Doppler support, Hz
  double tau0_s = 0.0;   // one-sided delay support, s
};

// Tabulated scattering profile on a rectangular lattice, evaluated by
// bilinear interpolation inside the bounding box and zero outside.
// Construction normalizes the interpolant to unit volume and records the
// applied scale factor.
struct SampledGrid {
  std::vector<double> nu_hz;              // strictly increasing
  std::vector<double> tau_s;              // strictly increasing
  std::vector<std::vector<double>> value; // [nu index][tau index], >= 0
  double norm_scale = 1.0;                // multiplier applied at build time

  double at(double nu, double tau) const; // interpolated density, 0 outside
};

class ScatteringFunction {
 public:
  static ScatteringFunction brick(double nu0_hz, double tau0_s);
  // Takes raw (unnormalized) samples; normalizes to unit volume.
  static ScatteringFunction sampled(std::vector<double> nu_hz,
                                    std::vector<double> tau_s,
                                    std::vector<std::vector<double>> value);

  bool is_brick() const { return std::holds_alternative<Brick>(shape_); }
  const Brick& as_brick() const { return std::get<Brick>(shape_); }
  const SampledGrid& as_grid() const { return std::get<SampledGrid>(shape_); }

  // Density C_H(nu, tau); zero outside the support box.
  double density(double nu_hz, double tau_s) const;

  // Support half-widths. For grids these bound the lattice box.
  double nu0_hz() const { return nu0_; }
  double tau0_s() const { return tau0_; }

  // Channel spread 4 * nu0 * tau0; construction rejects spread >= 1.
  double spread() const { return 4.0 * nu0_ * tau0_; }

 private:
  ScatteringFunction() = default;
  std::variant<Brick, SampledGrid> shape_;
  double nu0_ = 0.0;
  double tau0_ = 0.0;
};

// Time/frequency plane lattice used for signaling. Valid when TF >= 1 and
// the lattice resolves the channel spread: T <= 1/(2 nu0), F <= 1/(2 tau0).
struct GridParams {
  double t_s = 0.0;   // grid spacing in time, s
  double f_hz = 0.0;  // grid spacing in frequency, Hz

  double tf() const { return t_s * f_hz; }
};

// Grid matched to the support shape: T/F = tau0/nu0 at the given TF
// product, which centers the aliasing margins on both axes.
GridParams matched_grid(const ScatteringFunction& sf, double tf_product = 1.25);

// Validates lattice admissibility against the support; throws ConfigError.
void validate_grid(const ScatteringFunction& sf, const GridParams& g);

// Normalized discrete-time spectral density on the unit square
// |theta|, |phi| <= 1/2: (1/TF) * C_H(theta/T, phi/F). Arguments outside
// the unit square are rejected (they would wrap around the lattice).
double spectral_density(const ScatteringFunction& sf, const GridParams& g,
                        double theta, double phi);

// Integral of C_H^2 over the support. Brick short-circuits to 1/spread.
double kappa(const ScatteringFunction& sf,
             const QuadratureSpec& spec = QuadratureSpec{});

// Integral of log(1 + c * C_H(nu, tau)) over the support, c >= 0.
// Brick short-circuits to spread * log1p(c / spread); c = 0 gives 0.
double log_penalty_integral(const ScatteringFunction& sf, double c,
                            const QuadratureSpec& spec = QuadratureSpec{});

// Reads a grid profile from CSV with header "nu_hz,tau_s,value"; rows may
// come in any order but must fill a complete lattice exactly once.
ScatteringFunction load_sampled_grid_csv(const std::string& path);

}  // namespace peakcap
