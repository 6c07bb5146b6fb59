#pragma once

#include "peakcap/bound_types.hpp"
#include "peakcap/scattering.hpp"
#include "peakcap/spatial.hpp"

namespace peakcap {

// Per-receive-branch penalty rate (nats/s): the cost of signaling with the
// peakiest admissible input on branch r,
//   psi_r = B / (lambda_max beta) * integral log(1 + lambda_max sigma_r
//           beta P / B * C_H).
// Always <= sigma_r * P (the integrand's concavity caps it).
double penalty_psi(const ScatteringFunction& sf, const SpatialSpectrum& spec,
                   const LinkBudget& lb, double bandwidth_hz, int r,
                   const QuadratureSpec& quad = QuadratureSpec{});

struct SufficientCondition {
  bool holds = false;
  bool spread_ok = false;  // spread <= beta / (3 TF)
  bool snr_ok = false;     // P/B below the peakiness threshold
  double threshold_db = 0.0;  // 10 log10 of the admissible P/B ceiling
};

// Checks the closed-form regime condition under which the peakiness weight
// is pinned at lambda_max and the upper-bound optimization is skipped.
SufficientCondition sufficient_condition_holds(const ScatteringFunction& sf,
                                               const GridParams& g,
                                               const SpatialSpectrum& spec,
                                               const LinkBudget& lb,
                                               double bandwidth_hz);

struct UpperBoundOptions {
  bool use_short_circuit = true;  // apply the sufficient condition when it holds
  double alpha_rel_tol = 1e-9;    // bisection interval target, relative to lambda_max
  QuadratureSpec quad{};
};

// Noncoherent capacity upper bound (nats/s): maximizes over the peakiness
// weight alpha in [0, lambda_max] the concave objective
//   sum_r B/(TF) log(1 + alpha sigma_r P TF / B) - alpha psi_r.
// The maximizer is found by bisection on the monotone derivative.
BoundValue upper_bound_u1(const ScatteringFunction& sf, const GridParams& g,
                          const SpatialSpectrum& spec, const LinkBudget& lb,
                          double bandwidth_hz,
                          const UpperBoundOptions& opt = UpperBoundOptions{});

// Closed-form evaluation for the rectangular profile with the weight pinned
// at lambda_max; the worst case over all profiles of the given spread.
BoundValue brick_upper_bound(double spread, const GridParams& g,
                             const SpatialSpectrum& spec, const LinkBudget& lb,
                             double bandwidth_hz);

// Coherent-receiver benchmark with per-branch power allocation fixed by the
// receive eigenvalues: sum_r B/(TF) log(1 + sigma_r P TF / B).
double coherent_jensen_bound(const SpatialSpectrum& spec, const LinkBudget& lb,
                             const GridParams& g, double bandwidth_hz);

}  // namespace peakcap
