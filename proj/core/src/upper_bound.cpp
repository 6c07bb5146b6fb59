#include "peakcap/upper_bound.hpp"

#include <cmath>
#include <string>

#include "peakcap/errors.hpp"

namespace peakcap {

namespace {

void check_link(const LinkBudget& lb) {
  if (!(lb.p_per_s > 0.0)) throw ConfigError("link budget: P must be positive");
  if (!(lb.beta >= 1.0)) throw ConfigError("link budget: beta must be >= 1");
}

}  // namespace

double penalty_psi(const ScatteringFunction& sf, const SpatialSpectrum& spec,
                   const LinkBudget& lb, double bandwidth_hz, int r,
                   const QuadratureSpec& quad) {
  check_link(lb);
  if (!(bandwidth_hz > 0.0)) throw ConfigError("penalty_psi: bandwidth must be positive");
  if (r < 0 || r >= spec.mr()) throw ConfigError("penalty_psi: receive index out of range");
  const double lmax = spec.lambda_max();
  const double c = lmax * spec.rx_eigs[r] * lb.beta * lb.p_per_s / bandwidth_hz;
  return bandwidth_hz / (lmax * lb.beta) * log_penalty_integral(sf, c, quad);
}

SufficientCondition sufficient_condition_holds(const ScatteringFunction& sf,
                                               const GridParams& g,
                                               const SpatialSpectrum& spec,
                                               const LinkBudget& lb,
                                               double bandwidth_hz) {
  check_link(lb);
  if (!(bandwidth_hz > 0.0)) {
    throw ConfigError("sufficient_condition: bandwidth must be positive");
  }
  SufficientCondition out;
  const double spread = sf.spread();
  const double tf = g.tf();
  out.spread_ok = spread <= lb.beta / (3.0 * tf);
  // Threshold on P/B: (spread / (lambda_max sigma_max beta)) *
  // (exp(beta / (2 TF spread)) - 1). The exponent easily overflows double
  // range for small spreads, so the dB value is assembled in log space.
  const double x = lb.beta / (2.0 * tf * spread);
  const double log10_threshold =
      std::log10(spread / (spec.lambda_max() * spec.sigma_max() * lb.beta)) +
      x / std::log(10.0) + std::log10(-std::expm1(-x));
  out.threshold_db = 10.0 * log10_threshold;
  const double snr_db = 10.0 * std::log10(lb.p_per_s / bandwidth_hz);
  out.snr_ok = snr_db < out.threshold_db;
  out.holds = out.spread_ok && out.snr_ok;
  return out;
}

BoundValue upper_bound_u1(const ScatteringFunction& sf, const GridParams& g,
                          const SpatialSpectrum& spec, const LinkBudget& lb,
                          double bandwidth_hz, const UpperBoundOptions& opt) {
  check_link(lb);
  if (!(bandwidth_hz >= g.f_hz)) {
    throw ConfigError("upper_bound_u1: bandwidth below one frequency slot");
  }
  const double tf = g.tf();
  const double p = lb.p_per_s;
  const double lmax = spec.lambda_max();
  const int mr = spec.mr();

  // psi depends on r only through the receive eigenvalue, so repeated
  // eigenvalues (uniform spectra in particular) share one quadrature.
  std::vector<double> psi(mr);
  for (int r = 0; r < mr; ++r) {
    int prev = -1;
    for (int s = 0; s < r; ++s) {
      if (spec.rx_eigs[s] == spec.rx_eigs[r]) {
        prev = s;
        break;
      }
    }
    psi[r] = prev >= 0 ? psi[prev]
                       : penalty_psi(sf, spec, lb, bandwidth_hz, r, opt.quad);
  }

  // Derivative of the alpha objective; strictly decreasing in alpha, so a
  // sign change brackets the unique interior maximizer.
  const auto deriv = [&](double alpha) {
    double d = 0.0;
    for (int r = 0; r < mr; ++r) {
      const double sr = spec.rx_eigs[r];
      d += sr * p / (1.0 + alpha * sr * p * tf / bandwidth_hz) - psi[r];
    }
    return d;
  };

  BoundValue out;
  double alpha = lmax;
  if (opt.use_short_circuit &&
      sufficient_condition_holds(sf, g, spec, lb, bandwidth_hz).holds) {
    out.diag.optimizer_iterations = 0;
  } else if (deriv(lmax) >= 0.0) {
    // Objective still increasing at the right edge.
    out.diag.optimizer_iterations = 0;
  } else if (deriv(0.0) <= 0.0) {
    alpha = 0.0;
    out.diag.pinned = true;
    out.diag.optimizer_iterations = 0;
  } else {
    double lo = 0.0, hi = lmax;
    int iters = 0;
    while (hi - lo > opt.alpha_rel_tol * lmax) {
      const double mid = 0.5 * (lo + hi);
      (deriv(mid) > 0.0 ? lo : hi) = mid;
      ++iters;
    }
    alpha = 0.5 * (lo + hi);
    out.diag.optimizer_iterations = iters;
  }

  out.alpha_star = alpha;
  for (int r = 0; r < mr; ++r) {
    const double sr = spec.rx_eigs[r];
    out.awgn_term += bandwidth_hz / tf * std::log1p(alpha * sr * p * tf / bandwidth_hz);
    out.penalty_term += alpha * psi[r];
  }
  out.rate = out.awgn_term - out.penalty_term;
  return out;
}

BoundValue brick_upper_bound(double spread, const GridParams& g,
                             const SpatialSpectrum& spec, const LinkBudget& lb,
                             double bandwidth_hz) {
  check_link(lb);
  if (!(spread > 0.0) || !(spread < 1.0)) {
    throw ConfigError("brick_upper_bound: spread must be in (0, 1)");
  }
  if (!(bandwidth_hz >= g.f_hz)) {
    throw ConfigError("brick_upper_bound: bandwidth below one frequency slot");
  }
  const double tf = g.tf();
  const double p = lb.p_per_s;
  const double lmax = spec.lambda_max();
  BoundValue out;
  out.alpha_star = lmax;
  for (double sr : spec.rx_eigs) {
    out.awgn_term += bandwidth_hz / tf * std::log1p(lmax * sr * p * tf / bandwidth_hz);
    out.penalty_term += bandwidth_hz * spread / lb.beta *
                        std::log1p(lmax * sr * lb.beta * p / (bandwidth_hz * spread));
  }
  out.rate = out.awgn_term - out.penalty_term;
  return out;
}

double coherent_jensen_bound(const SpatialSpectrum& spec, const LinkBudget& lb,
                             const GridParams& g, double bandwidth_hz) {
  check_link(lb);
  if (!(bandwidth_hz > 0.0)) {
    throw ConfigError("coherent_jensen_bound: bandwidth must be positive");
  }
  const double tf = g.tf();
  double rate = 0.0;
  for (double sr : spec.rx_eigs) {
    rate += bandwidth_hz / tf * std::log1p(sr * lb.p_per_s * tf / bandwidth_hz);
  }
  return rate;
}

}  // namespace peakcap
