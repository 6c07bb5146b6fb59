#include "peakcap/asymptotics.hpp"

#include <cmath>
#include <cstddef>

#include "peakcap/errors.hpp"
#include "peakcap/lower_bound.hpp"

namespace peakcap {

namespace {

MajorizationVerdict verdict_of(const std::vector<double>& a,
                               const std::vector<double>& b) {
  const bool ab = majorizes(a, b);
  const bool ba = majorizes(b, a);
  if (ab && ba) return MajorizationVerdict::kEqual;
  if (ab) return MajorizationVerdict::kAOverB;
  if (ba) return MajorizationVerdict::kBOverA;
  return MajorizationVerdict::kIncomparable;
}

bool side_at_least(MajorizationVerdict v) {
  return v == MajorizationVerdict::kAOverB || v == MajorizationVerdict::kEqual;
}

bool side_at_most(MajorizationVerdict v) {
  return v == MajorizationVerdict::kBOverA || v == MajorizationVerdict::kEqual;
}

}  // namespace

TaylorResult taylor_coefficient(const ScatteringFunction& sf, const GridParams& g,
                                const SpatialSpectrum& spec, const LinkBudget& lb,
                                const QuadratureSpec& quad) {
  if (!(lb.p_per_s > 0.0)) throw ConfigError("link budget: P must be positive");
  if (!(lb.beta >= 1.0)) throw ConfigError("link budget: beta must be >= 1");
  validate_grid(sf, g);
  TaylorResult out;
  out.kappa = kappa(sf, quad);
  out.threshold_beta = 2.0 * g.tf() / out.kappa;
  out.valid = lb.beta > out.threshold_beta;
  double sigma_sq = 0.0;
  for (double s : spec.rx_eigs) sigma_sq += s * s;
  const double lp = spec.lambda_max() * lb.p_per_s;
  out.c1 = sigma_sq * lp * lp / 2.0 * (lb.beta * out.kappa - g.tf());
  return out;
}

SchurOrderReport schur_order_check(const SpatialSpectrum& a,
                                   const SpatialSpectrum& b,
                                   const ScatteringFunction& sf,
                                   const GridParams& g, const LinkBudget& lb,
                                   const QuadratureSpec& quad) {
  if (a.mt() != b.mt() || a.mr() != b.mr()) {
    throw ConfigError("schur_order_check: antenna counts differ");
  }
  SchurOrderReport rep;
  rep.tx = verdict_of(a.tx_eigs, b.tx_eigs);
  rep.rx = verdict_of(a.rx_eigs, b.rx_eigs);
  rep.c1_a = taylor_coefficient(sf, g, a, lb, quad).c1;
  rep.c1_b = taylor_coefficient(sf, g, b, lb, quad).c1;

  const double tol = 1e-9 * std::fmax(std::fabs(rep.c1_a), std::fabs(rep.c1_b));
  if (side_at_least(rep.tx) && side_at_least(rep.rx)) {
    rep.comparable = true;
    rep.ordering_confirmed = rep.c1_a >= rep.c1_b - tol;
  } else if (side_at_most(rep.tx) && side_at_most(rep.rx)) {
    rep.comparable = true;
    rep.ordering_confirmed = rep.c1_b >= rep.c1_a - tol;
  }
  return rep;
}

RatioAnalysis lb_ratio_analysis(const ScatteringFunction& sf, const GridParams& g,
                                const SpatialSpectrum& spec, const LinkBudget& lb,
                                const std::vector<double>& b_ladder,
                                const QuadratureSpec& quad) {
  if (b_ladder.size() < 4) {
    throw ConfigError("lb_ratio_analysis: ladder needs >= 4 points");
  }
  for (std::size_t i = 0; i + 1 < b_ladder.size(); ++i) {
    if (!(b_ladder[i] < b_ladder[i + 1])) {
      throw ConfigError("lb_ratio_analysis: ladder must be increasing");
    }
  }

  RatioAnalysis out;
  out.b_ladder = b_ladder;
  out.c1 = taylor_coefficient(sf, g, spec, lb, quad).c1;
  if (!(out.c1 > 0.0)) {
    throw ConfigError("lb_ratio_analysis: c1 must be positive (beta kappa > TF)");
  }

  std::vector<double> f(b_ladder.size());
  for (std::size_t i = 0; i < b_ladder.size(); ++i) {
    f[i] = b_ladder[i] * lb_approx(sf, g, spec, lb, b_ladder[i], 1, quad).rate;
    out.ratio.push_back(f[i] / out.c1);
    if (i > 0 && out.ratio[i] < out.ratio[i - 1]) out.monotone = false;
  }

  // Level 1 removes the 1/B term: slope of B*f against B. Level 2 removes
  // the 1/B^2 residual using nodes u_i = 1/(B_i B_{i+1}).
  std::vector<double> a1(f.size() - 1), u(f.size() - 1);
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    a1[i] = (b_ladder[i + 1] * f[i + 1] - b_ladder[i] * f[i]) /
            (b_ladder[i + 1] - b_ladder[i]);
    u[i] = 1.0 / (b_ladder[i] * b_ladder[i + 1]);
  }
  double limit = a1.back();
  if (a1.size() >= 2) {
    const std::size_t j = a1.size() - 2;
    limit = (u[j] * a1[j + 1] - u[j + 1] * a1[j]) / (u[j] - u[j + 1]);
  }
  out.limit_ratio = limit / out.c1;
  out.in_unit_range = out.limit_ratio > 0.0 && out.limit_ratio <= 1.0;
  return out;
}

std::vector<double> default_ratio_ladder(const ScatteringFunction& sf,
                                         const LinkBudget& lb,
                                         const QuadratureSpec& quad) {
  // Start where the per-integral argument P kappa / B is ~1/50: the
  // log(1+x) truncation error is then far below the extrapolation target.
  const double start = 50.0 * lb.p_per_s * kappa(sf, quad);
  std::vector<double> ladder;
  double b = start;
  for (int i = 0; i < 6; ++i) {
    ladder.push_back(b);
    b *= 2.0;
  }
  return ladder;
}

}  // namespace peakcap
