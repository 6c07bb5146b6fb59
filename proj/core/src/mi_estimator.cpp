#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "peakcap/errors.hpp"
#include "peakcap/lower_bound.hpp"
#include "peakcap/parallel.hpp"
#include "peakcap/rng.hpp"

namespace peakcap {

namespace {

// Substream tags separating the draw purposes of one outer sample. Draws
// are addressed by (seed, outer index, tag + element index), so the value
// of any single draw never depends on loop order, thread count, or on
// which other candidates are evaluated in the same pass.
constexpr std::uint64_t kTagChannel = 0x1000000000000000ull;
constexpr std::uint64_t kTagNoise = 0x2000000000000000ull;
constexpr std::uint64_t kTagPhase = 0x3000000000000000ull;

std::complex<double> draw_cn(std::uint64_t seed, std::uint64_t i, std::uint64_t tag,
                             std::uint64_t elem) {
  CounterRng rng(seed, i, tag + elem);
  return rng.next_cn();
}

double draw_phase(std::uint64_t seed, std::uint64_t i, std::uint64_t elem,
                  PhaseModel model, int psk_order) {
  CounterRng rng(seed, i, kTagPhase + elem);
  if (model == PhaseModel::kUniformPsk) {
    const double u = static_cast<double>(rng.next_u64() >> 11) * 0x1.0p-53;
    const int idx = static_cast<int>(u * psk_order);
    return 2.0 * M_PI * idx / psk_order;
  }
  return rng.next_phase();
}

McEstimate reduce_samples(const std::vector<double>& vals, double confidence) {
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(vals.size());
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var = vals.size() > 1 ? var / (static_cast<double>(vals.size()) - 1.0) : 0.0;
  McEstimate est;
  est.value = mean;
  est.half_width = 1.96 * std::sqrt(var / static_cast<double>(vals.size()));
  est.converged = est.half_width <= confidence;
  return est;
}

}  // namespace

std::vector<McEstimate> coherent_mi_cm_multi(
    const SpatialSpectrum& spec, const std::vector<MiCandidate>& cands,
    PhaseModel phase_model, int psk_order, const McSpec& mc,
    std::vector<std::vector<double>>* samples) {
  if (cands.empty()) throw ConfigError("coherent_mi_cm: no candidates");
  int q_max = 1;
  for (const auto& c : cands) {
    if (c.q_active < 1 || c.q_active > spec.mt()) {
      throw ConfigError("coherent_mi_cm: q_active out of [1, M_T]");
    }
    if (!(c.modulus2 >= 0.0)) throw ConfigError("coherent_mi_cm: modulus2 must be >= 0");
    if (!(c.gamma >= 1.0)) throw ConfigError("coherent_mi_cm: gamma must be >= 1");
    if (c.q_active > q_max) q_max = c.q_active;
  }
  if (phase_model == PhaseModel::kUniformPsk && psk_order < 2) {
    throw ConfigError("coherent_mi_cm: PSK order must be >= 2");
  }
  if (mc.outer < 1 || mc.inner < 1) {
    throw ConfigError("coherent_mi_cm: sample counts must be >= 1");
  }

  const int mr = spec.mr();
  const int mt = spec.mt();
  const int n_in = mc.inner;
  const int n_cand = static_cast<int>(cands.size());

  std::vector<double> amp(n_cand);
  std::vector<double> cv_coef(n_cand);
  std::vector<double> sig_energy(n_cand);
  double rx_sum = 0.0;
  for (int r = 0; r < spec.mr(); ++r) rx_sum += spec.rx_eigs[r];
  for (int c = 0; c < n_cand; ++c) {
    amp[c] = std::sqrt(cands[c].gamma * cands[c].modulus2);
    double lam_active = 0.0;
    for (int t = 0; t < cands[c].q_active; ++t) lam_active += spec.tx_eigs[t];
    // Mean received signal energy per slot; the control variates' variance
    // grows with it while the raw estimator's shrinks, so the coefficient
    // backs off as 1/(1 + energy). Any coefficient that depends only on
    // the candidate parameters keeps every variate exactly zero-mean.
    sig_energy[c] = cands[c].gamma * cands[c].modulus2 * lam_active * rx_sum;
    cv_coef[c] = 1.0 / (1.0 + sig_energy[c]);
  }

  // vals[c * outer + i]: per-candidate slot so writes are race-free.
  std::vector<double> vals(static_cast<std::size_t>(n_cand) * mc.outer);

  parallel_for(static_cast<std::size_t>(mc.outer), mc.threads, [&](std::size_t i) {
    // Effective channel columns a[r][t] = sqrt(sigma_r lambda_t) h[r][t].
    std::vector<std::complex<double>> a(static_cast<std::size_t>(mr) * q_max);
    for (int r = 0; r < mr; ++r) {
      for (int t = 0; t < q_max; ++t) {
        const auto h = draw_cn(mc.seed, i, kTagChannel,
                               static_cast<std::uint64_t>(r) * mt + t);
        a[static_cast<std::size_t>(r) * q_max + t] =
            std::sqrt(spec.rx_eigs[r] * spec.tx_eigs[t]) * h;
      }
    }
    std::vector<std::complex<double>> w(mr);
    double w_norm2 = 0.0;
    for (int r = 0; r < mr; ++r) {
      w[r] = draw_cn(mc.seed, i, kTagNoise, static_cast<std::uint64_t>(r));
      w_norm2 += std::norm(w[r]);
    }

    // prefix[t][r] = sum_{u <= t} a[r][u] e^{j phi_u}: every candidate's
    // noiseless signal is amp_c * prefix[q_c - 1][.].
    std::vector<std::complex<double>> prefix(static_cast<std::size_t>(q_max) * mr);
    const auto fill_prefix = [&](int j) {
      std::complex<double> unit;
      for (int t = 0; t < q_max; ++t) {
        const double ph = draw_phase(mc.seed, i, static_cast<std::uint64_t>(j) * mt + t,
                                     phase_model, psk_order);
        unit = {std::cos(ph), std::sin(ph)};
        for (int r = 0; r < mr; ++r) {
          const auto term = a[static_cast<std::size_t>(r) * q_max + t] * unit;
          prefix[static_cast<std::size_t>(t) * mr + r] =
              (t == 0 ? term : prefix[static_cast<std::size_t>(t - 1) * mr + r] + term);
        }
      }
    };

    std::vector<std::complex<double>> y(static_cast<std::size_t>(n_cand) * mr);
    std::vector<double> cv(n_cand);
    fill_prefix(0);
    for (int c = 0; c < n_cand; ++c) {
      const std::complex<double>* sig = &prefix[static_cast<std::size_t>(cands[c].q_active - 1) * mr];
      double cvc = 0.0;
      for (int r = 0; r < mr; ++r) {
        const std::complex<double> s0 = amp[c] * sig[r];
        y[static_cast<std::size_t>(c) * mr + r] = s0 + w[r];
        cvc += 2.0 * (std::conj(w[r]) * s0).real();
      }
      cv[c] = cvc;
    }

    // z_j = ||y - s_j||^2 - ||w||^2 = D_j + L_j with D_j = ||s_0 - s_j||^2
    // and L_j = 2 Re<w, s_0 - s_j>; z_0 = 0 (transmitted symbol).
    std::vector<double> z_min(n_cand, 0.0);
    std::vector<double> z(static_cast<std::size_t>(n_cand) * (n_in + 1), 0.0);
    std::vector<double> sum_l(n_cand, 0.0), sum_l2(n_cand, 0.0);
    std::vector<double> sum_d(n_cand, 0.0), sum_dl(n_cand, 0.0);
    for (int j = 1; j <= n_in; ++j) {
      fill_prefix(j);
      for (int c = 0; c < n_cand; ++c) {
        const std::complex<double>* sig = &prefix[static_cast<std::size_t>(cands[c].q_active - 1) * mr];
        const std::complex<double>* yc = &y[static_cast<std::size_t>(c) * mr];
        double dist = 0.0, wdot = 0.0;
        for (int r = 0; r < mr; ++r) {
          const std::complex<double> sj = amp[c] * sig[r];
          dist += std::norm(yc[r] - sj);
          wdot += 2.0 * (std::conj(w[r]) * sj).real();
        }
        const double zj = dist - w_norm2;
        const double lj = cv[c] - wdot;
        const double dj = zj - lj;
        sum_l[c] += lj;
        sum_l2[c] += lj * lj;
        sum_d[c] += dj;
        sum_dl[c] += dj * lj;
        z[static_cast<std::size_t>(c) * (n_in + 1) + j] = zj;
        if (zj < z_min[c]) z_min[c] = zj;
      }
    }
    for (int c = 0; c < n_cand; ++c) {
      const double* zc = &z[static_cast<std::size_t>(c) * (n_in + 1)];
      double sum = 0.0;
      for (int j = 0; j <= n_in; ++j) sum += std::exp(z_min[c] - zc[j]);
      const double info =
          z_min[c] + std::log(static_cast<double>(n_in) + 1.0) - std::log(sum);
      // Expanding info = m1 - m2 + m1^2/2 + O(z^3) in the small z_j gives
      // the fluctuation terms below; each is paired with an exact mean
      // (E L_j = 0, E L_j^2 = 2 D_j, E D_j L_j = 0, and over noise, phases
      // and channel together E (sum_j L_j)^2 = 2 N (N+1) sig_energy), so
      // every correction has zero mean and the estimate's expectation is
      // untouched. In the expansion the mixture's second-order mean eats
      // the first-order distance term, so after these corrections the
      // leading fluctuation left is the O(sig_energy^2) remainder; in
      // particular the channel realization's effect on the conditional
      // mutual information, dominant in the wideband regime, is gone.
      const double np1 = static_cast<double>(n_in) + 1.0;
      const double b = cv_coef[c];
      const double first = sum_l[c] / np1;
      const double lsum_mean2 =
          2.0 * static_cast<double>(n_in) * np1 * sig_energy[c];
      const double second = -(sum_l2[c] - 2.0 * sum_d[c] + 2.0 * sum_dl[c]) / (2.0 * np1) +
                            ((sum_l[c] * sum_l[c] - lsum_mean2) +
                             2.0 * sum_d[c] * sum_l[c]) /
                                (2.0 * np1 * np1);
      vals[static_cast<std::size_t>(c) * mc.outer + i] =
          info - first * b - second * b * b;
    }
  });

  std::vector<McEstimate> out(n_cand);
  if (samples) samples->assign(n_cand, {});
  for (int c = 0; c < n_cand; ++c) {
    std::vector<double> sv(vals.begin() + static_cast<std::ptrdiff_t>(c) * mc.outer,
                           vals.begin() + static_cast<std::ptrdiff_t>(c + 1) * mc.outer);
    out[c] = reduce_samples(sv, mc.confidence);
    if (samples) (*samples)[c] = std::move(sv);
  }
  return out;
}

McEstimate coherent_mi_cm(const SpatialSpectrum& spec, const CmInputSpec& cm,
                          double gamma, const McSpec& mc,
                          std::vector<double>* samples) {
  std::vector<MiCandidate> cand{{cm.q_active, gamma, cm.modulus2}};
  std::vector<std::vector<double>> sm;
  auto est = coherent_mi_cm_multi(spec, cand, cm.phase_model, cm.psk_order, mc,
                                  samples ? &sm : nullptr);
  if (samples) *samples = std::move(sm[0]);
  return est[0];
}

}  // namespace peakcap
