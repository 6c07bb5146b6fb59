#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "peakcap/bound_types.hpp"
#include "peakcap/scattering.hpp"
#include "peakcap/spatial.hpp"

namespace peakcap {

enum class PhaseModel {
  kContinuousUniform,  // phase uniform on [0, 2*pi)
  kUniformPsk,         // uniform over psk_order constellation points
};

// Constant-modulus input description: the first q_active transmit
// eigendirections carry symbols of fixed energy modulus2, the rest are off.
struct CmInputSpec {
  int q_active = 1;
  double modulus2 = 0.0;  // per-slot symbol energy, >= 0
  PhaseModel phase_model = PhaseModel::kContinuousUniform;
  int psk_order = 8;
};

// Monte Carlo budget. Substreams are keyed by (seed, outer index), so the
// estimate is bit-identical for any thread count.
struct McSpec {
  int outer = 10000;      // channel/noise draws
  int inner = 512;        // mixture samples per outer draw
  std::uint64_t seed = 1;
  double confidence = 0.05;  // target half-width, nats per slot
  int threads = 0;           // 0 = hardware default
};

struct McEstimate {
  double value = 0.0;       // nats per slot
  double half_width = 0.0;  // 95% normal-theory half-width
  bool converged = true;    // half_width <= confidence target
};

// Estimates the coherent mutual information per slot of the memoryless
// correlated fading channel under the constant-modulus input, scaled by the
// time-sharing factor gamma. The conditional output density is averaged
// over inner fresh input draws plus the realized input (the realized term
// keeps the estimate a true lower bound instead of diverging at high SNR),
// and layered zero-mean control variates remove the dominant low-SNR
// noise, including the channel realization's effect on the conditional
// information. Per-sample values land in *samples (resized) when given.
McEstimate coherent_mi_cm(const SpatialSpectrum& spec, const CmInputSpec& cm,
                          double gamma, const McSpec& mc,
                          std::vector<double>* samples = nullptr);

// One (q, gamma, energy) combination for the batched estimator below.
struct MiCandidate {
  int q_active = 1;
  double gamma = 1.0;
  double modulus2 = 0.0;
};

// Evaluates several candidates in one pass over shared channel, noise and
// phase draws. Each returned estimate is bit-identical to a standalone
// coherent_mi_cm call with the same seed (draws are addressed, not
// sequenced), and the shared draws make candidate differences low-variance.
std::vector<McEstimate> coherent_mi_cm_multi(
    const SpatialSpectrum& spec, const std::vector<MiCandidate>& cands,
    PhaseModel phase_model, int psk_order, const McSpec& mc,
    std::vector<std::vector<double>>* samples = nullptr);

enum class PenaltyPath { kToeplitzExact, kCirculantApprox };

inline constexpr int kExactToeplitzHardCap = 4096;

// Matrix-valued spectral density C(theta) of the K frequency slots,
// [C(theta)]_{k,k'} = integral of c(theta, phi) e^{j2pi(k-k')phi} dphi.
// For the brick profile it factorizes into a Doppler band indicator times a
// fixed Toeplitz kernel whose eigenvalues are precomputed at build time.
struct FreqSpectralMatrix {
  std::int64_t k = 1;
  PenaltyPath path = PenaltyPath::kCirculantApprox;
  bool factored_brick = false;
  double band_halfwidth = 0.0;     // Doppler support |theta| <= nu0*T
  Eigen::VectorXd kernel_eigs;     // factored-brick kernel spectrum
  std::vector<double> theta_breaks;  // kinks of theta -> C(theta)
  std::function<Eigen::MatrixXcd(double)> matrix_at;  // dense C(theta)
  std::function<double(double)> circulant_integral;   // c -> K * unit-square integral
};

// Builds C(theta); requesting the exact path above the hard cap is an
// error (the dense eigendecomposition budget is the binding constraint).
FreqSpectralMatrix build_freq_spectral_matrix(
    const ScatteringFunction& sf, const GridParams& g, std::int64_t k,
    PenaltyPath path, const QuadratureSpec& quad = QuadratureSpec{});

// integral over theta in [-1/2,1/2] of log det(I_K + c C(theta)), nats per
// time-slot per block of K tones. Monotone nondecreasing and concave in c.
// If the exact path's eigendecomposition fails the circulant value is
// returned and *used_circulant set.
double toeplitz_penalty(const FreqSpectralMatrix& fsm, double c,
                        bool* used_circulant = nullptr);

struct PenaltyPair {
  double exact = 0.0;
  double circulant = 0.0;
};

// Evaluates both representations side by side (exact must be feasible).
PenaltyPair toeplitz_penalty_both(const ScatteringFunction& sf,
                                  const GridParams& g, std::int64_t k, double c,
                                  const QuadratureSpec& quad = QuadratureSpec{});

struct LowerBoundOptions {
  int exact_toeplitz_max_k = 512;  // circulant approximation beyond this K
  double gamma_xtol = 1e-3;        // golden-section interval target on gamma
  PhaseModel phase_model = PhaseModel::kContinuousUniform;
  int psk_order = 8;
  QuadratureSpec quad{};
};

// Achievable-rate lower bound (nats/s): best over the active-eigendirection
// count q in q_range and the time-sharing factor gamma in [1, beta] of
//   B/(gamma TF) * MI_per_slot - 1/(gamma T) * sum_{t<q, r} penalty(c_{t,r}),
// with c_{t,r} = lambda_t sigma_r gamma P TF / (q B). K = round(B/F) slots.
BoundValue lower_bound_l1(const ScatteringFunction& sf, const GridParams& g,
                          const SpatialSpectrum& spec, const LinkBudget& lb,
                          double bandwidth_hz, const std::vector<int>& q_range,
                          const McSpec& mc,
                          const LowerBoundOptions& opt = LowerBoundOptions{});

// Same evaluation reported for every q in q_range (one entry per q, same
// order); sweeps plot the per-q curves and the batched Monte Carlo pass
// makes this no more expensive than the best-q value alone. When given,
// *mi_samples receives the per-draw mutual-information samples of the
// final pass (one vector per q, nats per slot); the shared draws make
// cross-q sample differences low-variance.
std::vector<BoundValue> lower_bound_l1_per_q(
    const ScatteringFunction& sf, const GridParams& g,
    const SpatialSpectrum& spec, const LinkBudget& lb, double bandwidth_hz,
    const std::vector<int>& q_range, const McSpec& mc,
    const LowerBoundOptions& opt = LowerBoundOptions{},
    std::vector<std::vector<double>>* mi_samples = nullptr);

// Closed-form wideband approximation of the lower bound (nats/s) at fixed
// q: linear gain term, quadratic peakiness correction, scattering penalty;
// maximized over gamma in [1, beta].
BoundValue lb_approx(const ScatteringFunction& sf, const GridParams& g,
                     const SpatialSpectrum& spec, const LinkBudget& lb,
                     double bandwidth_hz, int q,
                     const QuadratureSpec& quad = QuadratureSpec{});

}  // namespace peakcap
