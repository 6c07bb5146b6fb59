#include <cmath>
#include <complex>
#include <string>

#include "peakcap/errors.hpp"
#include "peakcap/lower_bound.hpp"
#include "peakcap/quadrature.hpp"

namespace peakcap {

namespace {

// Brick kernel entry t(m): Fourier coefficient of the flat delay profile,
// (1/(TF spread)) * sin(2 pi tau0 F m) / (pi m), with the m = 0 limit
// 2 tau0 F / (TF spread).
double brick_kernel_entry(double tau0f, double tf, double spread, std::int64_t m) {
  if (m == 0) return 2.0 * tau0f / (tf * spread);
  const double mm = static_cast<double>(m);
  return std::sin(2.0 * M_PI * tau0f * mm) / (M_PI * mm) / (tf * spread);
}

Eigen::MatrixXd brick_kernel_matrix(double tau0f, double tf, double spread,
                                    std::int64_t k) {
  Eigen::MatrixXd m(k, k);
  std::vector<double> t(static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) {
    t[static_cast<std::size_t>(i)] = brick_kernel_entry(tau0f, tf, spread, i);
  }
  for (std::int64_t r = 0; r < k; ++r) {
    for (std::int64_t c = 0; c < k; ++c) {
      m(r, c) = t[static_cast<std::size_t>(r > c ? r - c : c - r)];
    }
  }
  return m;
}

// integral of (a + b phi) e^{j 2 pi m phi} over [p, q], the exact Fourier
// coefficient of one linear-in-phi segment of the interpolant.
std::complex<double> linear_segment_fourier(double a, double b, double p, double q,
                                            std::int64_t m) {
  if (m == 0) {
    return {a * (q - p) + 0.5 * b * (q * q - p * p), 0.0};
  }
  const double omega = 2.0 * M_PI * static_cast<double>(m);
  const std::complex<double> jw{0.0, omega};
  const std::complex<double> eq{std::cos(omega * q), std::sin(omega * q)};
  const std::complex<double> ep{std::cos(omega * p), std::sin(omega * p)};
  const std::complex<double> base = (eq - ep) / jw;
  const std::complex<double> lin = (q * eq - p * ep) / jw + (eq - ep) / (omega * omega);
  return a * base + b * lin;
}

std::vector<double> clamped_eigs(const Eigen::VectorXd& raw) {
  std::vector<double> e(static_cast<std::size_t>(raw.size()));
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    e[static_cast<std::size_t>(i)] = raw[i] > 0.0 ? raw[i] : 0.0;
  }
  return e;
}

}  // namespace

FreqSpectralMatrix build_freq_spectral_matrix(const ScatteringFunction& sf,
                                              const GridParams& g, std::int64_t k,
                                              PenaltyPath path,
                                              const QuadratureSpec& quad) {
  if (k < 1) throw ConfigError("freq spectral matrix: K must be >= 1");
  if (path == PenaltyPath::kToeplitzExact && k > kExactToeplitzHardCap) {
    throw ConfigError("freq spectral matrix: exact path capped at K = " +
                      std::to_string(kExactToeplitzHardCap) +
                      ", request the circulant approximation");
  }
  validate_grid(sf, g);

  FreqSpectralMatrix fsm;
  fsm.k = k;
  fsm.path = path;
  fsm.band_halfwidth = sf.nu0_hz() * g.t_s;
  const double tf = g.tf();

  fsm.circulant_integral = [sf, tf, k, quad](double c) {
    return static_cast<double>(k) * tf * log_penalty_integral(sf, c / tf, quad);
  };

  if (sf.is_brick()) {
    fsm.factored_brick = true;
    fsm.theta_breaks = {-fsm.band_halfwidth, fsm.band_halfwidth};
    const double tau0f = sf.tau0_s() * g.f_hz;
    const double spread = sf.spread();
    const double band = fsm.band_halfwidth;
    if (path == PenaltyPath::kToeplitzExact) {
      const Eigen::MatrixXd kernel = brick_kernel_matrix(tau0f, tf, spread, k);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kernel, Eigen::EigenvaluesOnly);
      if (es.info() == Eigen::Success) {
        fsm.kernel_eigs = es.eigenvalues();
      }
      // On failure kernel_eigs stays empty and the penalty falls back to
      // the circulant path with a flag.
    }
    fsm.matrix_at = [tau0f, tf, spread, k, band](double theta) {
      if (std::fabs(theta) > band) return Eigen::MatrixXcd::Zero(k, k).eval();
      return Eigen::MatrixXcd(brick_kernel_matrix(tau0f, tf, spread, k)
                                  .cast<std::complex<double>>());
    };
    return fsm;
  }

  const SampledGrid grid = sf.as_grid();
  for (double nu : grid.nu_hz) fsm.theta_breaks.push_back(nu * g.t_s);
  const double t_s = g.t_s;
  const double f_hz = g.f_hz;
  fsm.matrix_at = [grid, t_s, f_hz, tf, k](double theta) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(k, k);
    const double nu = theta / t_s;
    if (nu < grid.nu_hz.front() || nu > grid.nu_hz.back()) return m;
    // Fixed theta: c(theta, .) is piecewise linear in phi with breakpoints
    // at the tau lattice, so each Toeplitz generator entry is an exact sum
    // of linear-segment Fourier coefficients.
    std::vector<std::complex<double>> gen(static_cast<std::size_t>(k));
    for (std::int64_t mdiag = 0; mdiag < k; ++mdiag) {
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t j = 0; j + 1 < grid.tau_s.size(); ++j) {
        const double p = grid.tau_s[j] * f_hz;
        const double q = grid.tau_s[j + 1] * f_hz;
        const double vp = grid.at(nu, grid.tau_s[j]) / tf;
        const double vq = grid.at(nu, grid.tau_s[j + 1]) / tf;
        const double b = (vq - vp) / (q - p);
        const double a = vp - b * p;
        acc += linear_segment_fourier(a, b, p, q, mdiag);
      }
      gen[static_cast<std::size_t>(mdiag)] = acc;
    }
    for (std::int64_t r = 0; r < k; ++r) {
      for (std::int64_t c = 0; c < k; ++c) {
        const std::int64_t d = r - c;
        m(r, c) = d >= 0 ? gen[static_cast<std::size_t>(d)]
                         : std::conj(gen[static_cast<std::size_t>(-d)]);
      }
    }
    return m;
  };
  return fsm;
}

double toeplitz_penalty(const FreqSpectralMatrix& fsm, double c,
                        bool* used_circulant) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw ConfigError("toeplitz_penalty: c must be finite and >= 0");
  }
  if (used_circulant) *used_circulant = false;
  if (c == 0.0) return 0.0;
  if (fsm.path == PenaltyPath::kCirculantApprox) {
    if (used_circulant) *used_circulant = true;
    return fsm.circulant_integral(c);
  }
  if (fsm.factored_brick) {
    if (fsm.kernel_eigs.size() == 0) {
      if (used_circulant) *used_circulant = true;
      return fsm.circulant_integral(c);
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < fsm.kernel_eigs.size(); ++i) {
      const double mu = fsm.kernel_eigs[i];
      if (mu > 0.0) sum += std::log1p(c * mu);
    }
    return 2.0 * fsm.band_halfwidth * sum;
  }
  // General exact path: eigendecompose C(theta) at each quadrature node.
  bool eig_failed = false;
  const auto integrand = [&](double theta) {
    const Eigen::MatrixXcd m = fsm.matrix_at(theta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      eig_failed = true;
      return 0.0;
    }
    double sum = 0.0;
    for (const double mu : clamped_eigs(es.eigenvalues())) {
      if (mu > 0.0) sum += std::log1p(c * mu);
    }
    return sum;
  };
  const double value = integrate_cells_1d(integrand, fsm.theta_breaks,
                                          QuadratureSpec{}).value;
  if (eig_failed) {
    if (used_circulant) *used_circulant = true;
    return fsm.circulant_integral(c);
  }
  return value;
}

PenaltyPair toeplitz_penalty_both(const ScatteringFunction& sf,
                                  const GridParams& g, std::int64_t k, double c,
                                  const QuadratureSpec& quad) {
  const auto exact = build_freq_spectral_matrix(sf, g, k, PenaltyPath::kToeplitzExact, quad);
  PenaltyPair out;
  bool fell_back = false;
  out.exact = toeplitz_penalty(exact, c, &fell_back);
  if (fell_back) throw NumericsError("toeplitz_penalty_both: exact path unavailable");
  out.circulant = exact.circulant_integral(c);
  return out;
}

}  // namespace peakcap
