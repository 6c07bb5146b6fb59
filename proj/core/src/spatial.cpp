#include "peakcap/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "peakcap/errors.hpp"

namespace peakcap {

namespace {

// Sorts descending, clamps tiny negatives, rescales the sum to the count.
std::vector<double> condition_eigs(std::vector<double> e, const char* side,
                                   std::vector<std::string>* warnings) {
  if (e.empty()) throw ConfigError(std::string(side) + " eigenvalue list is empty");
  for (double& v : e) {
    if (!std::isfinite(v)) throw ConfigError(std::string(side) + " eigenvalues must be finite");
    if (v < 0.0) {
      if (v < -1e-10) {
        throw ConfigError(std::string(side) + " correlation is not PSD (eigenvalue " +
                          std::to_string(v) + ")");
      }
      v = 0.0;
    }
  }
  std::sort(e.begin(), e.end(), std::greater<double>());
  const double n = static_cast<double>(e.size());
  double sum = 0.0;
  for (double v : e) sum += v;
  if (!(sum > 0.0)) throw ConfigError(std::string(side) + " eigenvalues sum to zero");
  if (std::fabs(sum - n) > 1e-6 * n && warnings) {
    warnings->push_back(std::string(side) + " trace " + std::to_string(sum) +
                        " rescaled to " + std::to_string(e.size()));
  }
  // Always make the sum exact; tiny drifts would otherwise leak into every
  // downstream trace-dependent identity.
  const double scale = n / sum;
  for (double& v : e) v *= scale;
  return e;
}

void check_hermitian(const Eigen::MatrixXcd& m, const char* side) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ConfigError(std::string(side) + " correlation matrix must be square and nonempty");
  }
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-12) {
    throw ConfigError(std::string(side) + " correlation matrix is not Hermitian (max dev " +
                      std::to_string(dev) + ")");
  }
}

std::vector<double> eigs_of(const Eigen::MatrixXcd& m, const char* side) {
  check_hermitian(m, side);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericsError(std::string("eigendecomposition failed on ") + side +
                        " correlation matrix");
  }
  std::vector<double> e(es.eigenvalues().data(),
                        es.eigenvalues().data() + es.eigenvalues().size());
  // Reconstruction check: eigenvalue sum must reproduce the trace.
  double sum = 0.0;
  for (double v : e) sum += v;
  const double tr = m.trace().real();
  if (std::fabs(sum - tr) > 1e-8 * std::fmax(1.0, std::fabs(tr))) {
    throw NumericsError(std::string(side) + " eigenvalue sum does not match trace");
  }
  return e;
}

}  // namespace

SpatialSpectrum SpatialSpectrum::from_eigs(std::vector<double> tx,
                                           std::vector<double> rx) {
  SpatialSpectrum s;
  s.tx_eigs = condition_eigs(std::move(tx), "tx", &s.warnings);
  s.rx_eigs = condition_eigs(std::move(rx), "rx", &s.warnings);
  return s;
}

SpatialSpectrum spectrum_from_matrices(const CorrelationMatrix& tx,
                                       const CorrelationMatrix& rx) {
  SpatialSpectrum s;
  s.tx_eigs = condition_eigs(eigs_of(tx.m, "tx"), "tx", &s.warnings);
  s.rx_eigs = condition_eigs(eigs_of(rx.m, "rx"), "rx", &s.warnings);
  return s;
}

bool majorizes(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw ConfigError("majorizes: vectors must be nonempty and of equal length");
  }
  std::vector<double> sa = a, sb = b;
  std::sort(sa.begin(), sa.end(), std::greater<double>());
  std::sort(sb.begin(), sb.end(), std::greater<double>());
  double suma = 0.0, sumb = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) { suma += sa[i]; sumb += sb[i]; }
  const double scale = std::fmax(std::fabs(suma), std::fabs(sumb));
  if (std::fabs(suma - sumb) > 1e-9 * std::fmax(scale, 1.0)) {
    throw ConfigError("majorizes: vector sums differ beyond tolerance");
  }
  double pa = 0.0, pb = 0.0;
  for (std::size_t i = 0; i + 1 < sa.size(); ++i) {
    pa += sa[i];
    pb += sb[i];
    if (pa < pb - 1e-9) return false;
  }
  return true;
}

HadamardDetCheck hadamard_det_inequality(const Eigen::MatrixXcd& a,
                                         const Eigen::MatrixXcd& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() ||
      a.rows() == 0) {
    throw ConfigError("hadamard_det_inequality: matrices must be square, same size");
  }
  const auto n = a.rows();
  const Eigen::MatrixXcd had = a.cwiseProduct(b);
  const Eigen::MatrixXcd diag_ab = a.diagonal().asDiagonal() * b;
  HadamardDetCheck out;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  out.lhs = (id + had).determinant().real();
  out.rhs = (id + diag_ab).determinant().real();
  out.holds = out.lhs >= out.rhs - 1e-9 * std::fmax(1.0, std::fabs(out.rhs));
  return out;
}

}  // namespace peakcap
