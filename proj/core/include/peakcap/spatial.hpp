#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace peakcap {

// Eigenvalue description of the transmit/receive antenna correlations.
// Both lists are stored descending and sum to their antenna counts (the
// trace normalization that keeps total average gain fixed).
struct SpatialSpectrum {
  std::vector<double> tx_eigs;  // lambda_1 >= ... >= lambda_{MT} >= 0
  std::vector<double> rx_eigs;  // sigma_1 >= ... >= sigma_{MR} >= 0
  std::vector<std::string> warnings;  // e.g. trace rescaling records

  int mt() const { return static_cast<int>(tx_eigs.size()); }
  int mr() const { return static_cast<int>(rx_eigs.size()); }
  double lambda_max() const { return tx_eigs.front(); }
  double sigma_max() const { return rx_eigs.front(); }

  // Validates counts, nonnegativity and trace sums; sorts descending.
  // Sums off by more than 1e-6 relative are rescaled with a warning record.
  static SpatialSpectrum from_eigs(std::vector<double> tx, std::vector<double> rx);
};

struct CorrelationMatrix {
  Eigen::MatrixXcd m;
};

// Extracts the eigenvalue description from dense Hermitian PSD correlation
// matrices. Hermiticity is enforced to 1e-12 absolute; eigenvalues in
// [-1e-10, 0) are clamped to zero, anything lower is rejected.
SpatialSpectrum spectrum_from_matrices(const CorrelationMatrix& tx,
                                       const CorrelationMatrix& rx);

// Majorization preorder on equal-length, equal-sum vectors: descending
// prefix sums of a dominate those of b (1e-9 absolute slack per prefix).
// Sum mismatch beyond 1e-9 relative is rejected.
bool majorizes(const std::vector<double>& a, const std::vector<double>& b);

struct HadamardDetCheck {
  bool holds = false;
  double lhs = 0.0;  // det(I + A .* B), entrywise product
  double rhs = 0.0;  // det(I + diag(A) B)
};

// Determinant comparison underlying the correlation monotonicity of the
// bounds: for PSD A, B, det(I + A .* B) >= det(I + diag(A) B).
HadamardDetCheck hadamard_det_inequality(const Eigen::MatrixXcd& a,
                                         const Eigen::MatrixXcd& b);

}  // namespace peakcap
