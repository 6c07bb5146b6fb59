#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "peakcap/errors.hpp"
#include "peakcap/spatial.hpp"

using namespace peakcap;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::MatrixXcd random_psd(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  return g * g.adjoint();
}

// Mixing toward the uniform vector is a doubly stochastic average, so the
// original always majorizes the result.
std::vector<double> mix_to_uniform(const std::vector<double>& a, double theta) {
  const double mean =
      std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
  std::vector<double> b(a.size());
  for (size_t i = 0; i < a.size(); ++i) b[i] = theta * a[i] + (1.0 - theta) * mean;
  return b;
}

std::vector<double> random_spectrum(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(static_cast<size_t>(n));
  double sum = 0.0;
  for (double& x : v) {
    x = std::exp(gauss(rng));
    sum += x;
  }
  for (double& x : v) x *= n / sum;
  std::sort(v.rbegin(), v.rend());
  return v;
}

}  // namespace

TEST_CASE("eigenvalue lists are sorted and trace-normalized", "[spatial]") {
  const auto s = SpatialSpectrum::from_eigs({0.3, 1.7, 1.0}, {1.0, 1.0, 1.0});
  CHECK(s.tx_eigs == std::vector<double>{1.7, 1.0, 0.3});
  CHECK(s.lambda_max() == 1.7);
  CHECK(s.sigma_max() == 1.0);
  CHECK(s.warnings.empty());

  // Off-trace inputs are rescaled to sum to the antenna count, with a
  // warning once the deviation is more than rounding noise.
  const auto r = SpatialSpectrum::from_eigs({2.0, 1.0, 0.5}, {1.0, 1.0});
  const double sum = r.tx_eigs[0] + r.tx_eigs[1] + r.tx_eigs[2];
  CHECK_THAT(sum, WithinRel(3.0, 1e-12));
  CHECK_THAT(r.tx_eigs[0], WithinRel(2.0 * 3.0 / 3.5, 1e-12));
  CHECK_FALSE(r.warnings.empty());

  CHECK_THROWS_AS(SpatialSpectrum::from_eigs({}, {1.0}), ConfigError);
  CHECK_THROWS_AS(SpatialSpectrum::from_eigs({1.0, -0.5}, {1.0}), ConfigError);
  CHECK_THROWS_AS(SpatialSpectrum::from_eigs({0.0, 0.0}, {1.0}), ConfigError);
}

TEST_CASE("correlation matrices reduce to their spectra", "[spatial]") {
  const int n = 3;
  Eigen::MatrixXcd u(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      u(a, b) = std::polar(1.0 / std::sqrt(3.0), 2.0 * M_PI * a * b / n);
  Eigen::VectorXd d(n);
  d << 1.7, 1.0, 0.3;
  CorrelationMatrix tx{u * d.asDiagonal() * u.adjoint()};
  CorrelationMatrix rx{Eigen::MatrixXcd::Identity(n, n)};

  const auto s = spectrum_from_matrices(tx, rx);
  REQUIRE(s.mt() == 3);
  CHECK_THAT(s.tx_eigs[0], WithinRel(1.7, 1e-9));
  CHECK_THAT(s.tx_eigs[1], WithinRel(1.0, 1e-9));
  CHECK_THAT(s.tx_eigs[2], WithinRel(0.3, 1e-9));
  CHECK_THAT(s.rx_eigs[0], WithinRel(1.0, 1e-12));

  // Non-Hermitian input is rejected.
  Eigen::MatrixXcd skew = Eigen::MatrixXcd::Identity(n, n);
  skew(0, 1) = std::complex<double>(0.5, 0.0);
  CHECK_THROWS_AS(spectrum_from_matrices(CorrelationMatrix{skew}, rx), ConfigError);

  // Indefinite input is rejected; tiny negative rounding noise is clamped.
  Eigen::MatrixXcd indef = Eigen::MatrixXcd::Identity(n, n);
  indef(0, 0) = -0.5;
  CHECK_THROWS_AS(spectrum_from_matrices(CorrelationMatrix{indef}, rx), ConfigError);
}

TEST_CASE("majorization compares descending prefix sums", "[spatial]") {
  CHECK(majorizes({2.6, 0.3, 0.1}, {1.0, 1.0, 1.0}));
  CHECK_FALSE(majorizes({1.0, 1.0, 1.0}, {2.6, 0.3, 0.1}));
  CHECK(majorizes({1.7, 1.0, 0.3}, {1.7, 1.0, 0.3}));
  CHECK(majorizes({2.6, 0.3, 0.1}, {1.7, 1.0, 0.3}));

  // Crossing prefix sums: incomparable in both directions.
  CHECK_FALSE(majorizes({2.0, 0.9, 0.1}, {1.8, 1.2, 0.0}));
  CHECK_FALSE(majorizes({1.8, 1.2, 0.0}, {2.0, 0.9, 0.1}));

  CHECK_THROWS_AS(majorizes({1.0, 1.0}, {1.0, 1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(majorizes({1.5, 0.5}, {1.5, 1.0}), ConfigError);
  CHECK_THROWS_AS(majorizes({}, {}), ConfigError);
}

TEST_CASE("averaging toward uniform is always majorized", "[spatial]") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> th(0.1, 0.9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const auto a = random_spectrum(rng, n);
    const auto b = mix_to_uniform(a, th(rng));
    const auto c = mix_to_uniform(b, th(rng));
    CHECK(majorizes(a, b));
    CHECK(majorizes(b, c));
    CHECK(majorizes(a, c));  // transitivity along the chain
    const std::vector<double> uniform(a.size(), 1.0);
    CHECK(majorizes(a, uniform));
  }
}

TEST_CASE("hadamard determinant bound holds for random PSD pairs", "[spatial]") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto a = random_psd(rng, n);
    const auto b = random_psd(rng, n);
    const auto chk = hadamard_det_inequality(a, b);
    CHECK(chk.holds);
    CHECK(chk.lhs >= chk.rhs - 1e-9 * std::max(1.0, std::abs(chk.rhs)));
  }
}

TEST_CASE("zeroed diagonal entries reduce the hadamard determinant", "[spatial]") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const int keep = 1 + static_cast<int>(rng() % (n - 1));
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    a.topLeftCorner(keep, keep) = random_psd(rng, keep);
    const auto b = random_psd(rng, n);

    const auto chk = hadamard_det_inequality(a, b);
    CHECK(chk.holds);

    // Rows and columns with zero diagonal drop out of the entrywise
    // product, so the determinant equals the reduced-block value.
    const Eigen::MatrixXcd red =
        a.topLeftCorner(keep, keep).cwiseProduct(b.topLeftCorner(keep, keep));
    const double reduced =
        (Eigen::MatrixXcd::Identity(keep, keep) + red).determinant().real();
    CHECK_THAT(chk.lhs, WithinRel(reduced, 1e-9));
  }
}

TEST_CASE("hadamard check validates shapes", "[spatial]") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(hadamard_det_inequality(a, b), ConfigError);
  CHECK_THROWS_AS(hadamard_det_inequality(Eigen::MatrixXcd::Zero(2, 3), b),
                  ConfigError);
}
