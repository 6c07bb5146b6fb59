#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "peakcap/asymptotics.hpp"
#include "peakcap/errors.hpp"
#include "peakcap/scattering.hpp"
#include "peakcap/spatial.hpp"
#include "test_support.hpp"

using namespace peakcap;
using Catch::Matchers::WithinRel;

TEST_CASE("wideband coefficient matches its closed form on the baseline",
          "[asymptotics]") {
  const auto sf = testsup::base_brick();
  const auto g = testsup::base_grid();
  const auto spec = testsup::uncorrelated3();
  const auto lb = testsup::base_link();

  const auto t = taylor_coefficient(sf, g, spec, lb);
  CHECK_THAT(t.kappa, WithinRel(1000.0, 1e-10));
  CHECK_THAT(t.threshold_beta, WithinRel(2.5e-3, 1e-10));
  CHECK(t.valid);

  const double p = lb.p_per_s;
  const double expect = 3.0 * (p * p) / 2.0 * (1.0 * 1000.0 - 1.25);
  CHECK_THAT(t.c1, WithinRel(expect, 1e-13));
  CHECK_THAT(t.c1, WithinRel(2.3784232499999998e19, 1e-13));
}

TEST_CASE("doubling the power quadruples the coefficient exactly",
          "[asymptotics]") {
  const auto sf = testsup::base_brick();
  const auto g = testsup::base_grid();
  const auto spec = testsup::uncorrelated3();

  const auto t1 = taylor_coefficient(sf, g, spec, LinkBudget{1.26e8, 1.0});
  const auto t2 = taylor_coefficient(sf, g, spec, LinkBudget{2.52e8, 1.0});
  CHECK(t2.c1 == 4.0 * t1.c1);
  CHECK(t2.kappa == t1.kappa);
  CHECK(t2.threshold_beta == t1.threshold_beta);
}

TEST_CASE("validity threshold is strict at the boundary", "[asymptotics]") {
  // Powers of two throughout, so every intermediate quantity is exact:
  // spread 1/2, kappa 2, TF 1, threshold 2 TF / kappa = 1 = beta.
  const auto sf = ScatteringFunction::brick(2.0, 1.0 / 16.0);
  const GridParams g{0.25, 4.0};
  const auto spec = testsup::uncorrelated3();
  const LinkBudget lb{1e8, 1.0};

  const auto t = taylor_coefficient(sf, g, spec, lb);
  CHECK(t.kappa == 2.0);
  CHECK(t.threshold_beta == 1.0);
  CHECK_FALSE(t.valid);
  CHECK(t.c1 == 1.5e16);  // 3 P^2 / 2, with beta kappa - TF = 1

  // Just past the threshold the expansion becomes admissible. Spread 0.72
  // keeps the matched TF = 1.25 grid inside the aliasing limits and puts the
  // threshold at 2 * 1.25 * 0.72 = 1.8.
  const auto near = ScatteringFunction::brick(360.0, 5e-4);
  const auto gg = matched_grid(near, 1.25);
  const auto low = taylor_coefficient(near, gg, spec, LinkBudget{1e8, 1.7});
  CHECK_THAT(low.threshold_beta, WithinRel(1.8, 1e-10));
  CHECK_FALSE(low.valid);
  const auto high = taylor_coefficient(near, gg, spec, LinkBudget{1e8, 2.0});
  CHECK(high.valid);
}

TEST_CASE("receive correlation raises the coefficient per majorization",
          "[asymptotics]") {
  const auto sf = testsup::base_brick();
  const auto g = testsup::base_grid();
  const auto lb = testsup::base_link();
  const auto uniform = testsup::uncorrelated3();
  const auto rx_corr = SpatialSpectrum::from_eigs({1.0, 1.0, 1.0}, {2.6, 0.3, 0.1});

  const auto rep = schur_order_check(rx_corr, uniform, sf, g, lb);
  CHECK(rep.tx == MajorizationVerdict::kEqual);
  CHECK(rep.rx == MajorizationVerdict::kAOverB);
  CHECK(rep.comparable);
  CHECK(rep.ordering_confirmed);
  CHECK(rep.c1_a > rep.c1_b);
  // sum sigma_r^2 scales from 3 to 2.6^2 + 0.3^2 + 0.1^2 = 6.86.
  CHECK_THAT(rep.c1_a / rep.c1_b, WithinRel(6.86 / 3.0, 1e-12));
}

TEST_CASE("transmit correlation acts through the top eigenvalue only",
          "[asymptotics]") {
  const auto sf = testsup::base_brick();
  const auto g = testsup::base_grid();
  const auto lb = testsup::base_link();
  const auto uniform = testsup::uncorrelated3();
  const auto tx_corr = SpatialSpectrum::from_eigs({1.7, 1.0, 0.3}, {1.0, 1.0, 1.0});

  const auto rep = schur_order_check(tx_corr, uniform, sf, g, lb);
  CHECK(rep.tx == MajorizationVerdict::kAOverB);
  CHECK(rep.rx == MajorizationVerdict::kEqual);
  CHECK(rep.comparable);
  CHECK(rep.ordering_confirmed);
  CHECK_THAT(rep.c1_a / rep.c1_b, WithinRel(1.7 * 1.7, 1e-12));

  // Moving mass among the non-top transmit eigenvalues changes nothing.
  // Both lists sum to exactly 3.0 in floating point so the trace
  // renormalization leaves the shared top eigenvalue bit-identical.
  const auto a = taylor_coefficient(
      sf, g, SpatialSpectrum::from_eigs({1.75, 1.0, 0.25}, {1.0, 1.0, 1.0}), lb);
  const auto b = taylor_coefficient(
      sf, g, SpatialSpectrum::from_eigs({1.75, 1.125, 0.125}, {1.0, 1.0, 1.0}),
      lb);
  CHECK(a.c1 == b.c1);
}

TEST_CASE("equal and incomparable spectra are classified correctly",
          "[asymptotics]") {
  const auto sf = testsup::base_brick();
  const auto g = testsup::base_grid();
  const auto lb = testsup::base_link();
  const auto uniform = testsup::uncorrelated3();

  const auto same = schur_order_check(uniform, uniform, sf, g, lb);
  CHECK(same.tx == MajorizationVerdict::kEqual);
  CHECK(same.rx == MajorizationVerdict::kEqual);
  CHECK(same.comparable);
  CHECK(same.ordering_confirmed);
  CHECK(same.c1_a == same.c1_b);

  // Partial-sum crossings in the transmit spectra: neither majorizes.
  const auto a = SpatialSpectrum::from_eigs({2.0, 0.9, 0.1}, {1.0, 1.0, 1.0});
  const auto b = SpatialSpectrum::from_eigs({1.8, 1.2, 0.0}, {1.0, 1.0, 1.0});
  const auto cross = schur_order_check(a, b, sf, g, lb);
  CHECK(cross.tx == MajorizationVerdict::kIncomparable);
  CHECK_FALSE(cross.comparable);
  CHECK_FALSE(cross.ordering_confirmed);

  // Sides ordered in opposite directions are not comparable either.
  const auto tx_corr = SpatialSpectrum::from_eigs({1.7, 1.0, 0.3}, {1.0, 1.0, 1.0});
  const auto rx_corr = SpatialSpectrum::from_eigs({1.0, 1.0, 1.0}, {2.6, 0.3, 0.1});
  const auto mixed = schur_order_check(tx_corr, rx_corr, sf, g, lb);
  CHECK(mixed.tx == MajorizationVerdict::kAOverB);
  CHECK(mixed.rx == MajorizationVerdict::kBOverA);
  CHECK_FALSE(mixed.comparable);

  const auto two = SpatialSpectrum::from_eigs({1.0, 1.0}, {1.0, 1.0});
  CHECK_THROWS_AS(schur_order_check(two, uniform, sf, g, lb), ConfigError);
}

TEST_CASE("scaled lower bound extrapolates to just below the coefficient",
          "[asymptotics]") {
  const auto sf = testsup::base_brick();
  const auto g = testsup::base_grid();
  const auto spec = testsup::uncorrelated3();
  const auto lb = testsup::base_link();

  const auto ladder = default_ratio_ladder(sf, lb);
  REQUIRE(ladder.size() == 6);
  CHECK_THAT(ladder.front(), WithinRel(50.0 * lb.p_per_s * 1000.0, 1e-9));
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    CHECK_THAT(ladder[i], WithinRel(2.0 * ladder[i - 1], 1e-12));
  }

  const auto r = lb_ratio_analysis(sf, g, spec, lb, ladder);
  REQUIRE(r.ratio.size() == 6);
  CHECK(r.b_ladder == ladder);
  CHECK(r.monotone);
  CHECK(r.in_unit_range);
  CHECK(r.limit_ratio > 0.995);
  CHECK(r.limit_ratio < 1.001);
  CHECK_THAT(r.c1, WithinRel(taylor_coefficient(sf, g, spec, lb).c1, 1e-12));
  for (double x : r.ratio) {
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("ratio ladder input is validated", "[asymptotics]") {
  const auto sf = testsup::base_brick();
  const auto g = testsup::base_grid();
  const auto spec = testsup::uncorrelated3();
  const auto lb = testsup::base_link();

  CHECK_THROWS_AS(lb_ratio_analysis(sf, g, spec, lb, {1e12, 2e12, 4e12}),
                  ConfigError);
  CHECK_THROWS_AS(
      lb_ratio_analysis(sf, g, spec, lb, {1e12, 1e12, 2e12, 4e12}),
      ConfigError);
}

TEST_CASE("ratio trajectory is invariant to the power level", "[asymptotics]") {
  const auto sf = testsup::base_brick();
  const auto g = testsup::base_grid();
  const auto spec = testsup::uncorrelated3();
  const LinkBudget lo{1.26e8, 1.0};
  const LinkBudget hi{2.52e8, 1.0};

  const auto ra = lb_ratio_analysis(sf, g, spec, lo, default_ratio_ladder(sf, lo));
  const auto rb = lb_ratio_analysis(sf, g, spec, hi, default_ratio_ladder(sf, hi));
  REQUIRE(ra.ratio.size() == rb.ratio.size());
  for (std::size_t i = 0; i < ra.ratio.size(); ++i) {
    CHECK_THAT(ra.ratio[i], WithinRel(rb.ratio[i], 1e-9));
  }
  CHECK_THAT(ra.limit_ratio, WithinRel(rb.limit_ratio, 1e-9));
}

TEST_CASE("smaller spread pushes the limit ratio toward one", "[asymptotics]") {
  const auto spec = testsup::uncorrelated3();
  const auto lb = testsup::base_link();

  const auto wide = ScatteringFunction::brick(50.0, 5e-6);   // spread 1e-3
  const auto narrow = ScatteringFunction::brick(50.0, 5e-7); // spread 1e-4
  const auto rw = lb_ratio_analysis(wide, matched_grid(wide, 1.25), spec, lb,
                                    default_ratio_ladder(wide, lb));
  const auto rn = lb_ratio_analysis(narrow, matched_grid(narrow, 1.25), spec, lb,
                                    default_ratio_ladder(narrow, lb));
  CHECK(rn.limit_ratio > rw.limit_ratio);
}
