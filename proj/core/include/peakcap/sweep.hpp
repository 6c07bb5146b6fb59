#pragma once

#include <string>
#include <vector>

#include "peakcap/asymptotics.hpp"
#include "peakcap/scenario.hpp"

namespace peakcap {

// One bandwidth point of a sweep. All rates are stored in nats/s; unit
// conversion happens at serialization time only.
struct SweepRow {
  double b_hz = 0.0;
  double u1 = 0.0;
  double ucoh = 0.0;
  std::vector<double> l1_q;         // per q_range entry, same order
  std::vector<double> lb_approx_q;  // per q_range entry, same order
  double alpha_star = 0.0;          // upper-bound peakiness weight
  double gamma_star = 1.0;          // time-sharing factor of the best q
  bool condition_ok = false;        // sufficient condition holds at this B
  double mc_halfwidth = 0.0;        // largest half-width across the q curves
};

struct CurveSummary {
  std::string name;  // column name: U1, Ucoh, L1_q{q}, LBapprox_q{q}
  double argmax_b_hz = 0.0;
  double max_value = 0.0;  // nats/s
};

struct SweepTable {
  std::vector<int> q_range;
  std::vector<SweepRow> rows;

  std::vector<CurveSummary> curves() const;
};

// The bandwidth lattice of the sweep (endpoints exact).
std::vector<double> sweep_points(const SweepSpec& s);

// Evaluates every bound at every sweep point. Rows come back ordered by
// bandwidth regardless of evaluation order.
SweepTable run_sweep(const Scenario& sc);

// One row per bandwidth point. Rate columns are converted to the requested
// units; reruns with the same scenario and seed are byte-identical.
std::string sweep_csv(const SweepTable& table, RateUnits units);

// Per-curve argmax-bandwidth / peak-value summary as JSON.
std::string sweep_report_json(const SweepTable& table, RateUnits units);

// Regime diagnostics at one bandwidth: channel spread admissibility, the
// SNR ceiling of the sufficient condition, and the wideband-expansion
// validity threshold on the peak-to-average ratio.
struct ConditionsReport {
  double b_hz = 0.0;
  double spread = 0.0;
  double kappa_value = 0.0;
  double tf = 0.0;
  double beta = 1.0;
  bool spread_ok = false;
  double threshold_db = 0.0;  // admissible P/B ceiling, dB
  double snr_db = 0.0;        // actual P/B, dB
  bool snr_ok = false;
  bool sufficient_ok = false;
  double taylor_threshold_beta = 0.0;  // 2 TF / kappa
  bool taylor_valid = false;
};

ConditionsReport check_conditions(const Scenario& sc, double bandwidth_hz);
std::string conditions_json(const ConditionsReport& rep);

// Relative throughput gain of the best multi-eigendirection lower bound
// over single-eigendirection signaling at one bandwidth. The half-width
// comes from the per-sample rate differences (shared Monte Carlo draws), so
// it is far tighter than the individual curve half-widths.
struct UwbGainReport {
  double b_hz = 0.0;
  double l1_single = 0.0;      // q = 1, nats/s
  double l1_multi_best = 0.0;  // best q > 1, nats/s
  int best_q = 1;
  double gain = 0.0;           // (multi - single) / single
  double half_width = 0.0;     // 95% half-width on the gain
};

UwbGainReport uwb_gain_report(const Scenario& sc, double b_eval_hz);
std::string uwb_gain_json(const UwbGainReport& rep);

// Wideband Taylor coefficient plus the ladder-extrapolated ratio of the
// lower-bound approximation to it.
struct AsymptoticsReport {
  TaylorResult taylor;
  RatioAnalysis ratio;
};

AsymptoticsReport asymptotics_report(const Scenario& sc);
std::string asymptotics_json(const AsymptoticsReport& rep);

}  // namespace peakcap
