#include "peakcap/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "peakcap/errors.hpp"
#include "peakcap/lower_bound.hpp"
#include "peakcap/upper_bound.hpp"

namespace peakcap {

namespace {

using nlohmann::json;

// 17 significant digits round-trip any double, so reruns serialize
// byte-identically.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_units(double nats, RateUnits units) {
  return units == RateUnits::kBits ? nats / M_LN2 : nats;
}

const char* units_name(RateUnits units) {
  return units == RateUnits::kBits ? "bits" : "nats";
}

}  // namespace

std::vector<double> sweep_points(const SweepSpec& s) {
  if (s.points < 2) throw ConfigError("sweep: points must be >= 2");
  if (!(s.b_min_hz < s.b_max_hz)) throw ConfigError("sweep: need b_min < b_max");
  std::vector<double> b(static_cast<std::size_t>(s.points));
  const int n = s.points - 1;
  if (s.log_spacing) {
    const double l0 = std::log(s.b_min_hz);
    const double l1 = std::log(s.b_max_hz);
    for (int i = 0; i <= n; ++i) b[i] = std::exp(l0 + (l1 - l0) * i / n);
  } else {
    for (int i = 0; i <= n; ++i) {
      b[i] = s.b_min_hz + (s.b_max_hz - s.b_min_hz) * i / n;
    }
  }
  b.front() = s.b_min_hz;
  b.back() = s.b_max_hz;
  return b;
}

SweepTable run_sweep(const Scenario& sc) {
  const auto bs = sweep_points(sc.sweep);
  SweepTable table;
  table.q_range = sc.q_range;
  table.rows.resize(bs.size());

  UpperBoundOptions uopt;
  uopt.quad = sc.quad;
  const LowerBoundOptions lopt = sc.lower_bound_options();

  for (std::size_t i = 0; i < bs.size(); ++i) {
    const double b = bs[i];
    SweepRow& row = table.rows[i];
    row.b_hz = b;

    const BoundValue u1 = upper_bound_u1(sc.sf, sc.grid, sc.spatial, sc.link, b, uopt);
    row.u1 = u1.rate;
    row.alpha_star = u1.alpha_star;
    row.ucoh = coherent_jensen_bound(sc.spatial, sc.link, sc.grid, b);
    row.condition_ok =
        sufficient_condition_holds(sc.sf, sc.grid, sc.spatial, sc.link, b).holds;

    const auto per_q = lower_bound_l1_per_q(sc.sf, sc.grid, sc.spatial, sc.link,
                                            b, sc.q_range, sc.mc, lopt);
    row.l1_q.resize(per_q.size());
    row.lb_approx_q.resize(per_q.size());
    std::size_t best = 0;
    for (std::size_t qi = 0; qi < per_q.size(); ++qi) {
      row.l1_q[qi] = per_q[qi].rate;
      row.mc_halfwidth = std::fmax(row.mc_halfwidth, per_q[qi].diag.mc_half_width);
      if (per_q[qi].rate > per_q[best].rate) best = qi;
      row.lb_approx_q[qi] =
          lb_approx(sc.sf, sc.grid, sc.spatial, sc.link, b, sc.q_range[qi], sc.quad)
              .rate;
    }
    row.gamma_star = per_q[best].gamma_star;
  }
  return table;
}

std::vector<CurveSummary> SweepTable::curves() const {
  std::vector<CurveSummary> out;
  const auto scan = [&](const std::string& name, auto value_at) {
    CurveSummary cs;
    cs.name = name;
    bool first = true;
    for (const SweepRow& row : rows) {
      const double v = value_at(row);
      if (first || v > cs.max_value) {
        cs.max_value = v;
        cs.argmax_b_hz = row.b_hz;
        first = false;
      }
    }
    out.push_back(cs);
  };
  scan("U1", [](const SweepRow& r) { return r.u1; });
  scan("Ucoh", [](const SweepRow& r) { return r.ucoh; });
  // same column order as the CSV: both L1 curves before any LBapprox curve
  for (std::size_t qi = 0; qi < q_range.size(); ++qi) {
    scan("L1_q" + std::to_string(q_range[qi]),
         [qi](const SweepRow& r) { return r.l1_q[qi]; });
  }
  for (std::size_t qi = 0; qi < q_range.size(); ++qi) {
    scan("LBapprox_q" + std::to_string(q_range[qi]),
         [qi](const SweepRow& r) { return r.lb_approx_q[qi]; });
  }
  return out;
}

std::string sweep_csv(const SweepTable& table, RateUnits units) {
  std::ostringstream out;
  out << "B_hz,U1,Ucoh";
  for (int q : table.q_range) out << ",L1_q" << q;
  for (int q : table.q_range) out << ",LBapprox_q" << q;
  out << ",alpha_star,gamma_star,condition_ok,mc_halfwidth\n";
  for (const SweepRow& row : table.rows) {
    out << fmt(row.b_hz) << ',' << fmt(to_units(row.u1, units)) << ','
        << fmt(to_units(row.ucoh, units));
    for (double v : row.l1_q) out << ',' << fmt(to_units(v, units));
    for (double v : row.lb_approx_q) out << ',' << fmt(to_units(v, units));
    out << ',' << fmt(row.alpha_star) << ',' << fmt(row.gamma_star) << ','
        << (row.condition_ok ? 1 : 0) << ','
        << fmt(to_units(row.mc_halfwidth, units)) << '\n';
  }
  return out.str();
}

std::string sweep_report_json(const SweepTable& table, RateUnits units) {
  json j;
  j["units"] = units_name(units);
  j["q_range"] = table.q_range;
  j["points"] = table.rows.size();
  json curves = json::array();
  for (const CurveSummary& cs : table.curves()) {
    curves.push_back({{"name", cs.name},
                      {"argmax_b_hz", cs.argmax_b_hz},
                      {"max_value", to_units(cs.max_value, units)}});
  }
  j["curves"] = curves;
  return j.dump(2) + "\n";
}

ConditionsReport check_conditions(const Scenario& sc, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) {
    throw ConfigError("check_conditions: bandwidth must be positive");
  }
  ConditionsReport rep;
  rep.b_hz = bandwidth_hz;
  rep.spread = sc.sf.spread();
  rep.kappa_value = kappa(sc.sf, sc.quad);
  rep.tf = sc.grid.tf();
  rep.beta = sc.link.beta;

  const SufficientCondition cond =
      sufficient_condition_holds(sc.sf, sc.grid, sc.spatial, sc.link, bandwidth_hz);
  rep.spread_ok = cond.spread_ok;
  rep.threshold_db = cond.threshold_db;
  rep.snr_db = 10.0 * std::log10(sc.link.p_per_s / bandwidth_hz);
  rep.snr_ok = cond.snr_ok;
  rep.sufficient_ok = cond.holds;

  const TaylorResult taylor =
      taylor_coefficient(sc.sf, sc.grid, sc.spatial, sc.link, sc.quad);
  rep.taylor_threshold_beta = taylor.threshold_beta;
  rep.taylor_valid = taylor.valid;
  return rep;
}

std::string conditions_json(const ConditionsReport& rep) {
  json j;
  j["b_hz"] = rep.b_hz;
  j["spread"] = rep.spread;
  j["kappa"] = rep.kappa_value;
  j["tf"] = rep.tf;
  j["beta"] = rep.beta;
  j["spread_ok"] = rep.spread_ok;
  j["snr_threshold_db"] = rep.threshold_db;
  j["snr_db"] = rep.snr_db;
  j["snr_ok"] = rep.snr_ok;
  j["sufficient_condition_ok"] = rep.sufficient_ok;
  j["taylor_threshold_beta"] = rep.taylor_threshold_beta;
  j["taylor_valid"] = rep.taylor_valid;
  return j.dump(2) + "\n";
}

UwbGainReport uwb_gain_report(const Scenario& sc, double b_eval_hz) {
  if (!(b_eval_hz >= sc.sweep.b_min_hz && b_eval_hz <= sc.sweep.b_max_hz)) {
    throw ConfigError("uwb_gain: evaluation bandwidth outside the sweep range");
  }
  bool has_single = false, has_multi = false;
  for (int q : sc.q_range) {
    if (q == 1) has_single = true;
    if (q > 1) has_multi = true;
  }
  if (!has_single) {
    throw ConfigError("uwb_gain: q_range must include the q = 1 baseline");
  }

  std::vector<std::vector<double>> samples;
  const auto per_q =
      lower_bound_l1_per_q(sc.sf, sc.grid, sc.spatial, sc.link, b_eval_hz,
                           sc.q_range, sc.mc, sc.lower_bound_options(), &samples);

  std::size_t base = 0, best = 0;
  bool best_set = false;
  for (std::size_t qi = 0; qi < sc.q_range.size(); ++qi) {
    if (sc.q_range[qi] == 1) base = qi;
    if (sc.q_range[qi] > 1 && (!best_set || per_q[qi].rate > per_q[best].rate)) {
      best = qi;
      best_set = true;
    }
  }

  UwbGainReport rep;
  rep.b_hz = b_eval_hz;
  rep.l1_single = per_q[base].rate;
  if (!has_multi) {
    rep.l1_multi_best = rep.l1_single;
    rep.best_q = 1;
    return rep;
  }
  rep.l1_multi_best = per_q[best].rate;
  rep.best_q = sc.q_range[best];
  if (!(rep.l1_single > 0.0)) {
    throw NumericsError("uwb_gain: the q = 1 baseline rate is not positive");
  }
  rep.gain = (rep.l1_multi_best - rep.l1_single) / rep.l1_single;

  // Half-width by the delta method on g(D, Y) = D / Y with D the paired
  // per-sample rate difference and Y the baseline rate. The shared draws
  // behind both curves make var(D) far smaller than var(X) + var(Y).
  const double tf = sc.grid.tf();
  const double scale_best = b_eval_hz / (per_q[best].gamma_star * tf);
  const double scale_base = b_eval_hz / (per_q[base].gamma_star * tf);
  const std::size_t n = samples[base].size();
  double mean_d = 0.0, mean_y = 0.0;
  std::vector<double> d(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = scale_best * samples[best][i] - per_q[best].penalty_term;
    const double yi = scale_base * samples[base][i] - per_q[base].penalty_term;
    d[i] = xi - yi;
    y[i] = yi;
    mean_d += d[i];
    mean_y += y[i];
  }
  mean_d /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double s_dd = 0.0, s_yy = 0.0, s_dy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s_dd += (d[i] - mean_d) * (d[i] - mean_d);
    s_yy += (y[i] - mean_y) * (y[i] - mean_y);
    s_dy += (d[i] - mean_d) * (y[i] - mean_y);
  }
  const double denom = static_cast<double>(n) * static_cast<double>(n - 1);
  const double gy = -mean_d / (mean_y * mean_y);
  const double var_gain =
      (s_dd / (mean_y * mean_y) + gy * gy * s_yy + 2.0 * (gy / mean_y) * s_dy) / denom;
  rep.half_width = 1.96 * std::sqrt(std::fmax(var_gain, 0.0));
  return rep;
}

std::string uwb_gain_json(const UwbGainReport& rep) {
  json j;
  j["b_hz"] = rep.b_hz;
  j["l1_single_nats_per_s"] = rep.l1_single;
  j["l1_multi_best_nats_per_s"] = rep.l1_multi_best;
  j["best_q"] = rep.best_q;
  j["gain"] = rep.gain;
  j["gain_half_width"] = rep.half_width;
  return j.dump(2) + "\n";
}

AsymptoticsReport asymptotics_report(const Scenario& sc) {
  AsymptoticsReport rep;
  rep.taylor = taylor_coefficient(sc.sf, sc.grid, sc.spatial, sc.link, sc.quad);
  rep.ratio = lb_ratio_analysis(sc.sf, sc.grid, sc.spatial, sc.link,
                                default_ratio_ladder(sc.sf, sc.link, sc.quad),
                                sc.quad);
  return rep;
}

std::string asymptotics_json(const AsymptoticsReport& rep) {
  json j;
  j["taylor"] = {{"c1", rep.taylor.c1},
                 {"kappa", rep.taylor.kappa},
                 {"threshold_beta", rep.taylor.threshold_beta},
                 {"valid", rep.taylor.valid}};
  j["ratio"] = {{"b_ladder", rep.ratio.b_ladder},
                {"ratio", rep.ratio.ratio},
                {"limit", rep.ratio.limit_ratio},
                {"c1", rep.ratio.c1},
                {"monotone", rep.ratio.monotone},
                {"in_unit_range", rep.ratio.in_unit_range}};
  return j.dump(2) + "\n";
}

}  // namespace peakcap
