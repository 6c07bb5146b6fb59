#include "peakcap/scenario.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "peakcap/errors.hpp"

namespace peakcap {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ConfigError(std::string("config: missing or non-numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

std::vector<double> number_list(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ConfigError(std::string("config: field '") + key + "' must be an array");
  }
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) {
      throw ConfigError(std::string("config: field '") + key + "' must hold numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

ScatteringFunction parse_scattering(const json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw ConfigError("config: 'scattering' must be an object with a 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "brick") {
    return ScatteringFunction::brick(require_number(j, "nu0_hz"),
                                     require_number(j, "tau0_s"));
  }
  if (type == "grid") {
    if (j.contains("csv")) {
      return load_sampled_grid_csv(j["csv"].get<std::string>());
    }
    if (!j.contains("values") || !j["values"].is_array()) {
      throw ConfigError("config: grid scattering needs 'csv' or inline 'values'");
    }
    std::vector<std::vector<double>> values;
    for (const auto& row : j["values"]) {
      values.emplace_back();
      for (const auto& v : row) values.back().push_back(v.get<double>());
    }
    return ScatteringFunction::sampled(number_list(j, "nu_hz"),
                                       number_list(j, "tau_s"), std::move(values));
  }
  throw ConfigError("config: scattering type must be 'brick' or 'grid'");
}

Eigen::MatrixXcd parse_complex_matrix(const json& j, const char* key) {
  if (!j.is_object() || !j.contains("re")) {
    throw ConfigError(std::string("config: matrix '") + key + "' needs a 're' array");
  }
  const auto read_rows = [&](const json& rows) {
    std::vector<std::vector<double>> m;
    for (const auto& row : rows) {
      m.emplace_back();
      for (const auto& v : row) m.back().push_back(v.get<double>());
    }
    return m;
  };
  const auto re = read_rows(j["re"]);
  std::vector<std::vector<double>> im;
  if (j.contains("im")) im = read_rows(j["im"]);
  const std::size_t n = re.size();
  Eigen::MatrixXcd out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (re[r].size() != n || (!im.empty() && (im.size() != n || im[r].size() != n))) {
      throw ConfigError(std::string("config: matrix '") + key + "' must be square");
    }
    for (std::size_t c = 0; c < n; ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {
          re[r][c], im.empty() ? 0.0 : im[r][c]};
    }
  }
  return out;
}

SpatialSpectrum parse_spatial(const json& j) {
  if (j.contains("tx_eigs") || j.contains("rx_eigs")) {
    return SpatialSpectrum::from_eigs(number_list(j, "tx_eigs"),
                                      number_list(j, "rx_eigs"));
  }
  if (j.contains("tx_matrix") && j.contains("rx_matrix")) {
    return spectrum_from_matrices(
        CorrelationMatrix{parse_complex_matrix(j["tx_matrix"], "tx_matrix")},
        CorrelationMatrix{parse_complex_matrix(j["rx_matrix"], "rx_matrix")});
  }
  throw ConfigError("config: 'spatial' needs eigenvalue lists or matrices");
}

}  // namespace

void validate_scenario(Scenario& sc) {
  validate_grid(sc.sf, sc.grid);
  if (sc.spatial.tx_eigs.empty() || sc.spatial.rx_eigs.empty()) {
    throw ConfigError("config: spatial spectrum is empty");
  }
  if (!(sc.link.p_per_s > 0.0)) throw ConfigError("config: link.p_per_s must be > 0");
  if (!(sc.link.beta >= 1.0)) throw ConfigError("config: link.beta must be >= 1");
  if (sc.sweep.points < 2) throw ConfigError("config: sweep.points must be >= 2");
  if (!(sc.sweep.b_min_hz < sc.sweep.b_max_hz)) {
    throw ConfigError("config: sweep range must satisfy b_min < b_max");
  }
  if (!(sc.sweep.b_min_hz >= sc.grid.f_hz)) {
    throw ConfigError("config: sweep.b_min_hz must cover one frequency slot (>= F)");
  }
  if (sc.q_range.empty()) {
    for (int q = 1; q <= sc.spatial.mt(); ++q) sc.q_range.push_back(q);
  }
  for (int q : sc.q_range) {
    if (q < 1 || q > sc.spatial.mt()) {
      throw ConfigError("config: q_range entries must lie in [1, M_T]");
    }
  }
  if (sc.mc.outer < 1 || sc.mc.inner < 1) {
    throw ConfigError("config: mc sample counts must be >= 1");
  }
  if (!(sc.mc.confidence > 0.0)) throw ConfigError("config: mc.confidence must be > 0");
  if (sc.exact_toeplitz_max_k < 1 || sc.exact_toeplitz_max_k > kExactToeplitzHardCap) {
    throw ConfigError("config: exact_toeplitz_max_k out of range");
  }
  if (sc.phase_model == PhaseModel::kUniformPsk && sc.psk_order < 2) {
    throw ConfigError("config: psk_order must be >= 2");
  }
}

Scenario preset_scenario(const std::string& name) {
  Scenario sc(ScatteringFunction::brick(50.0, 5e-6));
  sc.grid = matched_grid(sc.sf, 1.25);
  sc.link = LinkBudget{1.26e8, 1.0};
  sc.mc = McSpec{10000, 512, 20260816ull, 0.05, 0};
  if (name == "fig1") {
    sc.spatial = SpatialSpectrum::from_eigs({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0});
  } else if (name == "fig2") {
    sc.spatial = SpatialSpectrum::from_eigs({1.0, 1.0, 1.0}, {2.6, 0.3, 0.1});
  } else if (name == "fig3") {
    sc.spatial = SpatialSpectrum::from_eigs({1.7, 1.0, 0.3}, {1.0, 1.0, 1.0});
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected fig1, fig2 or fig3)");
  }
  validate_scenario(sc);
  return sc;
}

Scenario parse_scenario_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  try {
    if (!j.contains("scattering")) throw ConfigError("config: 'scattering' is required");
    Scenario sc(parse_scattering(j["scattering"]));

    if (j.contains("grid")) {
      const auto& g = j["grid"];
      if (g.contains("t_s") || g.contains("f_hz")) {
        sc.grid = GridParams{require_number(g, "t_s"), require_number(g, "f_hz")};
      } else {
        const double tf = g.contains("matched_tf") ? require_number(g, "matched_tf") : 1.25;
        sc.grid = matched_grid(sc.sf, tf);
      }
    } else {
      sc.grid = matched_grid(sc.sf, 1.25);
    }

    if (!j.contains("spatial")) throw ConfigError("config: 'spatial' is required");
    sc.spatial = parse_spatial(j["spatial"]);

    if (!j.contains("link")) throw ConfigError("config: 'link' is required");
    sc.link.p_per_s = require_number(j["link"], "p_per_s");
    if (j["link"].contains("beta")) sc.link.beta = require_number(j["link"], "beta");

    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      if (s.contains("b_min_hz")) sc.sweep.b_min_hz = require_number(s, "b_min_hz");
      if (s.contains("b_max_hz")) sc.sweep.b_max_hz = require_number(s, "b_max_hz");
      if (s.contains("points")) sc.sweep.points = static_cast<int>(require_number(s, "points"));
      if (s.contains("spacing")) {
        const std::string sp = s["spacing"].get<std::string>();
        if (sp == "log") {
          sc.sweep.log_spacing = true;
        } else if (sp == "linear") {
          sc.sweep.log_spacing = false;
        } else {
          throw ConfigError("config: sweep.spacing must be 'log' or 'linear'");
        }
      }
    }

    if (j.contains("q_range")) {
      for (const auto& v : j["q_range"]) sc.q_range.push_back(v.get<int>());
    }

    if (j.contains("mc")) {
      const auto& m = j["mc"];
      if (m.contains("outer")) sc.mc.outer = static_cast<int>(require_number(m, "outer"));
      if (m.contains("inner")) sc.mc.inner = static_cast<int>(require_number(m, "inner"));
      if (m.contains("seed")) sc.mc.seed = m["seed"].get<std::uint64_t>();
      if (m.contains("confidence")) sc.mc.confidence = require_number(m, "confidence");
      if (m.contains("threads")) sc.mc.threads = static_cast<int>(require_number(m, "threads"));
    }

    if (j.contains("units")) {
      const std::string u = j["units"].get<std::string>();
      if (u == "nats") {
        sc.units = RateUnits::kNats;
      } else if (u == "bits") {
        sc.units = RateUnits::kBits;
      } else {
        throw ConfigError("config: units must be 'nats' or 'bits'");
      }
    }

    if (j.contains("exact_toeplitz_max_k")) {
      sc.exact_toeplitz_max_k = static_cast<int>(require_number(j, "exact_toeplitz_max_k"));
    }

    if (j.contains("quadrature")) {
      const auto& q = j["quadrature"];
      if (q.contains("nodes_per_axis")) {
        sc.quad.nodes_per_axis = static_cast<int>(require_number(q, "nodes_per_axis"));
      }
      if (q.contains("tolerance")) sc.quad.rel_tolerance = require_number(q, "tolerance");
      if (q.contains("rule")) {
        const std::string r = q["rule"].get<std::string>();
        if (r == "gauss_legendre") {
          sc.quad.rule = QuadratureRule::kGaussLegendre;
        } else if (r == "midpoint") {
          sc.quad.rule = QuadratureRule::kMidpoint;
        } else {
          throw ConfigError("config: quadrature.rule must be 'gauss_legendre' or 'midpoint'");
        }
      }
    }

    if (j.contains("phase_model")) {
      const std::string p = j["phase_model"].get<std::string>();
      if (p == "uniform") {
        sc.phase_model = PhaseModel::kContinuousUniform;
      } else if (p == "psk") {
        sc.phase_model = PhaseModel::kUniformPsk;
      } else {
        throw ConfigError("config: phase_model must be 'uniform' or 'psk'");
      }
    }
    if (j.contains("psk_order")) {
      sc.psk_order = static_cast<int>(require_number(j, "psk_order"));
    }

    validate_scenario(sc);
    return sc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed field: ") + e.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_json(ss.str());
}

}  // namespace peakcap
