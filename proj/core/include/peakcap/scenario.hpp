#pragma once

#include <string>
#include <vector>

#include "peakcap/bound_types.hpp"
#include "peakcap/lower_bound.hpp"
#include "peakcap/scattering.hpp"
#include "peakcap/spatial.hpp"

namespace peakcap {

struct SweepSpec {
  double b_min_hz = 1e6;
  double b_max_hz = 1e13;
  int points = 40;
  bool log_spacing = true;
};

enum class RateUnits { kNats, kBits };

// One fully specified evaluation setup: channel, lattice, spatial spectra,
// link budget, sweep range and numerical budgets.
struct Scenario {
  explicit Scenario(ScatteringFunction sf_) : sf(std::move(sf_)) {}

  ScatteringFunction sf;
  GridParams grid{};
  SpatialSpectrum spatial{};
  LinkBudget link{};
  SweepSpec sweep{};
  std::vector<int> q_range;  // defaults to 1..M_T at validation
  McSpec mc{};
  RateUnits units = RateUnits::kNats;
  int exact_toeplitz_max_k = 512;
  QuadratureSpec quad{};
  PhaseModel phase_model = PhaseModel::kContinuousUniform;
  int psk_order = 8;

  LowerBoundOptions lower_bound_options() const {
    LowerBoundOptions opt;
    opt.exact_toeplitz_max_k = exact_toeplitz_max_k;
    opt.phase_model = phase_model;
    opt.psk_order = psk_order;
    opt.quad = quad;
    return opt;
  }
};

// The three built-in measurement setups (same link and brick profile;
// fig2 correlates the receiver, fig3 the transmitter).
Scenario preset_scenario(const std::string& name);

// Parses the JSON scenario format (see README for the schema); relative
// CSV paths resolve against the current working directory. Validation
// failures throw ConfigError.
Scenario parse_scenario_json(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

// Checks cross-field invariants (sweep range vs grid, q_range vs M_T);
// fills q_range with 1..M_T when empty. Called by the parsers; presets are
// pre-validated.
void validate_scenario(Scenario& sc);

}  // namespace peakcap
