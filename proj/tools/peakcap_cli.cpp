// Command-line driver: bandwidth sweeps, regime checks, asymptotics and
// multi-eigenmode gain reports for the capacity bound library.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "peakcap/errors.hpp"
#include "peakcap/scenario.hpp"
#include "peakcap/sweep.hpp"

namespace {

using peakcap::ConfigError;
using peakcap::NumericsError;
using peakcap::RateUnits;
using peakcap::Scenario;

struct CommonFlags {
  std::string config_path;
  std::string preset;
  std::string out_path;
  std::string report_path;
  std::string units;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags, bool with_preset = true) {
  cmd->add_option("--config", flags->config_path, "Scenario JSON file");
  if (with_preset) {
    cmd->add_option("--preset", flags->preset, "Built-in scenario")
        ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  }
  cmd->add_option("--out", flags->out_path, "CSV output path (default stdout)");
  cmd->add_option("--report", flags->report_path, "JSON report path (default stdout)");
  cmd->add_option("--units", flags->units, "Rate units for CSV/report output")
      ->check(CLI::IsMember({"nats", "bits"}));
  flags->seed_opt = cmd->add_option("--seed", flags->seed, "Monte Carlo seed override");
}

Scenario load_scenario(const CommonFlags& flags) {
  if (!flags.config_path.empty() && !flags.preset.empty()) {
    throw ConfigError("pass either --config or --preset, not both");
  }
  if (flags.config_path.empty() && flags.preset.empty()) {
    throw ConfigError("a scenario is required: pass --config PATH or --preset NAME");
  }
  Scenario sc = !flags.config_path.empty()
                    ? peakcap::load_scenario_file(flags.config_path)
                    : peakcap::preset_scenario(flags.preset);
  if (flags.seed_opt && flags.seed_opt->count() > 0) sc.mc.seed = flags.seed;
  if (flags.units == "nats") sc.units = RateUnits::kNats;
  if (flags.units == "bits") sc.units = RateUnits::kBits;
  return sc;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << text;
  if (!out) throw ConfigError("failed writing output file: " + path);
}

void run_sweep_command(const Scenario& sc, const CommonFlags& flags) {
  const peakcap::SweepTable table = peakcap::run_sweep(sc);
  write_text(flags.out_path, peakcap::sweep_csv(table, sc.units));
  if (!flags.report_path.empty()) {
    write_text(flags.report_path, peakcap::sweep_report_json(table, sc.units));
  }
}

int error_exit(const char* type, const std::string& message, int code) {
  nlohmann::json j;
  j["error"] = {{"type", type}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity bounds for peak-constrained wideband fading channels"};
  app.require_subcommand(1);

  CommonFlags sweep_flags, cond_flags, asym_flags, uwb_flags, repro_flags;
  double cond_b_hz = 0.0;
  double uwb_b_hz = 7e9;
  std::string repro_name;

  CLI::App* sweep = app.add_subcommand("sweep", "Evaluate all bounds over the bandwidth sweep");
  add_common_flags(sweep, &sweep_flags);

  CLI::App* cond = app.add_subcommand("check-conditions", "Report regime conditions at one bandwidth");
  add_common_flags(cond, &cond_flags);
  cond->add_option("--bandwidth-hz", cond_b_hz, "Evaluation bandwidth (default: sweep minimum)");

  CLI::App* asym = app.add_subcommand("asymptotics", "Wideband Taylor coefficient and ratio limit");
  add_common_flags(asym, &asym_flags);

  CLI::App* uwb = app.add_subcommand("uwb-gain", "Multi-eigenmode gain over single-mode signaling");
  add_common_flags(uwb, &uwb_flags);
  uwb->add_option("--bandwidth-hz", uwb_b_hz, "Evaluation bandwidth (default 7e9)");

  CLI::App* repro = app.add_subcommand("reproduce", "Sweep one built-in scenario");
  repro->add_option("name", repro_name, "fig1, fig2 or fig3")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  add_common_flags(repro, &repro_flags, /*with_preset=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit("cli", e.what(), 2);
  }

  try {
    if (sweep->parsed()) {
      run_sweep_command(load_scenario(sweep_flags), sweep_flags);
    } else if (cond->parsed()) {
      const Scenario sc = load_scenario(cond_flags);
      const double b = cond_b_hz > 0.0 ? cond_b_hz : sc.sweep.b_min_hz;
      write_text(cond_flags.report_path,
                 peakcap::conditions_json(peakcap::check_conditions(sc, b)));
    } else if (asym->parsed()) {
      const Scenario sc = load_scenario(asym_flags);
      write_text(asym_flags.report_path,
                 peakcap::asymptotics_json(peakcap::asymptotics_report(sc)));
    } else if (uwb->parsed()) {
      const Scenario sc = load_scenario(uwb_flags);
      write_text(uwb_flags.report_path,
                 peakcap::uwb_gain_json(peakcap::uwb_gain_report(sc, uwb_b_hz)));
    } else if (repro->parsed()) {
      repro_flags.preset = repro_name;
      run_sweep_command(load_scenario(repro_flags), repro_flags);
    }
  } catch (const ConfigError& e) {
    return error_exit("config", e.what(), 2);
  } catch (const NumericsError& e) {
    return error_exit("numerics", e.what(), 3);
  } catch (const std::exception& e) {
    return error_exit("internal", e.what(), 1);
  }
  return 0;
}
