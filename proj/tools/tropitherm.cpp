#include "tropitherm/building_io.hpp"
#include "tropitherm/ecodom.hpp"
#include "tropitherm/errors.hpp"
#include "tropitherm/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace tropitherm;

namespace {

struct Common {
  std::string building;
  std::string weather;
  std::string out;
  std::vector<std::string> overrides;
  int season_days = -1;
  bool conditioned = false;
};

void add_common(CLI::App* cmd, Common& c, bool needs_weather) {
  cmd->add_option("--building", c.building, "Building description (JSON)")->required()->check(CLI::ExistingFile);
  auto* w = cmd->add_option("--weather", c.weather, "Hourly weather file (CSV)")->check(CLI::ExistingFile);
  if (needs_weather) w->required();
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--override", c.overrides, "Parameter override key=value (repeatable)");
  cmd->add_option("--season-days", c.season_days, "Length of the wet season in days")->check(CLI::NonNegativeNumber);
}

RunInputs prepare(const Common& c) {
  RunInputs in;
  in.model = load_building(c.building);
  require_valid(in.model);
  if (!c.weather.empty()) in.weather = load_weather(c.weather);
  in.config.conditioning = c.conditioned;
  if (c.season_days >= 0) in.config.metrics.season_days = c.season_days;
  for (const auto& o : c.overrides) apply_override(in, o);
  return in;
}

/// Accepts fractions (0.25) or percentages (25).
std::vector<double> fractions(const std::vector<double>& values) {
  std::vector<double> out;
  for (double v : values) out.push_back(v > 1.0 ? v / 100.0 : v);
  return out;
}

void write(const OutputFiles& files, const std::string& dir, const std::string& echo) {
  if (dir.empty()) {
    const auto it = files.find(echo);
    if (it != files.end()) std::cout << it->second;
    return;
  }
  fs::create_directories(dir);
  for (const auto& [name, content] : files) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw InputError("cannot write '" + (fs::path(dir) / name).string() + "'");
    f << content;
  }
  std::cout << "wrote " << files.size() << " files to " << dir << '\n';
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multizone thermal and airflow simulation of tropical dwellings with ECODOM compliance checks"};
  app.require_subcommand(1);

  Common sim, wind, sweep, cmp, chk;
  auto* simulate_cmd = app.add_subcommand("simulate", "Free-floating or conditioned run of the weather sequence");
  add_common(simulate_cmd, sim, true);
  simulate_cmd->add_flag("--conditioned", sim.conditioned, "Honour zone air-conditioning schedules");

  auto* wind_cmd = app.add_subcommand("windstudy", "Seven-day wind study built from the first weather day");
  add_common(wind_cmd, wind, true);
  wind_cmd->add_flag("--conditioned", wind.conditioned, "Honour zone air-conditioning schedules");

  std::vector<double> ext{0.15, 0.20, 0.25, 0.30, 0.35, 0.40};
  std::vector<double> inner{0.15, 0.20, 0.25, 0.30, 0.35, 0.40};
  auto* sweep_cmd = app.add_subcommand("sweep", "Exterior x interior permeability grid");
  add_common(sweep_cmd, sweep, true);
  sweep_cmd->add_option("--ext", ext, "Exterior permeabilities (fractions or percent)")->delimiter(',');
  sweep_cmd->add_option("--int", inner, "Interior permeabilities (fractions or percent)")->delimiter(',');

  std::string improved;
  auto* compare_cmd = app.add_subcommand("compare", "Base versus improved dwelling with per-measure attribution");
  add_common(compare_cmd, cmp, true);
  compare_cmd->add_option("--improved", improved, "Improved building description")->required()->check(
      CLI::ExistingFile);
  compare_cmd->add_flag("--conditioned", cmp.conditioned, "Honour zone air-conditioning schedules");

  std::string rules;
  auto* check_cmd = app.add_subcommand("check", "ECODOM compliance report");
  add_common(check_cmd, chk, false);
  check_cmd->add_option("--rules", rules, "Rule table directory")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*simulate_cmd) {
      write(run_simulate(prepare(sim)), sim.out, "summary.txt");
    } else if (*wind_cmd) {
      write(run_windstudy(prepare(wind)), wind.out, "windstudy.csv");
    } else if (*sweep_cmd) {
      write(run_sweep(prepare(sweep), fractions(ext), fractions(inner)), sweep.out, "sweep.csv");
    } else if (*compare_cmd) {
      const auto base = prepare(cmp);
      auto better = load_building(improved);
      require_valid(better);
      RunInputs probe{better, base.weather, base.config};
      for (const auto& o : cmp.overrides) apply_override(probe, o);
      write(run_compare(base, probe.model), cmp.out, "compare.txt");
    } else if (*check_cmd) {
      const auto in = prepare(chk);
      const auto tables = ecodom::load_rule_tables(rules.empty() ? ecodom::default_rules_dir() : fs::path(rules));
      write(run_check(in.model, tables), chk.out, "compliance.txt");
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << " (worst residual " << e.worst_residual() << ")\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
