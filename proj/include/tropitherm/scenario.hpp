#pragma once

#include "tropitherm/ecodom.hpp"
#include "tropitherm/simulation.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace tropitherm {

/// Everything one simulation needs; cheap to copy per concurrent run.
struct RunInputs {
  BuildingModel model;
  WeatherSequence weather;
  SimulationConfig config;
};

/// Applies one `key=value` override. Keys: h_in, h_out_base, h_out_wind, cd,
/// cp, nodes_per_layer, renewal_ach, wind_speed, wind_dir, closed,
/// day_of_year, substeps, season_days. Throws InputError on unknown keys or
/// malformed values.
void apply_override(RunInputs& inputs, const std::string& key, const std::string& value);
void apply_override(RunInputs& inputs, const std::string& assignment);

/// File name -> contents; written verbatim by the command-line tool.
using OutputFiles = std::map<std::string, std::string>;

/// Hourly rows per zone: hour, zone, T_air, T_mr, T_res, w, ACH, cooling_W.
void emit_series(const SimulationResult& result, std::ostream& out);
std::string emit_series(const SimulationResult& result);

/// Air changes per hour of the whole dwelling from exterior inflow only.
double dwelling_air_changes(const BuildingModel& model, const SimulationResult& result, std::size_t day);

// ---- permeability ------------------------------------------------------------

struct Permeability {
  double exterior = 0.0; // (So1 + So2) / 2 / Sp
  double interior = 0.0; // (Si1 + Si2) / 2 / Sp
};

Permeability permeability(const BuildingModel& model);

/// Rescales the widths of openable large openings of principal rooms so that
/// So1/Sp = So2/Sp = `exterior` and (Si1+Si2)/2/Sp = `interior`.
BuildingModel with_permeability(const BuildingModel& model, double exterior, double interior);

// ---- run modes ---------------------------------------------------------------

OutputFiles run_simulate(const RunInputs& inputs);

struct WindStudyDay {
  int day = 0;
  double wind_speed = 0.0;
  double wind_direction = 0.0;
  double dwelling_ach = 0.0;              // daily mean
  std::vector<double> zone_ach;           // daily mean per zone
  std::vector<double> zone_day_resultant; // per zone
  std::vector<double> zone_night_resultant;
};

struct WindStudy {
  std::vector<WindStudyDay> days;
  std::vector<SimulationResult> results; // one independent periodic run per day
};

WindStudy wind_study(const RunInputs& inputs);
OutputFiles run_windstudy(const RunInputs& inputs);

struct SweepCell {
  double exterior = 0.0;
  double interior = 0.0;
  double dwelling_ach = 0.0;     // daily mean
  double night_resultant = 0.0;  // mean over principal rooms
  double day_resultant = 0.0;
};

/// Percentages must lie in [0.15, 0.40]. Cells run concurrently; results come
/// back ordered exterior-major.
std::vector<SweepCell> permeability_sweep(const RunInputs& inputs, const std::vector<double>& exterior,
                                          const std::vector<double>& interior);
OutputFiles run_sweep(const RunInputs& inputs, const std::vector<double>& exterior,
                      const std::vector<double>& interior);

enum class Measure { Roof, Walls, Windows, Ventilation };
std::string to_string(Measure m);

/// `base` with one group of elements taken from `improved`: roof or wall
/// constructions and overhangs, glazing protections, or airflow links and
/// settings. Elements are matched by id.
BuildingModel apply_measure(const BuildingModel& base, const BuildingModel& improved, Measure measure);

struct CaseSummary {
  std::vector<CriteriaSummary> zones;
  double comfort_metric = 0.0; // mean day resultant over principal rooms
  double cooling_energy = 0.0; // kWh per day, all zones
};

struct Attribution {
  Measure measure = Measure::Roof;
  double delta = 0.0;                  // K, base metric minus toggled metric
  std::optional<double> share_percent; // normalized to 100 when deltas sum > 0
};

struct Comparison {
  CaseSummary base;
  CaseSummary improved;
  std::vector<Attribution> attribution;
  double cooling_reduction = 0.0; // fraction of base cooling energy
};

CaseSummary summarize_case(const BuildingModel& model, const SimulationResult& result, const MetricsConfig& metrics);
Comparison compare_cases(const RunInputs& base, const BuildingModel& improved);
OutputFiles run_compare(const RunInputs& base, const BuildingModel& improved);

OutputFiles run_check(const BuildingModel& model, const ecodom::RuleTables& tables);

} // namespace tropitherm
