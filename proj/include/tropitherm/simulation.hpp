#pragma once

#include "tropitherm/airflow.hpp"
#include "tropitherm/metrics.hpp"
#include "tropitherm/model.hpp"
#include "tropitherm/thermal.hpp"
#include "tropitherm/weather.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tropitherm {

struct SimulationConfig {
  ThermalConfig thermal;
  AirflowConfig airflow;
  MetricsConfig metrics;
  int substeps = 1;              // thermal steps per weather hour
  bool conditioning = true;      // honour zone InfinitePower settings
  double warmup_tolerance = 0.05; // K, change of the 0h00 state between cycles
  int max_warmup_cycles = 10;
  std::optional<double> initial_temperature; // default: daily mean dry bulb
};

/// Hourly outputs of one zone; sample i is the state at the end of record i.
struct ZoneSeries {
  std::string zone;
  std::vector<double> air;
  std::vector<double> mean_radiant;
  std::vector<double> resultant;
  std::vector<double> humidity;
  std::vector<double> air_changes;
  std::vector<double> cooling;     // W, averaged over the hour
  std::vector<double> outdoor_air; // m3/h entering directly from outside
};

struct StepDiagnostics {
  int record = 0;
  int coupling_iterations = 0;
  bool converged = true;
  double coupling_change = 0.0;   // K
  double thermal_residual = 0.0;  // W, worst node
  double airflow_residual = 0.0;  // kg/s, worst zone
  double moisture_residual = 0.0; // kg/s, worst zone
};

struct SimulationResult {
  std::vector<ZoneSeries> zones; // model zone order
  std::vector<StepDiagnostics> steps;
  int warmup_cycles = 0;
  double warmup_change = 0.0; // K, last cycle
  bool warmup_converged = false;
  std::vector<std::string> log;

  std::size_t hours() const { return zones.empty() ? 0 : zones.front().air.size(); }
  double worst_thermal_residual() const;
  double worst_airflow_residual() const;
  double worst_moisture_residual() const;
  bool all_converged() const;
};

/// Runs the weather sequence after periodic warm-up on its first day.
SimulationResult simulate(const BuildingModel& model, const WeatherSequence& weather,
                          const SimulationConfig& config = {});

/// Comfort and energy criteria of one zone over day `day` of the result.
CriteriaSummary zone_summary(const BuildingModel& model, const SimulationResult& result, std::size_t zone,
                             std::size_t day, const MetricsConfig& config = {});

/// Mean of `values` over day `day` (24 samples).
double daily_mean(const std::vector<double>& values, std::size_t day);

} // namespace tropitherm
