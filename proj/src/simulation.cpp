#include "tropitherm/simulation.hpp"

#include "tropitherm/constants.hpp"
#include "tropitherm/errors.hpp"
#include "tropitherm/moisture.hpp"
#include "tropitherm/solar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tropitherm {

double SimulationResult::worst_thermal_residual() const {
  double w = 0.0;
  for (const auto& s : steps) w = std::max(w, s.thermal_residual);
  return w;
}

double SimulationResult::worst_airflow_residual() const {
  double w = 0.0;
  for (const auto& s : steps) w = std::max(w, s.airflow_residual);
  return w;
}

double SimulationResult::worst_moisture_residual() const {
  double w = 0.0;
  for (const auto& s : steps) w = std::max(w, s.moisture_residual);
  return w;
}

bool SimulationResult::all_converged() const {
  return std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.converged; });
}

namespace {

struct RunState {
  ThermalState thermal;
  std::vector<double> humidity;
};

class Runner {
public:
  Runner(const BuildingModel& model, const WeatherSequence& weather, const SimulationConfig& config)
      : model_(model), weather_(weather), config_(config),
        layout_(discretize(model, config.thermal.nodes_per_layer)) {
    for (const auto& z : model.zones) volumes_.push_back(z.volume);
  }

  RunState initial_state() const {
    double mean = 0.0;
    for (std::size_t h = 0; h < 24; ++h) mean += weather_.records[h].dry_bulb;
    mean /= 24.0;
    const double t0 = config_.initial_temperature.value_or(mean);
    const auto& r0 = weather_.records.front();
    RunState s;
    s.thermal.temperatures = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(layout_.size()), t0);
    s.humidity.assign(model_.zones.size(), outdoor_specific_humidity(r0.dry_bulb, r0.relative_humidity));
    return s;
  }

  /// Advances one weather record; fills `out` when non-null.
  void step(RunState& state, std::size_t record, SimulationResult* out) {
    const WeatherRecord& rec = weather_.records[record];
    const int hour = static_cast<int>(record % 24);
    StepInputs inputs;
    inputs.weather = &rec;
    inputs.hour = hour;
    inputs.sun = solar_position({weather_.site.day_of_year, static_cast<double>(hour), weather_.site.utc_offset_hours},
                                model_.site.latitude, model_.site.longitude);

    std::vector<std::optional<double>> setpoints(model_.zones.size());
    if (config_.conditioning)
      for (std::size_t z = 0; z < model_.zones.size(); ++z) {
        const auto& c = model_.zones[z].conditioning;
        if (c && c->schedule[hour]) setpoints[z] = c->setpoint;
      }

    const int substeps = std::max(1, config_.substeps);
    const double dt = 3600.0 / substeps;
    const double w_out = outdoor_specific_humidity(rec.dry_bulb, rec.relative_humidity);
    std::vector<double> gains;
    for (const auto& z : model_.zones) gains.push_back(z.gains.moisture[hour]);

    StepDiagnostics diag;
    diag.record = static_cast<int>(record);
    std::vector<double> cooling(model_.zones.size(), 0.0);
    CoupledStep coupled;
    for (int k = 0; k < substeps; ++k) {
      coupled = couple_zones(model_, layout_, state.thermal, inputs, config_.thermal, config_.airflow, dt, setpoints);
      diag.coupling_iterations = std::max(diag.coupling_iterations, coupled.iterations);
      diag.converged = diag.converged && coupled.converged;
      diag.coupling_change = std::max(diag.coupling_change, coupled.max_change);
      diag.thermal_residual =
          std::max(diag.thermal_residual, energy_residual(coupled.system, layout_, state.thermal, coupled.result, dt));
      diag.airflow_residual = std::max(diag.airflow_residual, coupled.airflow.max_residual());

      const auto temps = air_temperatures(layout_, coupled.result.state);
      auto moist = step_moisture(state.humidity, temps, volumes_, coupled.airflow, gains, w_out, dt);
      diag.moisture_residual = std::max(diag.moisture_residual, moist.balance_residual);
      if (out)
        for (auto& w : moist.warnings) out->log.push_back("record " + std::to_string(record) + ": " + w);
      state.humidity = std::move(moist.humidity);
      state.thermal = coupled.result.state;
      for (std::size_t z = 0; z < cooling.size(); ++z) cooling[z] += coupled.result.cooling[z] / substeps;
    }
    if (!out) return;

    const auto air = air_temperatures(layout_, state.thermal);
    const auto mr = mean_radiant_temperatures(model_, layout_, config_.thermal, state.thermal);
    for (std::size_t z = 0; z < model_.zones.size(); ++z) {
      auto& zs = out->zones[z];
      zs.air.push_back(air[z]);
      zs.mean_radiant.push_back(mr[z]);
      zs.resultant.push_back(resultant_temperature(air[z], mr[z]));
      zs.humidity.push_back(state.humidity[z]);
      zs.air_changes.push_back(tropitherm::air_changes(model_.zones[z], z, coupled.airflow, air[z]));
      zs.cooling.push_back(cooling[z]);
      double outdoor = 0.0;
      for (const auto& path : coupled.airflow.paths) {
        if (path.from == exterior_node && path.to == static_cast<int>(z)) outdoor += path.forward;
        if (path.to == exterior_node && path.from == static_cast<int>(z)) outdoor += path.reverse;
      }
      zs.outdoor_air.push_back(outdoor / constants::air_density(air[z]) * 3600.0);
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "record %zu hour %d iterations %d %s max_dT %.3g K", record, hour,
                  diag.coupling_iterations, diag.converged ? "converged" : "NOT CONVERGED", diag.coupling_change);
    out->log.emplace_back(buf);
    out->steps.push_back(diag);
  }

  const NodeLayout& layout() const { return layout_; }

private:
  const BuildingModel& model_;
  const WeatherSequence& weather_;
  const SimulationConfig& config_;
  NodeLayout layout_;
  std::vector<double> volumes_;
};

} // namespace

SimulationResult simulate(const BuildingModel& model, const WeatherSequence& weather, const SimulationConfig& config) {
  require_valid(model);
  if (weather.records.empty() || weather.records.size() % 24 != 0)
    throw InputError("weather length must be multiple of 24");

  Runner runner(model, weather, config);
  SimulationResult result;
  for (const auto& z : model.zones) result.zones.push_back({z.id, {}, {}, {}, {}, {}, {}, {}});

  RunState state = runner.initial_state();
  for (int cycle = 1; cycle <= config.max_warmup_cycles; ++cycle) {
    const Eigen::VectorXd before = state.thermal.temperatures;
    for (std::size_t r = 0; r < 24; ++r) runner.step(state, r, nullptr);
    result.warmup_cycles = cycle;
    result.warmup_change = (state.thermal.temperatures - before).cwiseAbs().maxCoeff();
    if (result.warmup_change < config.warmup_tolerance) {
      result.warmup_converged = true;
      break;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "warm-up: %d cycles, last change %.3g K%s", result.warmup_cycles,
                result.warmup_change, result.warmup_converged ? "" : " (cap reached)");
  result.log.emplace_back(buf);

  state.thermal.time = 0.0;
  for (std::size_t r = 0; r < weather.records.size(); ++r) runner.step(state, r, &result);
  return result;
}

double daily_mean(const std::vector<double>& values, std::size_t day) {
  if (values.size() < (day + 1) * 24) throw InputError("day out of range");
  double sum = 0.0;
  for (std::size_t h = 0; h < 24; ++h) sum += values[day * 24 + h];
  return sum / 24.0;
}

CriteriaSummary zone_summary(const BuildingModel& model, const SimulationResult& result, std::size_t zone,
                             std::size_t day, const MetricsConfig& config) {
  const auto& zs = result.zones.at(zone);
  if (zs.air.size() < (day + 1) * 24) throw InputError("day out of range");
  auto slice = [&](const std::vector<double>& v) {
    return std::vector<double>(v.begin() + static_cast<long>(day * 24), v.begin() + static_cast<long>(day * 24 + 24));
  };
  const auto series = make_comfort_series(slice(zs.air), slice(zs.mean_radiant));
  const auto power = slice(zs.cooling);
  return summarize(series, power, model.zones.at(zone).floor_area, config);
}

} // namespace tropitherm
