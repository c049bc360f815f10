#pragma once

#include "tropitherm/airflow.hpp"

#include <span>
#include <string>
#include <vector>

namespace tropitherm {

inline constexpr double max_specific_humidity = 0.05; // kg/kg

/// Saturation vapour pressure over water (Pa), Magnus form.
double saturation_pressure(double dry_bulb_c);

/// Specific humidity (kg water / kg dry air) at atmospheric pressure.
double outdoor_specific_humidity(double dry_bulb_c, double relative_humidity_pct);

struct MoistureStep {
  std::vector<double> humidity;  // kg/kg per zone
  double balance_residual = 0.0; // kg/s, worst zone, before clamping
  std::vector<std::string> warnings;
};

/// Implicit step of rho V dw/dt = sum(in m w_src) - sum(out m) w + G per zone.
/// Walls and furniture do not buffer moisture.
MoistureStep step_moisture(std::span<const double> humidity, std::span<const double> zone_temperatures,
                           std::span<const double> volumes, const AirflowSolution& airflow,
                           std::span<const double> gains, double outdoor_humidity, double dt);

/// Water storage imbalance (kg/s) of a step, worst zone.
double moisture_balance(std::span<const double> before, std::span<const double> after,
                        std::span<const double> zone_temperatures, std::span<const double> volumes,
                        const AirflowSolution& airflow, std::span<const double> gains,
                        double outdoor_humidity, double dt);

} // namespace tropitherm
