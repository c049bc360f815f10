#pragma once

#include <span>
#include <string>
#include <vector>

namespace tropitherm {

struct SurfaceTemperature {
  double area = 0.0;        // m2
  double temperature = 0.0; // degC
};

/// Area-weighted mean of interior surface temperatures. Throws InputError on
/// an empty list or a non-positive area.
double mean_radiant(std::span<const SurfaceTemperature> surfaces);

/// 0.55 T_a + 0.45 T_r.
double resultant_temperature(double air, double mean_radiant);

/// Hourly comfort series of one zone; index h is the sample at h:00.
struct ComfortSeries {
  std::vector<double> air;
  std::vector<double> mean_radiant;
  std::vector<double> resultant;
};

ComfortSeries make_comfort_series(std::vector<double> air, std::vector<double> mean_radiant);

struct MetricsConfig {
  int day_from = 7;    // first hour of the day window
  int day_to = 19;     // exclusive
  int night_from = 20; // wraps past midnight
  int night_to = 6;    // exclusive
  int season_days = 181;
};

struct CriteriaSummary {
  double day_resultant = 0.0;    // degC
  double night_resultant = 0.0;  // degC
  double max_resultant = 0.0;    // degC
  double max_power = 0.0;        // W
  double max_power_per_m2 = 0.0; // W/m2
  double daily_energy = 0.0;     // kWh thermal
  double seasonal_energy = 0.0;  // kWh thermal
};

/// Day and night averages over half-open hour windows, maxima, and the
/// periodic trapezoidal integral of the hourly cooling power.
CriteriaSummary summarize(const ComfortSeries& series, std::span<const double> power, double floor_area,
                          const MetricsConfig& config = {});

/// Trapezoidal integral (kWh) of hourly power samples of a periodic day.
double daily_energy_kwh(std::span<const double> power);

/// Description of the hour windows, recorded alongside results.
std::string describe_windows(const MetricsConfig& config);

} // namespace tropitherm
