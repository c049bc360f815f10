#include "tropitherm/metrics.hpp"

#include "tropitherm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tropitherm {

double mean_radiant(std::span<const SurfaceTemperature> surfaces) {
  if (surfaces.empty()) throw InputError("mean radiant temperature needs at least one surface");
  double weighted = 0.0;
  double area = 0.0;
  for (const auto& s : surfaces) {
    if (!(s.area > 0.0)) throw InputError("surface area must be > 0");
    weighted += s.area * s.temperature;
    area += s.area;
  }
  return weighted / area;
}

double resultant_temperature(double air, double mean_radiant) { return 0.55 * air + 0.45 * mean_radiant; }

ComfortSeries make_comfort_series(std::vector<double> air, std::vector<double> mr) {
  if (air.size() != mr.size()) throw InputError("air and mean radiant series differ in length");
  ComfortSeries s;
  s.resultant.reserve(air.size());
  for (std::size_t i = 0; i < air.size(); ++i) s.resultant.push_back(resultant_temperature(air[i], mr[i]));
  s.air = std::move(air);
  s.mean_radiant = std::move(mr);
  return s;
}

namespace {

bool in_window(int hour, int from, int to) {
  return from <= to ? hour >= from && hour < to : hour >= from || hour < to;
}

double window_mean(const std::vector<double>& v, int from, int to) {
  double sum = 0.0;
  int n = 0;
  for (int h = 0; h < 24; ++h)
    if (in_window(h, from, to)) {
      sum += v[h];
      ++n;
    }
  if (n == 0) throw InputError("empty averaging window");
  return sum / n;
}

} // namespace

double daily_energy_kwh(std::span<const double> power) {
  if (power.empty()) return 0.0;
  // Periodic trapezoid with 1 h spacing: each interval averages its end samples.
  double wh = 0.0;
  for (std::size_t i = 0; i < power.size(); ++i) wh += 0.5 * (power[i] + power[(i + 1) % power.size()]);
  return wh / 1000.0;
}

CriteriaSummary summarize(const ComfortSeries& series, std::span<const double> power, double floor_area,
                          const MetricsConfig& config) {
  if (series.resultant.size() != 24) throw InputError("summary needs 24 hourly values");
  if (!power.empty() && power.size() != 24) throw InputError("power series needs 24 hourly values");
  if (!(floor_area > 0.0)) throw InputError("floor area must be > 0");
  if (config.season_days < 0) throw InputError("season_days must be >= 0");

  CriteriaSummary s;
  s.day_resultant = window_mean(series.resultant, config.day_from, config.day_to);
  s.night_resultant = window_mean(series.resultant, config.night_from, config.night_to);
  s.max_resultant = *std::max_element(series.resultant.begin(), series.resultant.end());
  for (double p : power) s.max_power = std::max(s.max_power, p);
  s.max_power_per_m2 = s.max_power / floor_area;
  s.daily_energy = daily_energy_kwh(power);
  s.seasonal_energy = s.daily_energy * config.season_days;
  return s;
}

std::string describe_windows(const MetricsConfig& c) {
  return "day=[" + std::to_string(c.day_from) + "h," + std::to_string(c.day_to) + "h) night=[" +
         std::to_string(c.night_from) + "h," + std::to_string(c.night_to) + "h) half-open on hourly samples";
}

} // namespace tropitherm
