#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace tropitherm {

struct WeatherRecord {
  int hour_index = 0;
  double dry_bulb = 25.0;          // degC
  double relative_humidity = 70.0; // %
  double direct_normal = 0.0;      // W/m2
  double diffuse_horizontal = 0.0; // W/m2
  double wind_speed = 0.0;         // m/s
  double wind_direction = 0.0;     // deg, direction the wind comes from
};

/// Site metadata carried by `# key: value` comment lines of a weather file.
struct WeatherSite {
  std::string label;
  int day_of_year = 15;
  double utc_offset_hours = 4.0;
};

struct WeatherSequence {
  std::vector<WeatherRecord> records; // length is a positive multiple of 24
  WeatherSite site;

  std::size_t days() const { return records.size() / 24; }
};

namespace compass {
inline constexpr double north = 0.0;
inline constexpr double east = 90.0;
inline constexpr double south_east = 135.0;
inline constexpr double south = 180.0;
inline constexpr double west = 270.0;
} // namespace compass

/// Column header every weather file must carry.
inline constexpr const char* weather_header = "hour,dry_bulb_C,rh_pct,dni_wm2,dhi_wm2,wind_ms,wind_dir_deg";

WeatherSequence parse_weather(std::istream& in, const std::string& source_name = "<stream>");
WeatherSequence load_weather(const std::filesystem::path& path);

/// Writes the sequence in the same format `load_weather` reads.
void write_weather(std::ostream& out, const WeatherSequence& weather);

/// Seven copies of a typical day differing only in wind: calm, then light
/// (1 m/s) and moderate (5 m/s) winds from the South East, East and North.
WeatherSequence build_wind_study(const std::vector<WeatherRecord>& base_day, const WeatherSite& site = {});

/// Replaces the wind of every record by a constant speed and direction.
void set_constant_wind(WeatherSequence& weather, double speed, double direction);

} // namespace tropitherm
