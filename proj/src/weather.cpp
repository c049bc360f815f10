#include "tropitherm/weather.hpp"

#include "tropitherm/errors.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tropitherm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string& source, int line) {
  return source + ":" + std::to_string(line) + ": ";
}

double parse_number(const std::string& text, const char* field, const std::string& source, int line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError(where(source, line) + "cannot parse " + field + " from '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value))
    throw InputError(where(source, line) + "cannot parse " + field + " from '" + text + "'");
  return value;
}

void parse_metadata(const std::string& comment, WeatherSite& site) {
  const auto colon = comment.find(':');
  if (colon == std::string::npos) return;
  const std::string key = trim(comment.substr(0, colon));
  const std::string value = trim(comment.substr(colon + 1));
  try {
    if (key == "label") site.label = value;
    else if (key == "day_of_year") site.day_of_year = std::stoi(value);
    else if (key == "utc_offset_hours") site.utc_offset_hours = std::stod(value);
  } catch (const std::exception&) {
    throw InputError("bad weather metadata '" + key + "': '" + value + "'");
  }
}

} // namespace

WeatherSequence parse_weather(std::istream& in, const std::string& source) {
  WeatherSequence seq;
  std::string raw;
  int line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (!header_seen) parse_metadata(text.substr(1), seq.site);
      continue;
    }
    if (!header_seen) {
      std::string compact;
      for (char c : text)
        if (c != ' ' && c != '\t') compact += c;
      if (compact != weather_header)
        throw InputError(where(source, line) + "expected header '" + weather_header + "'");
      header_seen = true;
      continue;
    }

    std::array<std::string, 7> cells;
    std::stringstream row(text);
    std::size_t n = 0;
    std::string cell;
    while (std::getline(row, cell, ',')) {
      if (n == cells.size()) throw InputError(where(source, line) + "too many columns (expected 7)");
      cells[n++] = trim(cell);
    }
    if (n != cells.size()) throw InputError(where(source, line) + "expected 7 columns, found " + std::to_string(n));

    WeatherRecord r;
    const double hour = parse_number(cells[0], "hour", source, line);
    r.dry_bulb = parse_number(cells[1], "dry_bulb", source, line);
    r.relative_humidity = parse_number(cells[2], "relative_humidity", source, line);
    r.direct_normal = parse_number(cells[3], "direct_normal", source, line);
    r.diffuse_horizontal = parse_number(cells[4], "diffuse_horizontal", source, line);
    r.wind_speed = parse_number(cells[5], "wind_speed", source, line);
    r.wind_direction = parse_number(cells[6], "wind_direction", source, line);

    if (hour != std::floor(hour) || hour < 0.0 || hour > 23.0)
      throw InputError(where(source, line) + "hour must be an integer in 0..23");
    r.hour_index = static_cast<int>(hour);
    const int expected = static_cast<int>(seq.records.size() % 24);
    if (r.hour_index != expected)
      throw InputError(where(source, line) + "hour " + std::to_string(r.hour_index) + " out of sequence, expected " +
                       std::to_string(expected));
    if (!(r.relative_humidity >= 0.0 && r.relative_humidity <= 100.0))
      throw InputError(where(source, line) + "relative_humidity must be in [0,100]");
    if (!(r.direct_normal >= 0.0)) throw InputError(where(source, line) + "direct_normal must be >= 0");
    if (!(r.diffuse_horizontal >= 0.0)) throw InputError(where(source, line) + "diffuse_horizontal must be >= 0");
    if (!(r.wind_speed >= 0.0)) throw InputError(where(source, line) + "wind_speed must be >= 0");
    if (!(r.wind_direction >= 0.0 && r.wind_direction < 360.0))
      throw InputError(where(source, line) + "wind_direction must be in [0,360)");
    seq.records.push_back(r);
  }
  if (!header_seen) throw InputError(source + ": missing header row");
  if (seq.records.empty() || seq.records.size() % 24 != 0)
    throw InputError(source + ": length must be multiple of 24 (found " + std::to_string(seq.records.size()) +
                     " records)");
  return seq;
}

WeatherSequence load_weather(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open weather file '" + path.string() + "'");
  return parse_weather(in, path.string());
}

void write_weather(std::ostream& out, const WeatherSequence& w) {
  if (!w.site.label.empty()) out << "# label: " << w.site.label << '\n';
  out << "# day_of_year: " << w.site.day_of_year << '\n';
  out << "# utc_offset_hours: " << w.site.utc_offset_hours << '\n';
  out << weather_header << '\n';
  char buf[256];
  for (const auto& r : w.records) {
    std::snprintf(buf, sizeof buf, "%d,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", r.hour_index, r.dry_bulb,
                  r.relative_humidity, r.direct_normal, r.diffuse_horizontal, r.wind_speed, r.wind_direction);
    out << buf;
  }
}

WeatherSequence build_wind_study(const std::vector<WeatherRecord>& base_day, const WeatherSite& site) {
  if (base_day.size() != 24)
    throw InputError("wind study needs a 24-record base day, got " + std::to_string(base_day.size()));

  struct Wind {
    double speed;
    double direction;
  };
  static constexpr std::array<Wind, 7> days{{
      {0.0, compass::north},
      {1.0, compass::south_east},
      {5.0, compass::south_east},
      {1.0, compass::east},
      {5.0, compass::east},
      {1.0, compass::north},
      {5.0, compass::north},
  }};

  WeatherSequence seq;
  seq.site = site;
  seq.records.reserve(7 * 24);
  for (const auto& wind : days) {
    for (const auto& r : base_day) {
      WeatherRecord copy = r;
      copy.wind_speed = wind.speed;
      copy.wind_direction = wind.direction;
      seq.records.push_back(copy);
    }
  }
  return seq;
}

void set_constant_wind(WeatherSequence& weather, double speed, double direction) {
  for (auto& r : weather.records) {
    r.wind_speed = speed;
    r.wind_direction = direction;
  }
}

} // namespace tropitherm
