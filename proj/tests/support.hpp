#pragma once

#include "tropitherm/building_io.hpp"
#include "tropitherm/ecodom.hpp"
#include "tropitherm/model.hpp"
#include "tropitherm/weather.hpp"

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

namespace tropitherm::testing {

inline std::filesystem::path data_dir() { return TROPITHERM_DATA_DIR; }
inline std::filesystem::path test_data_dir() { return TROPITHERM_TEST_DATA_DIR; }

inline std::filesystem::path building_path(const std::string& name) {
  return data_dir() / "buildings" / (name + ".json");
}
inline BuildingModel fixture(const std::string& name) { return load_building(building_path(name)); }
inline WeatherSequence typical_day() { return load_weather(data_dir() / "weather" / "typical_day.csv"); }

inline WeatherRecord still_night(double dry_bulb) {
  WeatherRecord r;
  r.dry_bulb = dry_bulb;
  r.relative_humidity = 70.0;
  return r;
}

/// Concrete, insulation and plaster materials with one construction each.
inline void add_basic_constructions(BuildingModel& m) {
  m.materials = {{"concrete", 1.75, 2300.0, 920.0}, {"insulation", 0.041, 30.0, 1400.0},
                 {"plaster", 0.25, 900.0, 1000.0}};
  m.constructions = {{"concrete_wall", {{"concrete", 0.10}}, 0.5, 0.9},
                     {"insulated_wall", {{"insulation", 0.05}, {"plaster", 0.013}}, 0.5, 0.9}};
}

/// Zone with no gains and no conditioning.
inline Zone plain_zone(const std::string& id, double volume = 30.0, double floor_area = 11.0) {
  Zone z;
  z.id = id;
  z.volume = volume;
  z.floor_area = floor_area;
  return z;
}

inline AirflowLink door(const std::string& id, const std::string& from, const std::string& to, double width = 0.9,
                        double height = 2.0) {
  AirflowLink l;
  l.id = id;
  l.kind = LargeOpeningFlow{width, height, 0.78, true};
  l.from = ZoneEndpoint{from};
  l.to = ZoneEndpoint{to};
  l.mid_height = height / 2.0;
  return l;
}

inline AirflowLink crack_to_exterior(const std::string& id, const std::string& zone, double azimuth,
                                     double coefficient, double exponent, double mid_height = 1.0) {
  AirflowLink l;
  l.id = id;
  l.kind = CrackFlow{coefficient, exponent};
  l.from = ExteriorEndpoint{azimuth};
  l.to = ZoneEndpoint{zone};
  l.mid_height = mid_height;
  return l;
}

/// One hand-marked dwelling: a fixture plus a JSON Patch and expected verdicts.
struct ComplianceCase {
  std::string name;
  BuildingModel model;
  std::vector<std::pair<std::string, std::string>> expected; // rule -> verdict
};

inline std::vector<ComplianceCase> compliance_corpus() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(test_data_dir() / "compliance"))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<ComplianceCase> out;
  for (const auto& f : files) {
    const auto doc = read_json(f);
    const auto base = read_json(building_path(doc.at("base").get<std::string>()));
    ComplianceCase c;
    c.name = f.stem().string();
    c.model = building_from_json(base.patch(doc.at("patch")));
    for (const auto& [rule, verdict] : doc.at("expected").items()) c.expected.emplace_back(rule, verdict.get<std::string>());
    out.push_back(std::move(c));
  }
  return out;
}

/// Mismatches between the engine and a case, one line each; empty when all agree.
inline std::vector<std::string> compliance_mismatches(const ComplianceCase& c, const ecodom::RuleTables& tables) {
  const auto report = ecodom::check_compliance(c.model, tables);
  std::vector<std::string> out;
  for (const auto& [rule, want] : c.expected) {
    const auto got = report.verdict_of(rule);
    const std::string g = got ? ecodom::to_string(*got) : "<absent>";
    if (g != want) out.push_back(c.name + ": " + rule + " expected " + want + ", got " + g);
  }
  return out;
}

} // namespace tropitherm::testing
