#pragma once

#include "tropitherm/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tropitherm::ecodom {

enum class Verdict { Pass, Fail, NotApplicable };
enum class Family { Siting, Roof, Walls, Windows, Ventilation, WaterHeater, AirConditioning };

std::string to_string(Verdict v);
std::string to_string(Family f);

struct RuleResult {
  std::string rule;
  Family family = Family::Siting;
  std::string entity; // surface, glazing or zone id, or "dwelling"
  Verdict verdict = Verdict::NotApplicable;
  std::optional<double> measured;
  std::optional<double> required;
  std::string citation;
  std::string note;
};

struct ComplianceReport {
  std::string building;
  std::vector<RuleResult> results;
  std::map<std::string, std::string> metadata;

  bool passed() const; // no Fail
  std::size_t count(Verdict v) const;
  /// Fail if any entity fails, else Pass if any passes, else NotApplicable.
  std::optional<Verdict> verdict_of(const std::string& rule) const;
};

enum class Orientation { N, E, S, W };
enum class ColorClass { Light, Medium, Dark };

std::string to_string(Orientation o);
std::string to_string(ColorClass c);

/// North covers [315, 45) degrees, East [45, 135), South [135, 225), West [225, 315).
Orientation orientation_of(double azimuth);

struct ElectricHeaterRow {
  int min_rooms = 0;
  int max_rooms = 0;
  double min_capacity = 0.0;
  double max_cooling_constant = 0.0;
};

struct CollectorRow {
  int min_rooms = 0;
  int max_rooms = 0;
  double min_collector_area = 0.0;
};

/// Thresholds and table cells, loaded from data files.
struct RuleTables {
  // Scalar prescriptions.
  double siting_fraction = 0.75; // strict lower bound
  double siting_width = 3.0;
  double roof_vent_ratio = 0.15;
  double permeability = 0.25;
  std::map<std::string, double> ac_min_cop;
  double ac_renewal = 25.0;
  double light_max_absorptivity = 0.4;
  double medium_max_absorptivity = 0.7;
  double reference_conductivity = 0.041;
  double max_insulant_conductivity = 0.06;

  // Tables keyed by (category, class) strings.
  std::map<std::pair<std::string, std::string>, double> roof_insulation;     // (roof, color) -> cm
  std::map<std::pair<std::string, std::string>, double> wall_overhang;       // (orientation, inertia) -> d/h
  std::map<std::pair<std::string, std::string>, double> wall_insulation;     // (orientation, color) -> cm
  std::map<std::string, double> window_overhang;                            // orientation -> d/(2a+h)
  double window_device_multiplier = 0.3;

  double solar_min_production = 700.0;
  double solar_storage_min = 60.0;
  double solar_storage_max = 120.0;
  std::vector<CollectorRow> solar_rows;
  std::vector<ElectricHeaterRow> electric_rows;

  std::map<std::string, std::string> citations; // rule id -> citation
  std::string citation(const std::string& rule) const;
};

RuleTables load_rule_tables(const std::filesystem::path& directory);
std::filesystem::path default_rules_dir();

/// Every rule id the engine can emit.
const std::vector<std::string>& rule_catalogue();

ColorClass color_class(double absorptivity, const RuleTables& tables);
/// Insulant thickness (cm) rescaled to the reference conductivity.
double equivalent_insulation_cm(const BuildingModel& model, const Construction& construction,
                                const RuleTables& tables);

std::vector<RuleResult> check_siting(const std::optional<SitingDescriptor>& siting, const RuleTables& tables);
RuleResult check_roof_vent(double opening_area, double roof_area, const RuleTables& tables);
std::vector<RuleResult> check_roof(const BuildingModel& model, const RuleTables& tables);
std::vector<RuleResult> check_walls(const BuildingModel& model, const RuleTables& tables);
std::vector<RuleResult> check_windows(const BuildingModel& model, const RuleTables& tables);
std::vector<RuleResult> check_solar_protection(const BuildingModel& model, const RuleTables& tables);

/// Opening and room areas of principal rooms, either declared or derived from
/// zone facade metadata and openable large openings. Empty with `why` set when
/// the model lacks facade metadata.
std::optional<CrossVentilationInputs> ventilation_inputs(const BuildingModel& model, std::string* why = nullptr);
std::vector<RuleResult> check_cross_ventilation(const BuildingModel& model, const RuleTables& tables);
std::vector<RuleResult> check_cross_ventilation(const CrossVentilationInputs& in, const RuleTables& tables);
std::vector<RuleResult> check_fans(const BuildingModel& model, const RuleTables& tables);

std::vector<RuleResult> check_water_heating(const std::optional<WaterHeaterSpec>& spec, int principal_rooms,
                                            const RuleTables& tables);
std::vector<RuleResult> check_ac_option(const std::optional<AirConditioningSpec>& spec, const RuleTables& tables);

int principal_room_count(const BuildingModel& model);

ComplianceReport check_compliance(const BuildingModel& model, const RuleTables& tables);

nlohmann::json report_to_json(const ComplianceReport& report);
std::string report_to_text(const ComplianceReport& report);

} // namespace tropitherm::ecodom
