#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tropitherm {

inline constexpr int hours_per_day = 24;
using HourlyValues = std::array<double, hours_per_day>;
using HourlyFlags = std::array<bool, hours_per_day>;

struct Material {
  std::string name;
  double conductivity = 0.0;  // W/(m.K)
  double density = 0.0;       // kg/m3
  double specific_heat = 0.0; // J/(kg.K)
};

struct Layer {
  std::string material;
  double thickness = 0.0; // m
};

/// Layered opaque construction, exterior layer first.
struct Construction {
  std::string name;
  std::vector<Layer> layers;
  double exterior_absorptivity = 0.5;
  double exterior_emissivity = 0.9;
};

/// Horizontal projection above a protected element. `gap` is the vertical
/// offset between the overhang and the top of the element (0 for walls).
struct OverhangGeometry {
  double depth = 0.0;
  double height = 0.0;
  double gap = 0.0;
};

struct ExteriorBoundary {};
struct AdjacentBoundary {
  std::string zone;
};
struct GroundBoundary {};
using SurfaceBoundary = std::variant<ExteriorBoundary, AdjacentBoundary, GroundBoundary>;

/// Opaque envelope element seen from `zone`. `area` is gross: hosted glazing
/// is subtracted to obtain the conducting opaque area.
struct Surface {
  std::string id;
  std::string zone;
  double area = 0.0;    // m2
  double azimuth = 0.0; // deg clockwise from North
  double tilt = 90.0;   // deg from horizontal, 0 = roof, 90 = wall, 180 = floor
  std::string construction;
  SurfaceBoundary boundary = ExteriorBoundary{};
  std::optional<OverhangGeometry> overhang;
};

struct Glazing {
  std::string id;
  std::string surface;
  double area = 0.0;
  double solar_transmittance = 0.8;
  double u_value = 5.8; // W/(m2.K)
  std::optional<OverhangGeometry> overhang;
  double shading_multiplier = 1.0;
};

/// Hourly internal loads; index h applies to the hour ending at h:00.
struct GainSchedule {
  HourlyValues sensible{};  // W
  HourlyValues moisture{};  // kg/s
  HourlyValues occupants{}; // persons
};

struct InfinitePower {
  double setpoint = 25.0; // degC
  HourlyFlags schedule{};
};

struct Zone {
  std::string id;
  double volume = 0.0;     // m3
  double floor_area = 0.0; // m2
  GainSchedule gains;
  std::optional<InfinitePower> conditioning;
  bool sealed = false;

  // Compliance metadata.
  bool principal = false;
  std::vector<int> facades; // facade groups (1, 2) the room opens onto
  bool fan_provision = false;
};

struct CrackFlow {
  double coefficient = 0.0; // kg/(s.Pa^n) at 1.2 kg/m3
  double exponent = 0.65;
};

struct LargeOpeningFlow {
  double width = 0.0;
  double height = 0.0;
  double discharge_coefficient = 0.78;
  bool openable = true;
};

using LinkKind = std::variant<CrackFlow, LargeOpeningFlow>;

struct ExteriorEndpoint {
  double facade_azimuth = 0.0;
};
struct ZoneEndpoint {
  std::string zone;
};
using LinkEndpoint = std::variant<ExteriorEndpoint, ZoneEndpoint>;

/// Airflow path; positive flow runs from `from` to `to`. `mid_height` is
/// measured above the ground datum.
struct AirflowLink {
  std::string id;
  LinkKind kind = CrackFlow{};
  LinkEndpoint from = ExteriorEndpoint{};
  LinkEndpoint to = ExteriorEndpoint{};
  double mid_height = 1.0;
};

enum class AirflowMode { Network, Sealed, Fixed };

struct FixedFlow {
  LinkEndpoint from;
  LinkEndpoint to;
  double mass_flow = 0.0; // kg/s
};

/// Balanced outdoor air renewal expressed in volumes per hour.
struct FixedRenewal {
  std::string zone;
  double air_changes = 0.0;
};

struct AirflowSettings {
  AirflowMode mode = AirflowMode::Network;
  std::vector<FixedFlow> fixed_flows;
  std::vector<FixedRenewal> renewals;
};

struct Site {
  double latitude = -21.0;
  double longitude = 55.0;
  double ground_albedo = 0.2;
  double utc_offset_hours = 4.0;
};

enum class StructureClass { Light, Heavy };

// ---- compliance descriptors -------------------------------------------------

struct SitingDescriptor {
  double protected_perimeter_fraction = 0.0;
  double strip_width = 0.0; // m
};

enum class RoofType { Terrace, InclinedNoLoft, ClosedLoft, VentilatedLoft };

struct RoofDescriptor {
  RoofType type = RoofType::InclinedNoLoft;
  double loft_opening_area = 0.0; // m2
  double roof_area = 0.0;         // m2; 0 derives it from roof surfaces
};

/// Opening and room areas of the cross-ventilation rule (m2).
struct CrossVentilationInputs {
  double so1 = 0.0;
  double so2 = 0.0;
  double si1 = 0.0;
  double si2 = 0.0;
  double sp1 = 0.0;
  double sp2 = 0.0;
  bool opposing_facades = false;
};

struct WaterHeaterSpec {
  std::string kind; // solar | electric | gas
  bool certified = false;
  // solar
  double annual_production = 0.0; // kWh per m2 collector per year
  double storage_volume = 0.0;    // L
  double collector_area = 0.0;    // m2
  // electric
  bool instantaneous = false;
  bool off_peak_switch = false;
  double capacity = 0.0;         // L
  double cooling_constant = 0.0; // Wh/(24h.L.K)
  // gas
  bool flue_outlet = false;
};

struct AirConditioningSpec {
  std::string unit_type; // window | split
  double cop = 0.0;
  double mechanical_renewal = 0.0; // m3/h per conditioned room
  bool maintenance_contract = false;
};

struct ComplianceDescriptor {
  std::optional<SitingDescriptor> siting;
  std::optional<RoofDescriptor> roof;
  std::optional<CrossVentilationInputs> ventilation;
  std::optional<WaterHeaterSpec> water_heater;
  std::optional<AirConditioningSpec> air_conditioning;
  int principal_rooms = 0; // dwelling size; 0 counts principal zones
};

struct BuildingModel {
  std::string name;
  std::vector<Material> materials;
  std::vector<Construction> constructions;
  std::vector<Zone> zones;
  std::vector<Surface> surfaces;
  std::vector<Glazing> glazings;
  std::vector<AirflowLink> links;
  Site site;
  StructureClass structure_class = StructureClass::Light;
  AirflowSettings airflow;
  ComplianceDescriptor compliance;

  const Material* find_material(const std::string& name) const;
  const Construction* find_construction(const std::string& name) const;
  std::optional<std::size_t> zone_index(const std::string& id) const;
  std::optional<std::size_t> surface_index(const std::string& id) const;

  /// Total glazing area hosted by a surface.
  double glazing_area_on(const std::string& surface_id) const;
  /// Conducting opaque area: gross area minus hosted glazing.
  double opaque_area(const Surface& surface) const;
};

struct Violation {
  std::string entity;
  std::string rule;
};

/// Checks every type invariant and reference; an empty result means the model
/// is safe to simulate.
std::vector<Violation> validate(const BuildingModel& model);

/// Throws InputError listing the violations, if any.
void require_valid(const BuildingModel& model);

// ---- default internal loads -------------------------------------------------

enum class RoomUse { Bedroom, Living };

struct GainDefaults {
  double adult_sensible = 70.0;   // W
  double adult_moisture = 50.0;   // g/h
  double child_sensible = 50.0;   // W
  double child_moisture = 35.0;   // g/h
  double lighting = 100.0;        // W per room
  int lighting_from = 19;         // 19h00
  int lighting_to = 22;           // 22h00, exclusive
};

/// Bedrooms are occupied 20h00-06h00 and living rooms the rest of the day.
GainSchedule default_gain_schedule(RoomUse use, int adults, int children,
                                   const GainDefaults& defaults = {});

bool is_floor(const Surface& surface);
bool is_roof(const Surface& surface);
bool is_wall(const Surface& surface);

std::string to_string(StructureClass value);
std::string to_string(RoofType value);

} // namespace tropitherm
