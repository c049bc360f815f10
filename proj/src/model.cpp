#include "tropitherm/model.hpp"

#include "tropitherm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

namespace tropitherm {

const Material* BuildingModel::find_material(const std::string& name) const {
  auto it = std::find_if(materials.begin(), materials.end(),
                         [&](const Material& m) { return m.name == name; });
  return it == materials.end() ? nullptr : &*it;
}

const Construction* BuildingModel::find_construction(const std::string& name) const {
  auto it = std::find_if(constructions.begin(), constructions.end(),
                         [&](const Construction& c) { return c.name == name; });
  return it == constructions.end() ? nullptr : &*it;
}

std::optional<std::size_t> BuildingModel::zone_index(const std::string& id) const {
  for (std::size_t i = 0; i < zones.size(); ++i) {
    if (zones[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> BuildingModel::surface_index(const std::string& id) const {
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    if (surfaces[i].id == id) return i;
  }
  return std::nullopt;
}

double BuildingModel::glazing_area_on(const std::string& surface_id) const {
  double total = 0.0;
  for (const auto& g : glazings) {
    if (g.surface == surface_id) total += g.area;
  }
  return total;
}

double BuildingModel::opaque_area(const Surface& surface) const {
  return std::max(0.0, surface.area - glazing_area_on(surface.id));
}

bool is_floor(const Surface& surface) { return surface.tilt > 135.0; }

bool is_roof(const Surface& surface) {
  return surface.tilt < 45.0 && std::holds_alternative<ExteriorBoundary>(surface.boundary);
}

bool is_wall(const Surface& surface) { return surface.tilt >= 45.0 && surface.tilt <= 135.0; }

std::string to_string(StructureClass value) {
  return value == StructureClass::Heavy ? "heavy" : "light";
}

std::string to_string(RoofType value) {
  switch (value) {
  case RoofType::Terrace: return "terrace";
  case RoofType::InclinedNoLoft: return "inclined_no_loft";
  case RoofType::ClosedLoft: return "closed_loft";
  case RoofType::VentilatedLoft: return "ventilated_loft";
  }
  return "unknown";
}

namespace {

bool in_unit_interval(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

void check_overhang(const std::optional<OverhangGeometry>& o, const std::string& entity,
                    std::vector<Violation>& out) {
  if (!o) return;
  if (!(o->depth >= 0.0)) out.push_back({entity, "overhang depth must be >= 0"});
  if (!(o->height > 0.0)) out.push_back({entity, "overhang protected height must be > 0"});
  if (!(o->gap >= 0.0)) out.push_back({entity, "overhang gap must be >= 0"});
}

const std::string* endpoint_zone(const LinkEndpoint& e) {
  if (auto z = std::get_if<ZoneEndpoint>(&e)) return &z->zone;
  return nullptr;
}

} // namespace

std::vector<Violation> validate(const BuildingModel& model) {
  std::vector<Violation> out;

  std::set<std::string> seen;
  for (const auto& m : model.materials) {
    const std::string entity = "material '" + m.name + "'";
    if (!seen.insert(m.name).second) out.push_back({entity, "duplicate material name"});
    if (!(m.conductivity > 0.0)) out.push_back({entity, "conductivity must be > 0"});
    if (!(m.density > 0.0)) out.push_back({entity, "density must be > 0"});
    if (!(m.specific_heat > 0.0)) out.push_back({entity, "specific_heat must be > 0"});
  }

  seen.clear();
  for (const auto& c : model.constructions) {
    const std::string entity = "construction '" + c.name + "'";
    if (!seen.insert(c.name).second) out.push_back({entity, "duplicate construction name"});
    if (c.layers.empty()) out.push_back({entity, "at least one layer required"});
    for (const auto& l : c.layers) {
      if (!(l.thickness > 0.0)) out.push_back({entity, "layer thickness must be > 0"});
      if (!model.find_material(l.material))
        out.push_back({entity, "unknown material '" + l.material + "'"});
    }
    if (!in_unit_interval(c.exterior_absorptivity))
      out.push_back({entity, "exterior_absorptivity must be in [0,1]"});
    if (!in_unit_interval(c.exterior_emissivity))
      out.push_back({entity, "exterior_emissivity must be in [0,1]"});
  }

  seen.clear();
  for (const auto& z : model.zones) {
    const std::string entity = "zone '" + z.id + "'";
    if (!seen.insert(z.id).second) out.push_back({entity, "duplicate zone id"});
    if (!(z.volume > 0.0)) out.push_back({entity, "volume must be > 0"});
    if (!(z.floor_area > 0.0)) out.push_back({entity, "floor_area must be > 0"});
    for (int h = 0; h < hours_per_day; ++h) {
      if (!(z.gains.sensible[h] >= 0.0) || !(z.gains.moisture[h] >= 0.0) ||
          !(z.gains.occupants[h] >= 0.0)) {
        out.push_back({entity, "gains must be >= 0"});
        break;
      }
    }
    if (z.conditioning && !std::isfinite(z.conditioning->setpoint))
      out.push_back({entity, "conditioning setpoint must be finite"});
    for (int f : z.facades) {
      if (f != 1 && f != 2) out.push_back({entity, "facade group must be 1 or 2"});
    }
  }

  seen.clear();
  for (const auto& s : model.surfaces) {
    const std::string entity = "surface '" + s.id + "'";
    if (!seen.insert(s.id).second) out.push_back({entity, "duplicate surface id"});
    if (!(s.area > 0.0)) out.push_back({entity, "area must be > 0"});
    if (!(s.azimuth >= 0.0 && s.azimuth < 360.0)) out.push_back({entity, "azimuth must be in [0,360)"});
    if (!(s.tilt >= 0.0 && s.tilt <= 180.0)) out.push_back({entity, "tilt must be in [0,180]"});
    if (!model.find_construction(s.construction))
      out.push_back({entity, "unknown construction '" + s.construction + "'"});
    if (!model.zone_index(s.zone)) out.push_back({entity, "unknown interior zone '" + s.zone + "'"});
    if (auto adj = std::get_if<AdjacentBoundary>(&s.boundary)) {
      if (!model.zone_index(adj->zone))
        out.push_back({entity, "unknown adjacent zone '" + adj->zone + "'"});
      else if (adj->zone == s.zone)
        out.push_back({entity, "adjacent zone must differ from interior zone"});
    }
    check_overhang(s.overhang, entity, out);
  }

  seen.clear();
  for (const auto& g : model.glazings) {
    const std::string entity = "glazing '" + g.id + "'";
    if (!seen.insert(g.id).second) out.push_back({entity, "duplicate glazing id"});
    if (!(g.area > 0.0)) out.push_back({entity, "area must be > 0"});
    auto host = model.surface_index(g.surface);
    if (!host) out.push_back({entity, "unknown host surface '" + g.surface + "'"});
    else if (!std::holds_alternative<ExteriorBoundary>(model.surfaces[*host].boundary))
      out.push_back({entity, "host surface must be exterior"});
    if (!in_unit_interval(g.solar_transmittance))
      out.push_back({entity, "solar_transmittance must be in [0,1]"});
    if (!in_unit_interval(g.shading_multiplier))
      out.push_back({entity, "shading_multiplier must be in [0,1]"});
    if (!(g.u_value > 0.0)) out.push_back({entity, "u_value must be > 0"});
    check_overhang(g.overhang, entity, out);
  }
  for (const auto& s : model.surfaces) {
    if (model.glazing_area_on(s.id) > s.area * (1.0 + 1e-12))
      out.push_back({"surface '" + s.id + "'", "glazing area exceeds surface area"});
  }

  seen.clear();
  for (const auto& l : model.links) {
    const std::string entity = "link '" + l.id + "'";
    if (!seen.insert(l.id).second) out.push_back({entity, "duplicate link id"});
    if (auto c = std::get_if<CrackFlow>(&l.kind)) {
      if (!(c->coefficient > 0.0)) out.push_back({entity, "flow coefficient must be > 0"});
      if (!(c->exponent >= 0.5 && c->exponent <= 1.0))
        out.push_back({entity, "flow exponent must be in [0.5,1]"});
    } else if (auto o = std::get_if<LargeOpeningFlow>(&l.kind)) {
      if (!(o->width > 0.0) || !(o->height > 0.0))
        out.push_back({entity, "opening width and height must be > 0"});
      if (!(o->discharge_coefficient > 0.0 && o->discharge_coefficient <= 1.0))
        out.push_back({entity, "discharge coefficient must be in (0,1]"});
      if (l.mid_height - o->height / 2.0 < -1e-9)
        out.push_back({entity, "opening extends below the ground datum"});
    }
    const std::string* zf = endpoint_zone(l.from);
    const std::string* zt = endpoint_zone(l.to);
    if (zf && !model.zone_index(*zf)) out.push_back({entity, "unknown zone '" + *zf + "'"});
    if (zt && !model.zone_index(*zt)) out.push_back({entity, "unknown zone '" + *zt + "'"});
    if ((!zf && !zt) || (zf && zt && *zf == *zt)) out.push_back({entity, "from != to"});
    for (const auto& e : {l.from, l.to}) {
      if (auto x = std::get_if<ExteriorEndpoint>(&e)) {
        if (!(x->facade_azimuth >= 0.0 && x->facade_azimuth < 360.0))
          out.push_back({entity, "facade azimuth must be in [0,360)"});
      }
    }
  }

  for (const auto& f : model.airflow.fixed_flows) {
    for (const auto& e : {f.from, f.to}) {
      if (auto z = endpoint_zone(e); z && !model.zone_index(*z))
        out.push_back({"fixed flow", "unknown zone '" + *z + "'"});
    }
    if (!(f.mass_flow >= 0.0)) out.push_back({"fixed flow", "mass flow must be >= 0"});
  }
  for (const auto& r : model.airflow.renewals) {
    if (!model.zone_index(r.zone)) out.push_back({"renewal", "unknown zone '" + r.zone + "'"});
    if (!(r.air_changes >= 0.0)) out.push_back({"renewal", "air changes must be >= 0"});
  }

  if (!in_unit_interval(model.site.ground_albedo))
    out.push_back({"site", "ground_albedo must be in [0,1]"});
  if (!(model.site.latitude >= -90.0 && model.site.latitude <= 90.0))
    out.push_back({"site", "latitude must be in [-90,90]"});

  // Zones must reach the exterior through the link graph unless flagged sealed.
  if (model.airflow.mode == AirflowMode::Network) {
    const std::size_t n = model.zones.size();
    std::vector<std::vector<std::size_t>> adjacency(n);
    std::vector<bool> reached(n, false);
    std::queue<std::size_t> frontier;
    for (const auto& l : model.links) {
      const std::string* zf = endpoint_zone(l.from);
      const std::string* zt = endpoint_zone(l.to);
      auto a = zf ? model.zone_index(*zf) : std::nullopt;
      auto b = zt ? model.zone_index(*zt) : std::nullopt;
      if (a && b) {
        adjacency[*a].push_back(*b);
        adjacency[*b].push_back(*a);
      } else if (a && !zt && !reached[*a]) {
        reached[*a] = true;
        frontier.push(*a);
      } else if (b && !zf && !reached[*b]) {
        reached[*b] = true;
        frontier.push(*b);
      }
    }
    while (!frontier.empty()) {
      auto i = frontier.front();
      frontier.pop();
      for (auto j : adjacency[i]) {
        if (!reached[j]) {
          reached[j] = true;
          frontier.push(j);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!reached[i] && !model.zones[i].sealed)
        out.push_back({"zone '" + model.zones[i].id + "'", "not connected to the exterior and not flagged sealed"});
    }
  }

  return out;
}

void require_valid(const BuildingModel& model) {
  auto violations = validate(model);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "building model '" << model.name << "' is invalid:";
  for (const auto& v : violations) msg << "\n  " << v.entity << ": " << v.rule;
  throw InputError(msg.str());
}

GainSchedule default_gain_schedule(RoomUse use, int adults, int children,
                                   const GainDefaults& d) {
  GainSchedule s;
  const double people = adults + children;
  const double sensible = adults * d.adult_sensible + children * d.child_sensible;
  const double moisture_gph = adults * d.adult_moisture + children * d.child_moisture;
  for (int h = 0; h < hours_per_day; ++h) {
    const bool night = h >= 20 || h < 6;
    const bool occupied = (use == RoomUse::Bedroom) ? night : !night;
    if (occupied) {
      s.occupants[h] = people;
      s.sensible[h] += sensible;
      s.moisture[h] += moisture_gph / 1000.0 / 3600.0;
    }
    if (h >= d.lighting_from && h < d.lighting_to) s.sensible[h] += d.lighting;
  }
  return s;
}

} // namespace tropitherm
