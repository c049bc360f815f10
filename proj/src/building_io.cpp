#include "tropitherm/building_io.hpp"

#include "tropitherm/errors.hpp"

#include <fstream>

namespace tropitherm {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw InputError(path + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(path + "." + key + ": wrong type");
  }
}

template <class T>
T field_or(const json& j, const std::string& key, T fallback, const std::string& path) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return field<T>(j, key, path);
}

const json& array_field(const json& j, const std::string& key, const std::string& path) {
  static const json empty = json::array();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_array()) throw InputError(path + "." + key + ": expected an array");
  return j.at(key);
}

std::string at(const std::string& path, const std::string& key, std::size_t i) {
  return (path.empty() ? key : path + "." + key) + "[" + std::to_string(i) + "]";
}

HourlyValues hourly(const json& j, const std::string& key, const std::string& path) {
  HourlyValues out{};
  if (!j.contains(key)) return out;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 24) throw InputError(path + "." + key + ": expected 24 values");
  for (std::size_t h = 0; h < 24; ++h) {
    if (!a[h].is_number()) throw InputError(at(path, key, h) + ": expected a number");
    out[h] = a[h].get<double>();
  }
  return out;
}

std::optional<OverhangGeometry> overhang(const json& j, const std::string& path) {
  if (!j.contains("overhang") || j.at("overhang").is_null()) return std::nullopt;
  const auto& o = j.at("overhang");
  const std::string p = path + ".overhang";
  return OverhangGeometry{field<double>(o, "depth", p), field<double>(o, "height", p), field_or(o, "gap", 0.0, p)};
}

json overhang_json(const std::optional<OverhangGeometry>& o) {
  if (!o) return nullptr;
  return {{"depth", o->depth}, {"height", o->height}, {"gap", o->gap}};
}

LinkEndpoint endpoint(const json& j, const std::string& path) {
  if (j.is_object() && j.contains("zone")) return ZoneEndpoint{field<std::string>(j, "zone", path)};
  if (j.is_object() && j.contains("exterior")) return ExteriorEndpoint{field<double>(j, "exterior", path)};
  throw InputError(path + ": endpoint needs 'zone' or 'exterior'");
}

json endpoint_json(const LinkEndpoint& e) {
  if (auto z = std::get_if<ZoneEndpoint>(&e)) return {{"zone", z->zone}};
  return {{"exterior", std::get<ExteriorEndpoint>(e).facade_azimuth}};
}

GainSchedule gains(const json& j, const std::string& path) {
  if (!j.contains("gains")) return {};
  const auto& g = j.at("gains");
  const std::string p = path + ".gains";
  if (g.contains("default")) {
    const auto& d = g.at("default");
    const std::string dp = p + ".default";
    const auto use = field<std::string>(d, "use", dp);
    if (use != "bedroom" && use != "living") throw InputError(dp + ".use: expected 'bedroom' or 'living'");
    return default_gain_schedule(use == "bedroom" ? RoomUse::Bedroom : RoomUse::Living,
                                 field_or(d, "adults", 0, dp), field_or(d, "children", 0, dp));
  }
  return {hourly(g, "sensible", p), hourly(g, "moisture", p), hourly(g, "occupants", p)};
}

std::optional<InfinitePower> conditioning(const json& j, const std::string& path) {
  if (!j.contains("conditioning") || j.at("conditioning").is_null()) return std::nullopt;
  const auto& c = j.at("conditioning");
  const std::string p = path + ".conditioning";
  InfinitePower ip;
  ip.setpoint = field<double>(c, "setpoint", p);
  if (c.contains("schedule")) {
    const auto& s = c.at("schedule");
    if (!s.is_array() || s.size() != 24) throw InputError(p + ".schedule: expected 24 booleans");
    for (std::size_t h = 0; h < 24; ++h) {
      if (!s[h].is_boolean()) throw InputError(at(p, "schedule", h) + ": expected a boolean");
      ip.schedule[h] = s[h].get<bool>();
    }
  } else {
    // Half-open [from, to) window, wrapping past midnight.
    const int from = field<int>(c, "from", p);
    const int to = field<int>(c, "to", p);
    if (from < 0 || from > 23 || to < 0 || to > 24) throw InputError(p + ": hours must lie in 0..24");
    for (int h = 0; h < 24; ++h) ip.schedule[h] = from <= to ? (h >= from && h < to) : (h >= from || h < to);
  }
  return ip;
}

SurfaceBoundary boundary(const json& j, const std::string& path) {
  if (!j.contains("boundary")) return ExteriorBoundary{};
  const auto& b = j.at("boundary");
  if (b.is_string()) {
    const auto s = b.get<std::string>();
    if (s == "exterior") return ExteriorBoundary{};
    if (s == "ground") return GroundBoundary{};
    throw InputError(path + ".boundary: unknown boundary '" + s + "'");
  }
  return AdjacentBoundary{field<std::string>(b, "adjacent", path + ".boundary")};
}

json boundary_json(const SurfaceBoundary& b) {
  if (std::holds_alternative<ExteriorBoundary>(b)) return "exterior";
  if (std::holds_alternative<GroundBoundary>(b)) return "ground";
  return {{"adjacent", std::get<AdjacentBoundary>(b).zone}};
}

AirflowMode airflow_mode(const std::string& s, const std::string& path) {
  if (s == "network") return AirflowMode::Network;
  if (s == "sealed") return AirflowMode::Sealed;
  if (s == "fixed") return AirflowMode::Fixed;
  throw InputError(path + ".mode: unknown airflow mode '" + s + "'");
}

std::string to_string(AirflowMode m) {
  switch (m) {
  case AirflowMode::Network: return "network";
  case AirflowMode::Sealed: return "sealed";
  case AirflowMode::Fixed: return "fixed";
  }
  return "network";
}

ComplianceDescriptor compliance(const json& j) {
  ComplianceDescriptor d;
  if (!j.contains("compliance")) return d;
  const auto& c = j.at("compliance");
  const std::string p = "compliance";
  d.principal_rooms = field_or(c, "principal_rooms", 0, p);
  if (c.contains("siting")) {
    const auto& s = c.at("siting");
    d.siting = SitingDescriptor{field<double>(s, "protected_perimeter_fraction", p + ".siting"),
                                field<double>(s, "strip_width", p + ".siting")};
  }
  if (c.contains("roof")) {
    const auto& r = c.at("roof");
    const std::string rp = p + ".roof";
    d.roof = RoofDescriptor{roof_type_from_string(field<std::string>(r, "type", rp)),
                            field_or(r, "loft_opening_area", 0.0, rp), field_or(r, "roof_area", 0.0, rp)};
  }
  if (c.contains("ventilation")) {
    const auto& v = c.at("ventilation");
    const std::string vp = p + ".ventilation";
    d.ventilation = CrossVentilationInputs{field<double>(v, "so1", vp), field<double>(v, "so2", vp),
                                           field<double>(v, "si1", vp), field<double>(v, "si2", vp),
                                           field<double>(v, "sp1", vp), field<double>(v, "sp2", vp),
                                           field_or(v, "opposing_facades", false, vp)};
  }
  if (c.contains("water_heater")) {
    const auto& w = c.at("water_heater");
    const std::string wp = p + ".water_heater";
    WaterHeaterSpec s;
    s.kind = field<std::string>(w, "kind", wp);
    s.certified = field_or(w, "certified", false, wp);
    s.annual_production = field_or(w, "annual_production", 0.0, wp);
    s.storage_volume = field_or(w, "storage_volume", 0.0, wp);
    s.collector_area = field_or(w, "collector_area", 0.0, wp);
    s.instantaneous = field_or(w, "instantaneous", false, wp);
    s.off_peak_switch = field_or(w, "off_peak_switch", false, wp);
    s.capacity = field_or(w, "capacity", 0.0, wp);
    s.cooling_constant = field_or(w, "cooling_constant", 0.0, wp);
    s.flue_outlet = field_or(w, "flue_outlet", false, wp);
    d.water_heater = s;
  }
  if (c.contains("air_conditioning")) {
    const auto& a = c.at("air_conditioning");
    const std::string ap = p + ".air_conditioning";
    d.air_conditioning = AirConditioningSpec{field<std::string>(a, "unit_type", ap), field<double>(a, "cop", ap),
                                             field_or(a, "mechanical_renewal", 0.0, ap),
                                             field_or(a, "maintenance_contract", false, ap)};
  }
  return d;
}

json compliance_json(const ComplianceDescriptor& d) {
  json c = {{"principal_rooms", d.principal_rooms}};
  if (d.siting)
    c["siting"] = {{"protected_perimeter_fraction", d.siting->protected_perimeter_fraction},
                   {"strip_width", d.siting->strip_width}};
  if (d.roof)
    c["roof"] = {{"type", to_string(d.roof->type)},
                 {"loft_opening_area", d.roof->loft_opening_area},
                 {"roof_area", d.roof->roof_area}};
  if (d.ventilation) {
    const auto& v = *d.ventilation;
    c["ventilation"] = {{"so1", v.so1}, {"so2", v.so2}, {"si1", v.si1}, {"si2", v.si2},
                        {"sp1", v.sp1}, {"sp2", v.sp2}, {"opposing_facades", v.opposing_facades}};
  }
  if (d.water_heater) {
    const auto& w = *d.water_heater;
    c["water_heater"] = {{"kind", w.kind},
                         {"certified", w.certified},
                         {"annual_production", w.annual_production},
                         {"storage_volume", w.storage_volume},
                         {"collector_area", w.collector_area},
                         {"instantaneous", w.instantaneous},
                         {"off_peak_switch", w.off_peak_switch},
                         {"capacity", w.capacity},
                         {"cooling_constant", w.cooling_constant},
                         {"flue_outlet", w.flue_outlet}};
  }
  if (d.air_conditioning) {
    const auto& a = *d.air_conditioning;
    c["air_conditioning"] = {{"unit_type", a.unit_type},
                             {"cop", a.cop},
                             {"mechanical_renewal", a.mechanical_renewal},
                             {"maintenance_contract", a.maintenance_contract}};
  }
  return c;
}

} // namespace

RoofType roof_type_from_string(const std::string& s) {
  for (auto t : {RoofType::Terrace, RoofType::InclinedNoLoft, RoofType::ClosedLoft, RoofType::VentilatedLoft})
    if (to_string(t) == s) return t;
  throw InputError("unknown roof type '" + s + "'");
}

StructureClass structure_class_from_string(const std::string& s) {
  if (s == "light") return StructureClass::Light;
  if (s == "heavy") return StructureClass::Heavy;
  throw InputError("unknown structure class '" + s + "'");
}

BuildingModel building_from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("building document must be a JSON object");
  BuildingModel m;
  m.name = field_or<std::string>(doc, "name", "", "");
  m.structure_class = structure_class_from_string(field_or<std::string>(doc, "structure_class", "light", ""));

  if (doc.contains("site")) {
    const auto& s = doc.at("site");
    m.site.latitude = field_or(s, "latitude", m.site.latitude, "site");
    m.site.longitude = field_or(s, "longitude", m.site.longitude, "site");
    m.site.ground_albedo = field_or(s, "ground_albedo", m.site.ground_albedo, "site");
    m.site.utc_offset_hours = field_or(s, "utc_offset_hours", m.site.utc_offset_hours, "site");
  }

  const auto& materials = array_field(doc, "materials", "");
  for (std::size_t i = 0; i < materials.size(); ++i) {
    const auto& j = materials[i];
    const auto p = at("", "materials", i);
    m.materials.push_back({field<std::string>(j, "name", p), field<double>(j, "conductivity", p),
                           field<double>(j, "density", p), field<double>(j, "specific_heat", p)});
  }

  const auto& constructions = array_field(doc, "constructions", "");
  for (std::size_t i = 0; i < constructions.size(); ++i) {
    const auto& j = constructions[i];
    const auto p = at("", "constructions", i);
    Construction c;
    c.name = field<std::string>(j, "name", p);
    const auto& layers = array_field(j, "layers", p);
    for (std::size_t k = 0; k < layers.size(); ++k) {
      const auto lp = at(p, "layers", k);
      c.layers.push_back({field<std::string>(layers[k], "material", lp), field<double>(layers[k], "thickness", lp)});
    }
    c.exterior_absorptivity = field_or(j, "exterior_absorptivity", c.exterior_absorptivity, p);
    c.exterior_emissivity = field_or(j, "exterior_emissivity", c.exterior_emissivity, p);
    m.constructions.push_back(std::move(c));
  }

  const auto& zones = array_field(doc, "zones", "");
  for (std::size_t i = 0; i < zones.size(); ++i) {
    const auto& j = zones[i];
    const auto p = at("", "zones", i);
    Zone z;
    z.id = field<std::string>(j, "id", p);
    z.volume = field<double>(j, "volume", p);
    z.floor_area = field<double>(j, "floor_area", p);
    z.gains = gains(j, p);
    z.conditioning = conditioning(j, p);
    z.sealed = field_or(j, "sealed", false, p);
    z.principal = field_or(j, "principal", false, p);
    z.facades = field_or(j, "facades", std::vector<int>{}, p);
    z.fan_provision = field_or(j, "fan_provision", false, p);
    m.zones.push_back(std::move(z));
  }

  const auto& surfaces = array_field(doc, "surfaces", "");
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    const auto& j = surfaces[i];
    const auto p = at("", "surfaces", i);
    Surface s;
    s.id = field<std::string>(j, "id", p);
    s.zone = field<std::string>(j, "zone", p);
    s.area = field<double>(j, "area", p);
    s.azimuth = field_or(j, "azimuth", 0.0, p);
    s.tilt = field_or(j, "tilt", 90.0, p);
    s.construction = field<std::string>(j, "construction", p);
    s.boundary = boundary(j, p);
    s.overhang = overhang(j, p);
    m.surfaces.push_back(std::move(s));
  }

  const auto& glazings = array_field(doc, "glazings", "");
  for (std::size_t i = 0; i < glazings.size(); ++i) {
    const auto& j = glazings[i];
    const auto p = at("", "glazings", i);
    Glazing g;
    g.id = field<std::string>(j, "id", p);
    g.surface = field<std::string>(j, "surface", p);
    g.area = field<double>(j, "area", p);
    g.solar_transmittance = field_or(j, "solar_transmittance", g.solar_transmittance, p);
    g.u_value = field_or(j, "u_value", g.u_value, p);
    g.overhang = overhang(j, p);
    g.shading_multiplier = field_or(j, "shading_multiplier", g.shading_multiplier, p);
    m.glazings.push_back(std::move(g));
  }

  const auto& links = array_field(doc, "links", "");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto& j = links[i];
    const auto p = at("", "links", i);
    AirflowLink l;
    l.id = field<std::string>(j, "id", p);
    const auto kind = field<std::string>(j, "kind", p);
    if (kind == "crack") {
      l.kind = CrackFlow{field<double>(j, "coefficient", p), field_or(j, "exponent", 0.65, p)};
    } else if (kind == "opening") {
      l.kind = LargeOpeningFlow{field<double>(j, "width", p), field<double>(j, "height", p),
                                field_or(j, "discharge_coefficient", 0.78, p), field_or(j, "openable", true, p)};
    } else {
      throw InputError(p + ".kind: unknown link kind '" + kind + "'");
    }
    if (!j.contains("from") || !j.contains("to")) throw InputError(p + ": link needs 'from' and 'to'");
    l.from = endpoint(j.at("from"), p + ".from");
    l.to = endpoint(j.at("to"), p + ".to");
    l.mid_height = field<double>(j, "mid_height", p);
    m.links.push_back(std::move(l));
  }

  if (doc.contains("airflow")) {
    const auto& a = doc.at("airflow");
    m.airflow.mode = airflow_mode(field_or<std::string>(a, "mode", "network", "airflow"), "airflow");
    const auto& flows = array_field(a, "fixed_flows", "airflow");
    for (std::size_t i = 0; i < flows.size(); ++i) {
      const auto p = at("airflow", "fixed_flows", i);
      if (!flows[i].contains("from") || !flows[i].contains("to")) throw InputError(p + ": needs 'from' and 'to'");
      m.airflow.fixed_flows.push_back({endpoint(flows[i].at("from"), p + ".from"),
                                       endpoint(flows[i].at("to"), p + ".to"),
                                       field<double>(flows[i], "mass_flow", p)});
    }
    const auto& renewals = array_field(a, "renewals", "airflow");
    for (std::size_t i = 0; i < renewals.size(); ++i) {
      const auto p = at("airflow", "renewals", i);
      m.airflow.renewals.push_back(
          {field<std::string>(renewals[i], "zone", p), field<double>(renewals[i], "air_changes", p)});
    }
  }

  m.compliance = compliance(doc);
  return m;
}

json building_to_json(const BuildingModel& m) {
  json doc;
  doc["name"] = m.name;
  doc["structure_class"] = to_string(m.structure_class);
  doc["site"] = {{"latitude", m.site.latitude},
                 {"longitude", m.site.longitude},
                 {"ground_albedo", m.site.ground_albedo},
                 {"utc_offset_hours", m.site.utc_offset_hours}};

  doc["materials"] = json::array();
  for (const auto& x : m.materials)
    doc["materials"].push_back({{"name", x.name},
                                {"conductivity", x.conductivity},
                                {"density", x.density},
                                {"specific_heat", x.specific_heat}});

  doc["constructions"] = json::array();
  for (const auto& c : m.constructions) {
    json layers = json::array();
    for (const auto& l : c.layers) layers.push_back({{"material", l.material}, {"thickness", l.thickness}});
    doc["constructions"].push_back({{"name", c.name},
                                    {"layers", layers},
                                    {"exterior_absorptivity", c.exterior_absorptivity},
                                    {"exterior_emissivity", c.exterior_emissivity}});
  }

  doc["zones"] = json::array();
  for (const auto& z : m.zones) {
    json j = {{"id", z.id},
              {"volume", z.volume},
              {"floor_area", z.floor_area},
              {"gains",
               {{"sensible", z.gains.sensible}, {"moisture", z.gains.moisture}, {"occupants", z.gains.occupants}}},
              {"sealed", z.sealed},
              {"principal", z.principal},
              {"facades", z.facades},
              {"fan_provision", z.fan_provision}};
    if (z.conditioning)
      j["conditioning"] = {{"setpoint", z.conditioning->setpoint}, {"schedule", z.conditioning->schedule}};
    doc["zones"].push_back(std::move(j));
  }

  doc["surfaces"] = json::array();
  for (const auto& s : m.surfaces) {
    json j = {{"id", s.id},
              {"zone", s.zone},
              {"area", s.area},
              {"azimuth", s.azimuth},
              {"tilt", s.tilt},
              {"construction", s.construction},
              {"boundary", boundary_json(s.boundary)}};
    if (s.overhang) j["overhang"] = overhang_json(s.overhang);
    doc["surfaces"].push_back(std::move(j));
  }

  doc["glazings"] = json::array();
  for (const auto& g : m.glazings) {
    json j = {{"id", g.id},
              {"surface", g.surface},
              {"area", g.area},
              {"solar_transmittance", g.solar_transmittance},
              {"u_value", g.u_value},
              {"shading_multiplier", g.shading_multiplier}};
    if (g.overhang) j["overhang"] = overhang_json(g.overhang);
    doc["glazings"].push_back(std::move(j));
  }

  doc["links"] = json::array();
  for (const auto& l : m.links) {
    json j = {{"id", l.id}, {"from", endpoint_json(l.from)}, {"to", endpoint_json(l.to)}, {"mid_height", l.mid_height}};
    if (auto c = std::get_if<CrackFlow>(&l.kind)) {
      j["kind"] = "crack";
      j["coefficient"] = c->coefficient;
      j["exponent"] = c->exponent;
    } else {
      const auto& o = std::get<LargeOpeningFlow>(l.kind);
      j["kind"] = "opening";
      j["width"] = o.width;
      j["height"] = o.height;
      j["discharge_coefficient"] = o.discharge_coefficient;
      j["openable"] = o.openable;
    }
    doc["links"].push_back(std::move(j));
  }

  json airflow = {{"mode", to_string(m.airflow.mode)}, {"fixed_flows", json::array()}, {"renewals", json::array()}};
  for (const auto& f : m.airflow.fixed_flows)
    airflow["fixed_flows"].push_back(
        {{"from", endpoint_json(f.from)}, {"to", endpoint_json(f.to)}, {"mass_flow", f.mass_flow}});
  for (const auto& r : m.airflow.renewals)
    airflow["renewals"].push_back({{"zone", r.zone}, {"air_changes", r.air_changes}});
  doc["airflow"] = std::move(airflow);
  doc["compliance"] = compliance_json(m.compliance);
  return doc;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

BuildingModel load_building(const std::filesystem::path& path) {
  try {
    return building_from_json(read_json(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void save_building(const BuildingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << building_to_json(model).dump(2) << '\n';
}

} // namespace tropitherm
