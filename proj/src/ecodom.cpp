#include "tropitherm/ecodom.hpp"

#include "tropitherm/building_io.hpp"
#include "tropitherm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tropitherm::ecodom {

using nlohmann::json;

namespace {

constexpr double eps = 1e-9;

bool at_least(double measured, double required) { return measured >= required - eps; }
bool at_most(double measured, double limit) { return measured <= limit + eps; }

Verdict verdict(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

RuleResult result(const RuleTables& t, const std::string& rule, Family family, std::string entity, Verdict v,
                  std::optional<double> measured = std::nullopt, std::optional<double> required = std::nullopt,
                  std::string note = {}) {
  return {rule, family, std::move(entity), v, measured, required, t.citation(rule), std::move(note)};
}

RuleResult not_applicable(const RuleTables& t, const std::string& rule, Family family, std::string entity,
                          std::string why) {
  return result(t, rule, family, std::move(entity), Verdict::NotApplicable, std::nullopt, std::nullopt,
                std::move(why));
}

double angle_between(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

const json& table_field(const json& j, const char* key, const std::string& file) {
  if (!j.contains(key)) throw InputError(file + ": missing '" + key + "'");
  return j.at(key);
}

} // namespace

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Pass: return "Pass";
  case Verdict::Fail: return "Fail";
  case Verdict::NotApplicable: return "NotApplicable";
  }
  return "NotApplicable";
}

std::string to_string(Family f) {
  switch (f) {
  case Family::Siting: return "Siting";
  case Family::Roof: return "Roof";
  case Family::Walls: return "Walls";
  case Family::Windows: return "Windows";
  case Family::Ventilation: return "Ventilation";
  case Family::WaterHeater: return "WaterHeater";
  case Family::AirConditioning: return "AirConditioning";
  }
  return "Siting";
}

std::string to_string(Orientation o) {
  switch (o) {
  case Orientation::N: return "N";
  case Orientation::E: return "E";
  case Orientation::S: return "S";
  case Orientation::W: return "W";
  }
  return "N";
}

std::string to_string(ColorClass c) {
  switch (c) {
  case ColorClass::Light: return "light";
  case ColorClass::Medium: return "medium";
  case ColorClass::Dark: return "dark";
  }
  return "light";
}

Orientation orientation_of(double azimuth) {
  const double a = std::fmod(std::fmod(azimuth, 360.0) + 360.0, 360.0);
  if (a >= 315.0 || a < 45.0) return Orientation::N;
  if (a < 135.0) return Orientation::E;
  if (a < 225.0) return Orientation::S;
  return Orientation::W;
}

bool ComplianceReport::passed() const {
  return std::none_of(results.begin(), results.end(), [](const auto& r) { return r.verdict == Verdict::Fail; });
}

std::size_t ComplianceReport::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [v](const auto& r) { return r.verdict == v; }));
}

std::optional<Verdict> ComplianceReport::verdict_of(const std::string& rule) const {
  std::optional<Verdict> out;
  for (const auto& r : results) {
    if (r.rule != rule) continue;
    if (r.verdict == Verdict::Fail) return Verdict::Fail;
    if (r.verdict == Verdict::Pass || !out) out = r.verdict;
  }
  return out;
}

std::string RuleTables::citation(const std::string& rule) const {
  // Rules share the citation of their table family prefix.
  for (std::string key = rule;;) {
    if (auto it = citations.find(key); it != citations.end()) return it->second;
    const auto dot = key.rfind('.');
    if (dot == std::string::npos) return {};
    key.resize(dot);
  }
}

const std::vector<std::string>& rule_catalogue() {
  static const std::vector<std::string> ids{
      "siting.perimeter",          "siting.strip_width",
      "roof.vent_ratio",           "roof.protection",
      "walls.protection",          "windows.protection",
      "ventilation.p1",            "ventilation.p2",
      "ventilation.si1",           "ventilation.si2",
      "ventilation.opposing_facades", "ventilation.fans",
      "water.kind",                "water.solar.certified",
      "water.solar.production",    "water.solar.storage",
      "water.solar.collector_area", "water.electric.certified",
      "water.electric.not_instantaneous", "water.electric.off_peak_switch",
      "water.electric.capacity",   "water.electric.cooling_constant",
      "water.gas.certified",       "water.gas.flue_outlet",
      "ac.cop",                    "ac.mechanical_renewal",
      "ac.maintenance_contract"};
  return ids;
}

std::filesystem::path default_rules_dir() { return std::filesystem::path(TROPITHERM_DATA_DIR) / "rules"; }

RuleTables load_rule_tables(const std::filesystem::path& dir) {
  RuleTables t;
  auto load = [&](const char* name) {
    const auto path = dir / name;
    return std::make_pair(read_json(path), path.string());
  };
  try {
    {
      auto [j, f] = load("prescriptions.json");
      const auto& s = table_field(j, "siting", f);
      t.siting_fraction = s.at("min_protected_fraction_exclusive").get<double>();
      t.siting_width = s.at("min_strip_width").get<double>();
      t.citations["siting"] = s.at("citation").get<std::string>();
      const auto& rv = table_field(j, "roof_vent", f);
      t.roof_vent_ratio = rv.at("min_ratio").get<double>();
      t.citations["roof.vent_ratio"] = rv.at("citation").get<std::string>();
      const auto& v = table_field(j, "ventilation", f);
      t.permeability = v.at("min_permeability").get<double>();
      t.citations["ventilation"] = v.at("citation").get<std::string>();
      t.citations["ventilation.fans"] = v.at("fan_citation").get<std::string>();
      const auto& ac = table_field(j, "air_conditioning", f);
      t.ac_min_cop = ac.at("min_cop").get<std::map<std::string, double>>();
      t.ac_renewal = ac.at("min_mechanical_renewal").get<double>();
      t.citations["ac"] = ac.at("citation").get<std::string>();
      const auto& c = table_field(j, "color_classes", f);
      t.light_max_absorptivity = c.at("light_max_absorptivity").get<double>();
      t.medium_max_absorptivity = c.at("medium_max_absorptivity").get<double>();
      const auto& ins = table_field(j, "insulation", f);
      t.reference_conductivity = ins.at("reference_conductivity").get<double>();
      t.max_insulant_conductivity = ins.at("max_insulant_conductivity").get<double>();
    }
    {
      auto [j, f] = load("roof.json");
      t.citations["roof.protection"] = table_field(j, "citation", f).get<std::string>();
      for (const auto& r : table_field(j, "rows", f)) {
        auto key = std::make_pair(r.at("roof").get<std::string>(), r.at("color").get<std::string>());
        if (!t.roof_insulation.emplace(key, r.at("min_insulation_cm").get<double>()).second)
          throw InputError(f + ": overlapping row " + key.first + "/" + key.second);
      }
    }
    {
      auto [jo, fo] = load("walls_overhang.json");
      auto [ji, fi] = load("walls_insulation.json");
      t.citations["walls.protection"] = table_field(jo, "citation", fo).get<std::string>() + "; " +
                                        table_field(ji, "citation", fi).get<std::string>();
      for (const auto& r : table_field(jo, "rows", fo)) {
        auto key = std::make_pair(r.at("orientation").get<std::string>(), r.at("inertia").get<std::string>());
        if (!t.wall_overhang.emplace(key, r.at("min_ratio").get<double>()).second)
          throw InputError(fo + ": overlapping row " + key.first + "/" + key.second);
      }
      for (const auto& r : table_field(ji, "rows", fi)) {
        auto key = std::make_pair(r.at("orientation").get<std::string>(), r.at("color").get<std::string>());
        if (!t.wall_insulation.emplace(key, r.at("min_insulation_cm").get<double>()).second)
          throw InputError(fi + ": overlapping row " + key.first + "/" + key.second);
      }
    }
    {
      auto [j, f] = load("windows.json");
      t.citations["windows.protection"] = table_field(j, "citation", f).get<std::string>();
      t.window_device_multiplier = table_field(j, "max_device_shading_multiplier", f).get<double>();
      for (const auto& r : table_field(j, "rows", f))
        if (!t.window_overhang.emplace(r.at("orientation").get<std::string>(), r.at("min_ratio").get<double>()).second)
          throw InputError(f + ": overlapping row");
    }
    {
      auto [j, f] = load("solar_water_heater.json");
      t.citations["water.solar"] = table_field(j, "citation", f).get<std::string>();
      t.solar_min_production = table_field(j, "min_annual_production", f).get<double>();
      const auto range = table_field(j, "storage_per_m2", f).get<std::vector<double>>();
      if (range.size() != 2) throw InputError(f + ": storage_per_m2 needs two values");
      t.solar_storage_min = range[0];
      t.solar_storage_max = range[1];
      for (const auto& r : table_field(j, "rows", f))
        t.solar_rows.push_back({r.at("min_principal_rooms").get<int>(), r.at("max_principal_rooms").get<int>(),
                                r.at("min_collector_area").get<double>()});
    }
    {
      auto [j, f] = load("electric_water_heater.json");
      t.citations["water.electric"] = table_field(j, "citation", f).get<std::string>();
      for (const auto& r : table_field(j, "rows", f))
        t.electric_rows.push_back({r.at("min_principal_rooms").get<int>(), r.at("max_principal_rooms").get<int>(),
                                   r.at("min_capacity").get<double>(), r.at("max_cooling_constant").get<double>()});
    }
    {
      auto [j, f] = load("gas_water_heater.json");
      t.citations["water.gas"] = table_field(j, "citation", f).get<std::string>();
      t.citations["water"] = "ECODOM domestic hot water: solar, electric or gas heaters";
    }
  } catch (const json::exception& e) {
    throw InputError("rule tables in '" + dir.string() + "': " + e.what());
  }
  return t;
}

ColorClass color_class(double absorptivity, const RuleTables& t) {
  if (absorptivity <= t.light_max_absorptivity + eps) return ColorClass::Light;
  if (absorptivity <= t.medium_max_absorptivity + eps) return ColorClass::Medium;
  return ColorClass::Dark;
}

double equivalent_insulation_cm(const BuildingModel& model, const Construction& c, const RuleTables& t) {
  double cm = 0.0;
  for (const auto& layer : c.layers) {
    const auto* m = model.find_material(layer.material);
    if (m && m->conductivity <= t.max_insulant_conductivity)
      cm += 100.0 * layer.thickness * t.reference_conductivity / m->conductivity;
  }
  return cm;
}

std::vector<RuleResult> check_siting(const std::optional<SitingDescriptor>& s, const RuleTables& t) {
  if (!s)
    return {not_applicable(t, "siting.perimeter", Family::Siting, "dwelling", "no siting descriptor"),
            not_applicable(t, "siting.strip_width", Family::Siting, "dwelling", "no siting descriptor")};
  // "More than three quarters" is strict.
  return {result(t, "siting.perimeter", Family::Siting, "dwelling",
                 verdict(s->protected_perimeter_fraction > t.siting_fraction), s->protected_perimeter_fraction,
                 t.siting_fraction, "strictly greater than required"),
          result(t, "siting.strip_width", Family::Siting, "dwelling", verdict(at_least(s->strip_width, t.siting_width)),
                 s->strip_width, t.siting_width)};
}

RuleResult check_roof_vent(double opening_area, double roof_area, const RuleTables& t) {
  if (!(roof_area > 0.0))
    return not_applicable(t, "roof.vent_ratio", Family::Roof, "dwelling", "roof area unknown");
  const double ratio = opening_area / roof_area;
  return result(t, "roof.vent_ratio", Family::Roof, "dwelling", verdict(at_least(ratio, t.roof_vent_ratio)), ratio,
                t.roof_vent_ratio);
}

std::vector<RuleResult> check_roof(const BuildingModel& model, const RuleTables& t) {
  std::vector<RuleResult> out;
  double roof_area = 0.0;
  for (const auto& s : model.surfaces)
    if (is_roof(s)) roof_area += s.area;

  const auto& desc = model.compliance.roof;
  bool ventilated = false;
  if (desc && desc->type == RoofType::VentilatedLoft) {
    const double area = desc->roof_area > 0.0 ? desc->roof_area : roof_area;
    auto vent = check_roof_vent(desc->loft_opening_area, area, t);
    ventilated = vent.verdict == Verdict::Pass;
    if (!ventilated) vent.note = "closed-loft requirements apply";
    out.push_back(std::move(vent));
  } else {
    out.push_back(not_applicable(t, "roof.vent_ratio", Family::Roof, "dwelling", "roof is not a ventilated loft"));
  }

  const std::string category = ventilated ? "ventilated_loft" : "non_ventilated";
  bool any = false;
  for (const auto& s : model.surfaces) {
    if (!is_roof(s)) continue;
    any = true;
    const auto* c = model.find_construction(s.construction);
    if (!c) {
      out.push_back(not_applicable(t, "roof.protection", Family::Roof, s.id, "unknown construction"));
      continue;
    }
    const auto color = to_string(color_class(c->exterior_absorptivity, t));
    const auto it = t.roof_insulation.find({category, color});
    if (it == t.roof_insulation.end()) {
      out.push_back(not_applicable(t, "roof.protection", Family::Roof, s.id,
                                   "missing table row " + category + "/" + color + ", review"));
      continue;
    }
    const double cm = equivalent_insulation_cm(model, *c, t);
    out.push_back(result(t, "roof.protection", Family::Roof, s.id, verdict(at_least(cm, it->second)), cm, it->second,
                         category + ", " + color + " colour, insulation cm"));
  }
  if (!any) out.push_back(not_applicable(t, "roof.protection", Family::Roof, "dwelling", "no exterior roof"));
  return out;
}

std::vector<RuleResult> check_walls(const BuildingModel& model, const RuleTables& t) {
  std::vector<RuleResult> out;
  const std::string inertia = to_string(model.structure_class);
  for (const auto& s : model.surfaces) {
    if (!is_wall(s) || !std::holds_alternative<ExteriorBoundary>(s.boundary)) continue;
    if (model.opaque_area(s) <= 0.0) continue;
    const auto* c = model.find_construction(s.construction);
    if (!c) {
      out.push_back(not_applicable(t, "walls.protection", Family::Walls, s.id, "unknown construction"));
      continue;
    }
    const auto orient = to_string(orientation_of(s.azimuth));
    const auto color = to_string(color_class(c->exterior_absorptivity, t));
    const auto ov = t.wall_overhang.find({orient, inertia});
    const auto in = t.wall_insulation.find({orient, color});
    if (ov == t.wall_overhang.end() || in == t.wall_insulation.end()) {
      out.push_back(not_applicable(t, "walls.protection", Family::Walls, s.id, "missing table row, review"));
      continue;
    }
    const double ratio = s.overhang && s.overhang->height > 0.0 ? s.overhang->depth / s.overhang->height : 0.0;
    const double cm = equivalent_insulation_cm(model, *c, t);
    const std::string where = orient + ", " + inertia + " inertia, " + color + " colour";
    if (at_least(ratio, ov->second)) {
      out.push_back(result(t, "walls.protection", Family::Walls, s.id, Verdict::Pass, ratio, ov->second,
                           where + ": overhang d/h meets requirement"));
    } else {
      char note[160];
      std::snprintf(note, sizeof note, ": overhang d/h %.3g < %.3g, insulation cm checked instead", ratio, ov->second);
      out.push_back(result(t, "walls.protection", Family::Walls, s.id, verdict(at_least(cm, in->second)), cm,
                           in->second, where + note));
    }
  }
  if (out.empty()) out.push_back(not_applicable(t, "walls.protection", Family::Walls, "dwelling", "no exterior walls"));
  return out;
}

std::vector<RuleResult> check_windows(const BuildingModel& model, const RuleTables& t) {
  std::vector<RuleResult> out;
  for (const auto& g : model.glazings) {
    const auto si = model.surface_index(g.surface);
    if (!si) {
      out.push_back(not_applicable(t, "windows.protection", Family::Windows, g.id, "unknown host surface"));
      continue;
    }
    const auto& host = model.surfaces[*si];
    if (!is_wall(host)) {
      out.push_back(not_applicable(t, "windows.protection", Family::Windows, g.id, "not a vertical window"));
      continue;
    }
    const auto orient = to_string(orientation_of(host.azimuth));
    const auto it = t.window_overhang.find(orient);
    if (it == t.window_overhang.end()) {
      out.push_back(not_applicable(t, "windows.protection", Family::Windows, g.id, "missing table row, review"));
      continue;
    }
    double ratio = 0.0;
    if (g.overhang) {
      const double denom = 2.0 * g.overhang->gap + g.overhang->height;
      ratio = denom > 0.0 ? g.overhang->depth / denom : 0.0;
    }
    if (at_least(ratio, it->second)) {
      out.push_back(result(t, "windows.protection", Family::Windows, g.id, Verdict::Pass, ratio, it->second,
                           orient + ": canopy d/(2a+h)"));
    } else {
      const bool device = at_most(g.shading_multiplier, t.window_device_multiplier);
      out.push_back(result(t, "windows.protection", Family::Windows, g.id, verdict(device), g.shading_multiplier,
                           t.window_device_multiplier,
                           orient + ": canopy insufficient, shading device multiplier checked instead"));
    }
  }
  if (out.empty())
    out.push_back(not_applicable(t, "windows.protection", Family::Windows, "dwelling", "no glazing"));
  return out;
}

std::vector<RuleResult> check_solar_protection(const BuildingModel& model, const RuleTables& t) {
  auto out = check_roof(model, t);
  for (auto& r : check_walls(model, t)) out.push_back(std::move(r));
  for (auto& r : check_windows(model, t)) out.push_back(std::move(r));
  return out;
}

std::optional<CrossVentilationInputs> ventilation_inputs(const BuildingModel& model, std::string* why) {
  if (model.compliance.ventilation) return model.compliance.ventilation;
  auto fail = [&](const std::string& reason) -> std::optional<CrossVentilationInputs> {
    if (why) *why = reason;
    return std::nullopt;
  };

  std::vector<std::size_t> principal;
  for (std::size_t z = 0; z < model.zones.size(); ++z)
    if (model.zones[z].principal) principal.push_back(z);
  if (principal.empty()) return fail("no principal rooms declared");
  for (auto z : principal) {
    const auto& f = model.zones[z].facades;
    if (f.empty()) return fail("principal room '" + model.zones[z].id + "' has no facade assignment");
    for (int k : f)
      if (k != 1 && k != 2) return fail("facade groups must be 1 or 2");
  }

  auto faces = [&](std::size_t z, int k) {
    const auto& f = model.zones[z].facades;
    return std::find(f.begin(), f.end(), k) != f.end();
  };
  auto zone_of = [&](const LinkEndpoint& e) -> std::optional<std::size_t> {
    if (auto p = std::get_if<ZoneEndpoint>(&e)) return model.zone_index(p->zone);
    return std::nullopt;
  };

  // Facade azimuths, from openings of principal rooms facing a single facade.
  std::optional<double> facade_azimuth[3];
  for (const auto& l : model.links) {
    const auto* o = std::get_if<LargeOpeningFlow>(&l.kind);
    if (!o || !o->openable) continue;
    const auto* ext = std::get_if<ExteriorEndpoint>(&l.from);
    auto zone = zone_of(l.to);
    if (!ext) {
      ext = std::get_if<ExteriorEndpoint>(&l.to);
      zone = zone_of(l.from);
    }
    if (!ext || !zone || !model.zones[*zone].principal || model.zones[*zone].facades.size() != 1) continue;
    const int k = model.zones[*zone].facades.front();
    if (!facade_azimuth[k]) facade_azimuth[k] = ext->facade_azimuth;
  }

  CrossVentilationInputs in;
  for (auto z : principal) {
    if (faces(z, 1)) in.sp1 += model.zones[z].floor_area;
    if (faces(z, 2)) in.sp2 += model.zones[z].floor_area;
  }
  for (const auto& l : model.links) {
    const auto* o = std::get_if<LargeOpeningFlow>(&l.kind);
    if (!o || !o->openable) continue;
    const double area = o->width * o->height;
    const auto a = zone_of(l.from);
    const auto b = zone_of(l.to);
    if (a && b) {
      for (int k = 1; k <= 2; ++k) {
        const bool touches = (model.zones[*a].principal && faces(*a, k)) || (model.zones[*b].principal && faces(*b, k));
        if (touches) (k == 1 ? in.si1 : in.si2) += area;
      }
      continue;
    }
    const auto zone = a ? a : b;
    if (!zone || !model.zones[*zone].principal) continue;
    const double az = std::get<ExteriorEndpoint>(a ? l.to : l.from).facade_azimuth;
    const auto& f = model.zones[*zone].facades;
    int k = f.front();
    if (f.size() > 1) {
      k = 0;
      for (int c : f)
        if (facade_azimuth[c] && angle_between(*facade_azimuth[c], az) <= 45.0) k = c;
      if (k == 0) return fail("cannot assign opening '" + l.id + "' to a facade");
    }
    (k == 1 ? in.so1 : in.so2) += area;
  }
  in.opposing_facades = in.so1 > 0.0 && in.so2 > 0.0 &&
                        (!facade_azimuth[1] || !facade_azimuth[2] ||
                         angle_between(*facade_azimuth[1], *facade_azimuth[2]) >= 135.0);
  return in;
}

std::vector<RuleResult> check_cross_ventilation(const CrossVentilationInputs& in, const RuleTables& t) {
  std::vector<RuleResult> out;
  const double sp = (in.sp1 + in.sp2) / 2.0;
  if (!(sp > 0.0)) {
    for (const char* id : {"ventilation.p1", "ventilation.p2", "ventilation.si1", "ventilation.si2",
                           "ventilation.opposing_facades"})
      out.push_back(not_applicable(t, id, Family::Ventilation, "dwelling", "principal room area is zero"));
    return out;
  }
  const double p1 = in.so1 / sp;
  const double p2 = in.so2 / sp;
  const double so_min = std::min(in.so1, in.so2);
  out.push_back(result(t, "ventilation.p1", Family::Ventilation, "dwelling", verdict(at_least(p1, t.permeability)), p1,
                       t.permeability, "So1/Sp, Sp=(Sp1+Sp2)/2"));
  out.push_back(result(t, "ventilation.p2", Family::Ventilation, "dwelling", verdict(at_least(p2, t.permeability)), p2,
                       t.permeability, "So2/Sp, Sp=(Sp1+Sp2)/2"));
  out.push_back(result(t, "ventilation.si1", Family::Ventilation, "dwelling", verdict(at_least(in.si1, so_min)), in.si1,
                       so_min, "Si1 >= min(So1, So2)"));
  out.push_back(result(t, "ventilation.si2", Family::Ventilation, "dwelling", verdict(at_least(in.si2, so_min)), in.si2,
                       so_min, "Si2 >= min(So1, So2)"));
  out.push_back(result(t, "ventilation.opposing_facades", Family::Ventilation, "dwelling",
                       verdict(in.opposing_facades), std::nullopt, std::nullopt,
                       "openings on at least two opposing facades"));
  return out;
}

std::vector<RuleResult> check_cross_ventilation(const BuildingModel& model, const RuleTables& t) {
  std::string why;
  const auto in = ventilation_inputs(model, &why);
  if (in) return check_cross_ventilation(*in, t);
  std::vector<RuleResult> out;
  for (const char* id :
       {"ventilation.p1", "ventilation.p2", "ventilation.si1", "ventilation.si2", "ventilation.opposing_facades"})
    out.push_back(not_applicable(t, id, Family::Ventilation, "dwelling", "missing facade metadata: " + why));
  return out;
}

std::vector<RuleResult> check_fans(const BuildingModel& model, const RuleTables& t) {
  std::vector<RuleResult> out;
  for (const auto& z : model.zones)
    out.push_back(result(t, "ventilation.fans", Family::Ventilation, z.id, verdict(z.fan_provision), std::nullopt,
                         std::nullopt, "ceiling wiring reserved for a fan"));
  if (out.empty()) out.push_back(not_applicable(t, "ventilation.fans", Family::Ventilation, "dwelling", "no rooms"));
  return out;
}

std::vector<RuleResult> check_water_heating(const std::optional<WaterHeaterSpec>& spec, int rooms,
                                            const RuleTables& t) {
  static const std::vector<std::string> solar{"water.solar.certified", "water.solar.production", "water.solar.storage",
                                              "water.solar.collector_area"};
  static const std::vector<std::string> electric{"water.electric.certified", "water.electric.not_instantaneous",
                                                 "water.electric.off_peak_switch", "water.electric.capacity",
                                                 "water.electric.cooling_constant"};
  static const std::vector<std::string> gas{"water.gas.certified", "water.gas.flue_outlet"};
  const auto F = Family::WaterHeater;
  std::vector<RuleResult> out;
  auto skip = [&](const std::vector<std::string>& ids, const std::string& why) {
    for (const auto& id : ids) out.push_back(not_applicable(t, id, F, "dwelling", why));
  };

  if (!spec) {
    out.push_back(not_applicable(t, "water.kind", F, "dwelling", "no water heater descriptor"));
    skip(solar, "no water heater descriptor");
    skip(electric, "no water heater descriptor");
    skip(gas, "no water heater descriptor");
    return out;
  }
  const auto& s = *spec;
  const bool known = s.kind == "solar" || s.kind == "electric" || s.kind == "gas";
  out.push_back(result(t, "water.kind", F, "dwelling", verdict(known), std::nullopt, std::nullopt,
                       known ? s.kind : "unknown water heater kind '" + s.kind + "'"));

  if (s.kind == "solar") {
    out.push_back(result(t, "water.solar.certified", F, "dwelling", verdict(s.certified)));
    out.push_back(result(t, "water.solar.production", F, "dwelling",
                         verdict(at_least(s.annual_production, t.solar_min_production)), s.annual_production,
                         t.solar_min_production, "kWh per m2 of collector per year"));
    if (s.collector_area > 0.0) {
      const double per_m2 = s.storage_volume / s.collector_area;
      out.push_back(result(t, "water.solar.storage", F, "dwelling",
                           verdict(at_least(per_m2, t.solar_storage_min) && at_most(per_m2, t.solar_storage_max)),
                           per_m2, t.solar_storage_min,
                           "litres per m2 of collector, allowed range [" + std::to_string(int(t.solar_storage_min)) +
                               ", " + std::to_string(int(t.solar_storage_max)) + "]"));
    } else {
      out.push_back(result(t, "water.solar.storage", F, "dwelling", Verdict::Fail, std::nullopt, t.solar_storage_min,
                           "no collector area declared"));
    }
    const CollectorRow* row = nullptr;
    for (const auto& r : t.solar_rows)
      if (rooms >= r.min_rooms && rooms <= r.max_rooms) row = &r;
    if (row)
      out.push_back(result(t, "water.solar.collector_area", F, "dwelling",
                           verdict(at_least(s.collector_area, row->min_collector_area)), s.collector_area,
                           row->min_collector_area, std::to_string(rooms) + " principal rooms"));
    else
      out.push_back(not_applicable(t, "water.solar.collector_area", F, "dwelling", "missing table row, review"));
  } else {
    skip(solar, "not a solar water heater");
  }

  if (s.kind == "electric") {
    out.push_back(result(t, "water.electric.certified", F, "dwelling", verdict(s.certified), std::nullopt,
                         std::nullopt, "NF mark"));
    out.push_back(result(t, "water.electric.not_instantaneous", F, "dwelling", verdict(!s.instantaneous)));
    out.push_back(result(t, "water.electric.off_peak_switch", F, "dwelling", verdict(s.off_peak_switch), std::nullopt,
                         std::nullopt, "three-position off-peak switch"));
    const ElectricHeaterRow* row = nullptr;
    for (const auto& r : t.electric_rows)
      if (rooms >= r.min_rooms && rooms <= r.max_rooms) row = &r;
    if (row) {
      out.push_back(result(t, "water.electric.capacity", F, "dwelling", verdict(at_least(s.capacity, row->min_capacity)),
                           s.capacity, row->min_capacity, std::to_string(rooms) + " principal rooms, litres"));
      out.push_back(result(t, "water.electric.cooling_constant", F, "dwelling",
                           verdict(s.cooling_constant > 0.0 && at_most(s.cooling_constant, row->max_cooling_constant)),
                           s.cooling_constant, row->max_cooling_constant, "maximum, Wh/(24h.L.K)"));
    } else {
      out.push_back(not_applicable(t, "water.electric.capacity", F, "dwelling", "missing table row, review"));
      out.push_back(not_applicable(t, "water.electric.cooling_constant", F, "dwelling", "missing table row, review"));
    }
  } else {
    skip(electric, "not an electric water heater");
  }

  if (s.kind == "gas") {
    out.push_back(result(t, "water.gas.certified", F, "dwelling", verdict(s.certified), std::nullopt, std::nullopt,
                         "NF mark"));
    out.push_back(result(t, "water.gas.flue_outlet", F, "dwelling", verdict(s.flue_outlet)));
  } else {
    skip(gas, "not a gas water heater");
  }
  return out;
}

std::vector<RuleResult> check_ac_option(const std::optional<AirConditioningSpec>& spec, const RuleTables& t) {
  const auto F = Family::AirConditioning;
  if (!spec) {
    return {not_applicable(t, "ac.cop", F, "dwelling", "no air conditioning option"),
            not_applicable(t, "ac.mechanical_renewal", F, "dwelling", "no air conditioning option"),
            not_applicable(t, "ac.maintenance_contract", F, "dwelling", "no air conditioning option")};
  }
  std::vector<RuleResult> out;
  const auto it = t.ac_min_cop.find(spec->unit_type);
  if (it == t.ac_min_cop.end())
    out.push_back(result(t, "ac.cop", F, "dwelling", Verdict::Fail, spec->cop, std::nullopt,
                         "unknown unit type '" + spec->unit_type + "'"));
  else
    out.push_back(result(t, "ac.cop", F, "dwelling", verdict(at_least(spec->cop, it->second)), spec->cop, it->second,
                         spec->unit_type + " unit"));
  out.push_back(result(t, "ac.mechanical_renewal", F, "dwelling",
                       verdict(at_least(spec->mechanical_renewal, t.ac_renewal)), spec->mechanical_renewal,
                       t.ac_renewal, "m3/h per conditioned room"));
  out.push_back(result(t, "ac.maintenance_contract", F, "dwelling", verdict(spec->maintenance_contract)));
  return out;
}

int principal_room_count(const BuildingModel& model) {
  if (model.compliance.principal_rooms > 0) return model.compliance.principal_rooms;
  return static_cast<int>(
      std::count_if(model.zones.begin(), model.zones.end(), [](const Zone& z) { return z.principal; }));
}

ComplianceReport check_compliance(const BuildingModel& model, const RuleTables& t) {
  ComplianceReport report;
  report.building = model.name;
  auto add = [&](std::vector<RuleResult> rs) {
    for (auto& r : rs) report.results.push_back(std::move(r));
  };
  add(check_siting(model.compliance.siting, t));
  add(check_solar_protection(model, t));
  add(check_cross_ventilation(model, t));
  add(check_fans(model, t));
  add(check_water_heating(model.compliance.water_heater, principal_room_count(model), t));
  add(check_ac_option(model.compliance.air_conditioning, t));

  report.metadata["interior_permeability_rule"] =
      "Si >= min(So1, So2); the prescription text admits min or max, min is used";
  report.metadata["threshold_semantics"] = "all thresholds inclusive except siting perimeter (strict)";
  report.metadata["structure_class"] = to_string(model.structure_class);
  return report;
}

json report_to_json(const ComplianceReport& r) {
  json j;
  j["building"] = r.building;
  j["passed"] = r.passed();
  j["counts"] = {{"Pass", r.count(Verdict::Pass)},
                 {"Fail", r.count(Verdict::Fail)},
                 {"NotApplicable", r.count(Verdict::NotApplicable)}};
  j["metadata"] = r.metadata;
  j["results"] = json::array();
  for (const auto& x : r.results) {
    json e = {{"rule", x.rule},
              {"family", to_string(x.family)},
              {"entity", x.entity},
              {"verdict", to_string(x.verdict)},
              {"measured", x.measured ? json(*x.measured) : json(nullptr)},
              {"required", x.required ? json(*x.required) : json(nullptr)},
              {"citation", x.citation},
              {"note", x.note}};
    j["results"].push_back(std::move(e));
  }
  return j;
}

std::string report_to_text(const ComplianceReport& r) {
  std::ostringstream out;
  out << "Compliance report: " << (r.building.empty() ? "<unnamed>" : r.building) << '\n';
  char buf[512];
  for (const auto& x : r.results) {
    std::string values;
    if (x.measured) {
      std::snprintf(buf, sizeof buf, " measured=%.4g", *x.measured);
      values += buf;
    }
    if (x.required) {
      std::snprintf(buf, sizeof buf, " required=%.4g", *x.required);
      values += buf;
    }
    std::snprintf(buf, sizeof buf, "  %-14s %-34s %-16s%s", to_string(x.verdict).c_str(), x.rule.c_str(),
                  x.entity.c_str(), values.c_str());
    out << buf;
    if (!x.note.empty()) out << "  (" << x.note << ')';
    out << '\n';
  }
  out << "Pass " << r.count(Verdict::Pass) << ", Fail " << r.count(Verdict::Fail) << ", NotApplicable "
      << r.count(Verdict::NotApplicable) << " -> " << (r.passed() ? "COMPLIANT" : "NOT COMPLIANT") << '\n';
  for (const auto& [k, v] : r.metadata) out << "  " << k << ": " << v << '\n';
  return out.str();
}

} // namespace tropitherm::ecodom
