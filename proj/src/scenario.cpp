#include "tropitherm/scenario.hpp"

#include "tropitherm/constants.hpp"
#include "tropitherm/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <set>
#include <sstream>

namespace tropitherm {

using nlohmann::json;

namespace {

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !std::isfinite(v))
    throw InputError("override " + key + ": cannot parse number '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v != std::floor(v)) throw InputError("override " + key + ": expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InputError("override " + key + ": expected true or false, got '" + text + "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::size_t> principal_zones(const BuildingModel& model) {
  std::vector<std::size_t> out;
  for (std::size_t z = 0; z < model.zones.size(); ++z)
    if (model.zones[z].principal) out.push_back(z);
  if (out.empty())
    for (std::size_t z = 0; z < model.zones.size(); ++z) out.push_back(z);
  return out;
}

std::string join_log(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

json summary_json(const CriteriaSummary& s) {
  return {{"day_resultant", s.day_resultant},       {"night_resultant", s.night_resultant},
          {"max_resultant", s.max_resultant},       {"max_power_W", s.max_power},
          {"max_power_W_per_m2", s.max_power_per_m2}, {"daily_energy_kWh", s.daily_energy},
          {"seasonal_energy_kWh", s.seasonal_energy}};
}

json conservation_json(const SimulationResult& r) {
  return {{"worst_thermal_residual_W", r.worst_thermal_residual()},
          {"worst_airflow_residual_kg_s", r.worst_airflow_residual()},
          {"worst_moisture_residual_kg_s", r.worst_moisture_residual()},
          {"all_steps_converged", r.all_converged()},
          {"warmup_cycles", r.warmup_cycles},
          {"warmup_converged", r.warmup_converged}};
}

/// Runs independent jobs concurrently and returns their results in order.
template <class T, class F>
std::vector<T> run_ordered(std::size_t n, F job) {
  std::vector<std::future<T>> futures;
  futures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) futures.push_back(std::async(std::launch::async, job, i));
  std::vector<T> out;
  out.reserve(n);
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

} // namespace

void apply_override(RunInputs& in, const std::string& key, const std::string& value) {
  auto& cfg = in.config;
  if (key == "h_in") cfg.thermal.h_inside = parse_double(key, value);
  else if (key == "h_out_base") cfg.thermal.h_outside_base = parse_double(key, value);
  else if (key == "h_out_wind") cfg.thermal.h_outside_wind = parse_double(key, value);
  else if (key == "nodes_per_layer") cfg.thermal.nodes_per_layer = parse_int(key, value);
  else if (key == "substeps") cfg.substeps = parse_int(key, value);
  else if (key == "season_days") cfg.metrics.season_days = parse_int(key, value);
  else if (key == "cp") cfg.airflow.cp = CpTable::parse(value);
  else if (key == "cd") {
    const double cd = parse_double(key, value);
    for (auto& l : in.model.links)
      if (auto* o = std::get_if<LargeOpeningFlow>(&l.kind)) o->discharge_coefficient = cd;
  } else if (key == "renewal_ach") {
    const double ach = parse_double(key, value);
    in.model.airflow.mode = AirflowMode::Fixed;
    in.model.airflow.fixed_flows.clear();
    in.model.airflow.renewals.clear();
    for (const auto& z : in.model.zones) in.model.airflow.renewals.push_back({z.id, ach});
  } else if (key == "wind_speed") {
    const double v = parse_double(key, value);
    for (auto& r : in.weather.records) r.wind_speed = v;
  } else if (key == "wind_dir") {
    const double v = parse_double(key, value);
    for (auto& r : in.weather.records) r.wind_direction = std::fmod(std::fmod(v, 360.0) + 360.0, 360.0);
  } else if (key == "closed") {
    if (parse_bool(key, value)) in.model.airflow.mode = AirflowMode::Sealed;
  } else if (key == "day_of_year") {
    in.weather.site.day_of_year = parse_int(key, value);
  } else {
    throw InputError("unknown override key '" + key + "'");
  }
  if (cfg.thermal.nodes_per_layer < 1) throw InputError("override nodes_per_layer must be >= 1");
  if (cfg.substeps < 1) throw InputError("override substeps must be >= 1");
  if (cfg.metrics.season_days < 0) throw InputError("override season_days must be >= 0");
}

void apply_override(RunInputs& in, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InputError("override must be key=value, got '" + assignment + "'");
  apply_override(in, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void emit_series(const SimulationResult& r, std::ostream& out) {
  out << "hour,zone,T_air,T_mr,T_res,w,ACH,cooling_W\n";
  char buf[256];
  for (std::size_t h = 0; h < r.hours(); ++h)
    for (const auto& z : r.zones) {
      std::snprintf(buf, sizeof buf, "%zu,%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", h, z.zone.c_str(), z.air[h],
                    z.mean_radiant[h], z.resultant[h], z.humidity[h], z.air_changes[h], z.cooling[h]);
      out << buf;
    }
}

std::string emit_series(const SimulationResult& r) {
  std::ostringstream out;
  emit_series(r, out);
  return out.str();
}

double dwelling_air_changes(const BuildingModel& model, const SimulationResult& result, std::size_t day) {
  double volume = 0.0;
  for (const auto& z : model.zones) volume += z.volume;
  if (volume <= 0.0 || result.hours() < (day + 1) * 24) throw InputError("day out of range");
  double sum = 0.0;
  for (std::size_t h = day * 24; h < day * 24 + 24; ++h)
    for (const auto& z : result.zones) sum += z.outdoor_air[h];
  return sum / 24.0 / volume;
}

// ---- permeability ------------------------------------------------------------

namespace {

CrossVentilationInputs derived_ventilation(const BuildingModel& model) {
  BuildingModel copy = model;
  copy.compliance.ventilation.reset();
  std::string why;
  const auto in = ecodom::ventilation_inputs(copy, &why);
  if (!in) throw InputError("permeability needs facade metadata: " + why);
  const double sp = (in->sp1 + in->sp2) / 2.0;
  if (!(sp > 0.0)) throw InputError("permeability needs principal rooms with floor area");
  return *in;
}

} // namespace

Permeability permeability(const BuildingModel& model) {
  const auto in = derived_ventilation(model);
  const double sp = (in.sp1 + in.sp2) / 2.0;
  return {(in.so1 + in.so2) / 2.0 / sp, (in.si1 + in.si2) / 2.0 / sp};
}

BuildingModel with_permeability(const BuildingModel& model, double exterior, double interior) {
  const auto in = derived_ventilation(model);
  const double sp = (in.sp1 + in.sp2) / 2.0;
  if (!(in.so1 > 0.0 && in.so2 > 0.0)) throw InputError("permeability sweep needs openings on both facades");
  if (!(in.si1 + in.si2 > 0.0)) throw InputError("permeability sweep needs interior openings");
  const double f1 = exterior * sp / in.so1;
  const double f2 = exterior * sp / in.so2;
  const double fi = interior * sp / ((in.si1 + in.si2) / 2.0);

  BuildingModel out = model;
  auto zone_of = [&](const LinkEndpoint& e) -> std::optional<std::size_t> {
    if (auto p = std::get_if<ZoneEndpoint>(&e)) return model.zone_index(p->zone);
    return std::nullopt;
  };
  for (auto& l : out.links) {
    auto* o = std::get_if<LargeOpeningFlow>(&l.kind);
    if (!o || !o->openable) continue;
    const auto a = zone_of(l.from);
    const auto b = zone_of(l.to);
    if (a && b) {
      if (model.zones[*a].principal || model.zones[*b].principal) o->width *= fi;
      continue;
    }
    const auto zone = a ? a : b;
    if (!zone || !model.zones[*zone].principal) continue;
    const auto& facades = model.zones[*zone].facades;
    if (facades.size() != 1)
      throw InputError("cannot rescale opening '" + l.id + "' of a room facing several facades");
    o->width *= facades.front() == 1 ? f1 : f2;
  }
  return out;
}

// ---- run modes ---------------------------------------------------------------

OutputFiles run_simulate(const RunInputs& in) {
  const auto result = simulate(in.model, in.weather, in.config);
  OutputFiles files;
  files["series.csv"] = emit_series(result);

  json summary;
  summary["building"] = in.model.name;
  summary["weather"] = in.weather.site.label;
  summary["hours"] = result.hours();
  summary["hour_windows"] = describe_windows(in.config.metrics);
  summary["season_days"] = in.config.metrics.season_days;
  summary["conservation"] = conservation_json(result);
  std::ostringstream text;
  text << "building: " << in.model.name << "\nhour windows: " << describe_windows(in.config.metrics) << '\n';
  char buf[256];
  summary["days"] = json::array();
  for (std::size_t d = 0; d < in.weather.days(); ++d) {
    json day = {{"day", d}, {"dwelling_ach", dwelling_air_changes(in.model, result, d)}, {"zones", json::array()}};
    text << "day " << d << '\n';
    for (std::size_t z = 0; z < in.model.zones.size(); ++z) {
      const auto s = zone_summary(in.model, result, z, d, in.config.metrics);
      json zj = summary_json(s);
      zj["zone"] = in.model.zones[z].id;
      zj["mean_ach"] = daily_mean(result.zones[z].air_changes, d);
      day["zones"].push_back(std::move(zj));
      std::snprintf(buf, sizeof buf,
                    "  %-12s Tres day %.2f night %.2f max %.2f C | cooling max %.1f W (%.1f W/m2) %.3f kWh/day "
                    "%.1f kWh/season\n",
                    in.model.zones[z].id.c_str(), s.day_resultant, s.night_resultant, s.max_resultant, s.max_power,
                    s.max_power_per_m2, s.daily_energy, s.seasonal_energy);
      text << buf;
    }
    summary["days"].push_back(std::move(day));
  }
  std::snprintf(buf, sizeof buf, "worst residuals: thermal %.3g W, airflow %.3g kg/s, moisture %.3g kg/s\n",
                result.worst_thermal_residual(), result.worst_airflow_residual(), result.worst_moisture_residual());
  text << buf;
  files["summary.json"] = summary.dump(2) + '\n';
  files["summary.txt"] = text.str();
  files["run.log"] = join_log(result.log);
  return files;
}

WindStudy wind_study(const RunInputs& in) {
  if (in.weather.records.size() < 24) throw InputError("wind study needs a 24-hour base day");
  const std::vector<WeatherRecord> base(in.weather.records.begin(), in.weather.records.begin() + 24);
  const auto seq = build_wind_study(base, in.weather.site);

  WindStudy out;
  out.results = run_ordered<SimulationResult>(seq.days(), [&](std::size_t d) {
    WeatherSequence day;
    day.site = seq.site;
    day.records.assign(seq.records.begin() + static_cast<long>(d * 24), seq.records.begin() + static_cast<long>(d * 24 + 24));
    return simulate(in.model, day, in.config);
  });
  for (std::size_t d = 0; d < out.results.size(); ++d) {
    const auto& r = out.results[d];
    WindStudyDay day;
    day.day = static_cast<int>(d + 1);
    day.wind_speed = seq.records[d * 24].wind_speed;
    day.wind_direction = seq.records[d * 24].wind_direction;
    day.dwelling_ach = dwelling_air_changes(in.model, r, 0);
    for (std::size_t z = 0; z < in.model.zones.size(); ++z) {
      const auto s = zone_summary(in.model, r, z, 0, in.config.metrics);
      day.zone_ach.push_back(daily_mean(r.zones[z].air_changes, 0));
      day.zone_day_resultant.push_back(s.day_resultant);
      day.zone_night_resultant.push_back(s.night_resultant);
    }
    out.days.push_back(std::move(day));
  }
  return out;
}

OutputFiles run_windstudy(const RunInputs& in) {
  const auto study = wind_study(in);
  SimulationResult merged;
  merged.zones = study.results.front().zones;
  for (auto& z : merged.zones) {
    z.air.clear(), z.mean_radiant.clear(), z.resultant.clear(), z.humidity.clear();
    z.air_changes.clear(), z.cooling.clear(), z.outdoor_air.clear();
  }
  std::string log;
  for (std::size_t d = 0; d < study.results.size(); ++d) {
    const auto& r = study.results[d];
    for (std::size_t z = 0; z < merged.zones.size(); ++z) {
      auto& m = merged.zones[z];
      const auto& s = r.zones[z];
      auto append = [](std::vector<double>& to, const std::vector<double>& from) {
        to.insert(to.end(), from.begin(), from.end());
      };
      append(m.air, s.air), append(m.mean_radiant, s.mean_radiant), append(m.resultant, s.resultant);
      append(m.humidity, s.humidity), append(m.air_changes, s.air_changes), append(m.cooling, s.cooling);
      append(m.outdoor_air, s.outdoor_air);
    }
    log += "== day " + std::to_string(d + 1) + " ==\n" + join_log(r.log);
  }

  std::ostringstream table;
  table << "day,wind_ms,wind_dir_deg,dwelling_ach";
  for (const auto& z : in.model.zones) table << ',' << z.id << "_ach";
  for (const auto& z : in.model.zones) table << ',' << z.id << "_Tres_night";
  table << '\n';
  for (const auto& d : study.days) {
    table << d.day << ',' << fmt(d.wind_speed) << ',' << fmt(d.wind_direction) << ',' << fmt(d.dwelling_ach);
    for (double v : d.zone_ach) table << ',' << fmt(v);
    for (double v : d.zone_night_resultant) table << ',' << fmt(v);
    table << '\n';
  }
  return {{"series.csv", emit_series(merged)}, {"windstudy.csv", table.str()}, {"run.log", log}};
}

std::vector<SweepCell> permeability_sweep(const RunInputs& in, const std::vector<double>& exterior,
                                          const std::vector<double>& interior) {
  if (exterior.empty() || interior.empty()) throw InputError("sweep needs at least one exterior and interior value");
  for (double v : exterior)
    if (v < 0.15 - 1e-9 || v > 0.40 + 1e-9) throw InputError("exterior permeability must lie in [0.15, 0.40]");
  for (double v : interior)
    if (v < 0.15 - 1e-9 || v > 0.40 + 1e-9) throw InputError("interior permeability must lie in [0.15, 0.40]");

  const auto principal = principal_zones(in.model);
  return run_ordered<SweepCell>(exterior.size() * interior.size(), [&](std::size_t i) {
    SweepCell cell{exterior[i / interior.size()], interior[i % interior.size()], 0.0, 0.0, 0.0};
    const auto model = with_permeability(in.model, cell.exterior, cell.interior);
    const auto result = simulate(model, in.weather, in.config);
    cell.dwelling_ach = dwelling_air_changes(model, result, 0);
    for (auto z : principal) {
      const auto s = zone_summary(model, result, z, 0, in.config.metrics);
      cell.night_resultant += s.night_resultant / static_cast<double>(principal.size());
      cell.day_resultant += s.day_resultant / static_cast<double>(principal.size());
    }
    return cell;
  });
}

OutputFiles run_sweep(const RunInputs& in, const std::vector<double>& exterior, const std::vector<double>& interior) {
  const auto cells = permeability_sweep(in, exterior, interior);
  std::ostringstream out;
  out << "exterior_permeability,interior_permeability,dwelling_ach,night_resultant,day_resultant\n";
  for (const auto& c : cells)
    out << fmt(c.exterior) << ',' << fmt(c.interior) << ',' << fmt(c.dwelling_ach) << ',' << fmt(c.night_resultant)
        << ',' << fmt(c.day_resultant) << '\n';
  return {{"sweep.csv", out.str()}};
}

std::string to_string(Measure m) {
  switch (m) {
  case Measure::Roof: return "roof";
  case Measure::Walls: return "walls";
  case Measure::Windows: return "windows";
  case Measure::Ventilation: return "ventilation";
  }
  return "roof";
}

BuildingModel apply_measure(const BuildingModel& base, const BuildingModel& improved, Measure measure) {
  BuildingModel out = base;
  // Bring over definitions the improved elements refer to. A name already
  // used by the base for a different definition is imported under a new name.
  auto fresh_name = [](const std::string& name, auto taken) {
    std::string candidate = name + "@improved";
    for (int k = 2; taken(candidate); ++k) candidate = name + "@improved" + std::to_string(k);
    return candidate;
  };
  std::map<std::string, std::string> material_name, construction_name;
  for (const auto& m : improved.materials) {
    const Material* existing = out.find_material(m.name);
    if (existing && existing->conductivity == m.conductivity && existing->density == m.density &&
        existing->specific_heat == m.specific_heat) {
      material_name[m.name] = m.name;
      continue;
    }
    Material copy = m;
    if (existing) copy.name = fresh_name(m.name, [&](const std::string& n) { return out.find_material(n) != nullptr; });
    material_name[m.name] = copy.name;
    out.materials.push_back(copy);
  }
  for (const auto& c : improved.constructions) {
    Construction copy = c;
    for (auto& l : copy.layers) l.material = material_name.at(l.material);
    const Construction* existing = out.find_construction(c.name);
    const auto same = [&](const Construction& a) {
      if (a.layers.size() != copy.layers.size() || a.exterior_absorptivity != copy.exterior_absorptivity ||
          a.exterior_emissivity != copy.exterior_emissivity)
        return false;
      for (std::size_t i = 0; i < a.layers.size(); ++i)
        if (a.layers[i].material != copy.layers[i].material || a.layers[i].thickness != copy.layers[i].thickness)
          return false;
      return true;
    };
    if (existing && same(*existing)) {
      construction_name[c.name] = c.name;
      continue;
    }
    if (existing)
      copy.name = fresh_name(c.name, [&](const std::string& n) { return out.find_construction(n) != nullptr; });
    construction_name[c.name] = copy.name;
    out.constructions.push_back(copy);
  }

  auto take_surfaces = [&](auto predicate) {
    for (auto& s : out.surfaces) {
      if (!predicate(s)) continue;
      const auto i = improved.surface_index(s.id);
      if (!i) continue;
      s.construction = construction_name.at(improved.surfaces[*i].construction);
      s.overhang = improved.surfaces[*i].overhang;
    }
  };
  switch (measure) {
  case Measure::Roof:
    take_surfaces([](const Surface& s) { return is_roof(s); });
    out.compliance.roof = improved.compliance.roof;
    break;
  case Measure::Walls:
    take_surfaces([](const Surface& s) { return is_wall(s) && std::holds_alternative<ExteriorBoundary>(s.boundary); });
    break;
  case Measure::Windows:
    for (auto& g : out.glazings) {
      const auto it = std::find_if(improved.glazings.begin(), improved.glazings.end(),
                                   [&](const Glazing& x) { return x.id == g.id; });
      if (it == improved.glazings.end()) continue;
      g.overhang = it->overhang;
      g.shading_multiplier = it->shading_multiplier;
      g.solar_transmittance = it->solar_transmittance;
    }
    break;
  case Measure::Ventilation:
    out.links = improved.links;
    out.airflow = improved.airflow;
    for (auto& z : out.zones)
      if (auto i = improved.zone_index(z.id)) z.sealed = improved.zones[*i].sealed;
    break;
  }
  return out;
}

CaseSummary summarize_case(const BuildingModel& model, const SimulationResult& result, const MetricsConfig& metrics) {
  CaseSummary c;
  const auto principal = principal_zones(model);
  for (std::size_t z = 0; z < model.zones.size(); ++z) {
    c.zones.push_back(zone_summary(model, result, z, 0, metrics));
    c.cooling_energy += c.zones.back().daily_energy;
  }
  for (auto z : principal) c.comfort_metric += c.zones[z].day_resultant / static_cast<double>(principal.size());
  return c;
}

Comparison compare_cases(const RunInputs& base, const BuildingModel& improved) {
  constexpr std::array measures{Measure::Roof, Measure::Walls, Measure::Windows, Measure::Ventilation};
  std::vector<BuildingModel> models{base.model, improved};
  for (auto m : measures) models.push_back(apply_measure(base.model, improved, m));

  const auto cases = run_ordered<CaseSummary>(models.size(), [&](std::size_t i) {
    return summarize_case(models[i], simulate(models[i], base.weather, base.config), base.config.metrics);
  });

  Comparison out;
  out.base = cases[0];
  out.improved = cases[1];
  double total = 0.0;
  for (std::size_t i = 0; i < measures.size(); ++i) {
    Attribution a;
    a.measure = measures[i];
    a.delta = out.base.comfort_metric - cases[2 + i].comfort_metric;
    total += a.delta;
    out.attribution.push_back(a);
  }
  if (total > 0.0)
    for (auto& a : out.attribution) a.share_percent = 100.0 * a.delta / total;
  out.cooling_reduction =
      out.base.cooling_energy > 0.0 ? 1.0 - out.improved.cooling_energy / out.base.cooling_energy : 0.0;
  return out;
}

OutputFiles run_compare(const RunInputs& base, const BuildingModel& improved) {
  const auto cmp = compare_cases(base, improved);
  const std::string method = "one-at-a-time toggling from the base case, deltas normalized to sum to 100%";
  auto case_json = [&](const BuildingModel& model, const CaseSummary& c) {
    json j = {{"building", model.name},
              {"comfort_metric_day_resultant", c.comfort_metric},
              {"cooling_energy_kWh_per_day", c.cooling_energy},
              {"zones", json::array()}};
    for (std::size_t z = 0; z < c.zones.size(); ++z) {
      json zj = summary_json(c.zones[z]);
      zj["zone"] = model.zones[z].id;
      j["zones"].push_back(std::move(zj));
    }
    return j;
  };
  json doc = {{"base", case_json(base.model, cmp.base)},
              {"improved", case_json(improved, cmp.improved)},
              {"cooling_reduction", cmp.cooling_reduction},
              {"attribution_method", method},
              {"attribution", json::array()}};
  std::ostringstream text;
  char buf[256];
  text << "base:     " << base.model.name << "\nimproved: " << improved.name << '\n';
  std::snprintf(buf, sizeof buf, "mean day resultant (principal rooms): %.2f C -> %.2f C\n", cmp.base.comfort_metric,
                cmp.improved.comfort_metric);
  text << buf;
  std::snprintf(buf, sizeof buf, "cooling energy: %.3f -> %.3f kWh/day (reduction %.1f%%)\n", cmp.base.cooling_energy,
                cmp.improved.cooling_energy, 100.0 * cmp.cooling_reduction);
  text << buf << "attribution (" << method << "):\n";
  for (const auto& a : cmp.attribution) {
    doc["attribution"].push_back({{"measure", to_string(a.measure)},
                                  {"delta_K", a.delta},
                                  {"share_percent", a.share_percent ? json(*a.share_percent) : json(nullptr)}});
    if (a.share_percent)
      std::snprintf(buf, sizeof buf, "  %-12s %+.3f K  %6.1f%%\n", to_string(a.measure).c_str(), a.delta,
                    *a.share_percent);
    else
      std::snprintf(buf, sizeof buf, "  %-12s %+.3f K  n/a\n", to_string(a.measure).c_str(), a.delta);
    text << buf;
  }
  return {{"compare.json", doc.dump(2) + '\n'}, {"compare.txt", text.str()}};
}

OutputFiles run_check(const BuildingModel& model, const ecodom::RuleTables& tables) {
  const auto report = ecodom::check_compliance(model, tables);
  return {{"compliance.json", ecodom::report_to_json(report).dump(2) + '\n'},
          {"compliance.txt", ecodom::report_to_text(report)}};
}

} // namespace tropitherm
