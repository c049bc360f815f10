#include "tropitherm/thermal.hpp"

#include "tropitherm/constants.hpp"
#include "tropitherm/errors.hpp"
#include "tropitherm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tropitherm {

namespace {

double series(double g1, double g2) { return g1 * g2 / (g1 + g2); }

struct Assembler {
  NodalSystem& sys;

  void couple(std::size_t a, std::size_t b, double g) {
    sys.conductance(a, b) += g;
    sys.conductance(b, a) += g;
    sys.conductance(a, a) -= g;
    sys.conductance(b, b) -= g;
  }

  void ambient(std::size_t node, double g, double temperature) {
    sys.ambient.push_back({node, g, temperature});
    sys.conductance(node, node) -= g;
    sys.source[node] += g * temperature;
  }

  // Air of mass flow `mass` (kg/s) entering `node` from `upstream`.
  void advect(std::size_t node, std::optional<std::size_t> upstream, double mass, double outdoor) {
    if (mass <= 0.0) return;
    const double g = mass * constants::air_specific_heat;
    if (upstream) {
      sys.conductance(node, *upstream) += g;
      sys.conductance(node, node) -= g;
    } else {
      ambient(node, g, outdoor);
    }
  }
};

} // namespace

NodeLayout discretize(const BuildingModel& model, int nodes_per_layer) {
  if (nodes_per_layer < 1) throw InputError("nodes_per_layer must be >= 1");
  NodeLayout layout;
  layout.floor_surfaces.resize(model.zones.size());

  for (std::size_t si = 0; si < model.surfaces.size(); ++si) {
    const auto& surface = model.surfaces[si];
    const double area = model.opaque_area(surface);
    if (area <= 1e-9) continue;
    const auto* construction = model.find_construction(surface.construction);
    if (!construction) throw InputError("surface '" + surface.id + "' has unknown construction");

    SurfaceNodes sn;
    sn.surface = si;
    sn.first = layout.nodes.size();
    sn.area = area;
    double previous_half = 0.0; // W/K of the previous slab's inner half
    int depth = 0;
    for (const auto& layer : construction->layers) {
      const auto* mat = model.find_material(layer.material);
      if (!mat) throw InputError("construction '" + construction->name + "' has unknown material");
      const double dx = layer.thickness / nodes_per_layer;
      const double half = 2.0 * mat->conductivity * area / dx;
      for (int j = 0; j < nodes_per_layer; ++j) {
        const std::size_t idx = layout.nodes.size();
        layout.nodes.push_back({NodeKind::Wall, si, depth++, mat->density * mat->specific_heat * dx * area});
        if (idx == sn.first) sn.outer_half_conductance = half;
        else layout.conduction.push_back({idx - 1, idx, series(previous_half, half)});
        previous_half = half;
      }
    }
    sn.count = layout.nodes.size() - sn.first;
    sn.inner_half_conductance = previous_half;
    if (is_floor(surface)) layout.floor_surfaces[*model.zone_index(surface.zone)].push_back(layout.surfaces.size());
    layout.surfaces.push_back(sn);
  }

  for (std::size_t zi = 0; zi < model.zones.size(); ++zi) {
    layout.air_node.push_back(layout.nodes.size());
    layout.nodes.push_back({NodeKind::Air, zi, 0,
                            constants::air_density_ref * constants::air_specific_heat * model.zones[zi].volume});
  }
  return layout;
}

Eigen::VectorXd NodalSystem::net_flow(const Eigen::VectorXd& t) const { return conductance * t + source; }

NodalSystem assemble(const BuildingModel& model, const NodeLayout& layout, const ThermalConfig& config,
                     const AirflowSolution& airflow, const StepInputs& in) {
  const auto n = static_cast<Eigen::Index>(layout.size());
  const WeatherRecord& w = *in.weather;
  NodalSystem sys;
  sys.capacitance.reserve(layout.size());
  for (const auto& node : layout.nodes) sys.capacitance.push_back(node.capacitance);
  sys.conductance = Eigen::MatrixXd::Zero(n, n);
  sys.source = Eigen::VectorXd::Zero(n);
  sys.solar = Eigen::VectorXd::Zero(n);
  sys.internal = Eigen::VectorXd::Zero(n);
  Assembler as{sys};

  for (const auto& c : layout.conduction) as.couple(c.a, c.b, c.value);

  const double h_out = config.h_outside(w.wind_speed);
  for (const auto& sn : layout.surfaces) {
    const auto& surface = model.surfaces[sn.surface];
    const std::size_t zone = *model.zone_index(surface.zone);
    as.couple(sn.inner_node(), layout.air_node[zone], series(config.h_inside * sn.area, sn.inner_half_conductance));

    if (std::holds_alternative<ExteriorBoundary>(surface.boundary)) {
      as.ambient(sn.outer_node(), series(h_out * sn.area, sn.outer_half_conductance), w.dry_bulb);
      const auto irr = incident_components(surface.azimuth, surface.tilt, in.sun, w.direct_normal,
                                           w.diffuse_horizontal, model.site.ground_albedo);
      const double shaded =
          surface.overhang ? overhang_shading_fraction(*surface.overhang, in.sun, surface.azimuth) : 0.0;
      const double absorbed = model.find_construction(surface.construction)->exterior_absorptivity *
                              (irr.direct * (1.0 - shaded) + irr.diffuse + irr.reflected) * sn.area;
      sys.solar[sn.outer_node()] += absorbed;
    } else if (auto adj = std::get_if<AdjacentBoundary>(&surface.boundary)) {
      const std::size_t other = *model.zone_index(adj->zone);
      as.couple(sn.outer_node(), layout.air_node[other],
                series(config.h_inside * sn.area, sn.outer_half_conductance));
    }
    // Ground: adiabatic.
  }

  for (const auto& g : model.glazings) {
    const auto& host = model.surfaces[*model.surface_index(g.surface)];
    const std::size_t zone = *model.zone_index(host.zone);
    as.ambient(layout.air_node[zone], g.u_value * g.area, w.dry_bulb);

    const auto irr = incident_components(host.azimuth, host.tilt, in.sun, w.direct_normal, w.diffuse_horizontal,
                                         model.site.ground_albedo);
    const double shaded = g.overhang ? overhang_shading_fraction(*g.overhang, in.sun, host.azimuth) : 0.0;
    const double transmitted = g.solar_transmittance * g.shading_multiplier * g.area *
                               (irr.direct * (1.0 - shaded) + irr.diffuse + irr.reflected);
    const auto& floors = layout.floor_surfaces[zone];
    if (floors.empty()) {
      sys.solar[layout.air_node[zone]] += transmitted;
    } else {
      double floor_area = 0.0;
      for (auto f : floors) floor_area += layout.surfaces[f].area;
      for (auto f : floors) sys.solar[layout.surfaces[f].inner_node()] += transmitted * layout.surfaces[f].area / floor_area;
    }
  }

  for (std::size_t zi = 0; zi < model.zones.size(); ++zi)
    sys.internal[layout.air_node[zi]] += model.zones[zi].gains.sensible[in.hour];

  auto node_of = [&](int zone) -> std::optional<std::size_t> {
    if (zone < 0) return std::nullopt;
    return layout.air_node[zone];
  };
  for (const auto& path : airflow.paths) {
    if (path.to >= 0) as.advect(layout.air_node[path.to], node_of(path.from), path.forward, w.dry_bulb);
    if (path.from >= 0) as.advect(layout.air_node[path.from], node_of(path.to), path.reverse, w.dry_bulb);
  }

  sys.source += sys.solar + sys.internal;
  return sys;
}

namespace {

Eigen::MatrixXd implicit_matrix(const NodalSystem& sys, double dt) {
  Eigen::MatrixXd m = -sys.conductance;
  for (std::size_t i = 0; i < sys.size(); ++i) m(i, i) += sys.capacitance[i] / dt;
  return m;
}

Eigen::VectorXd implicit_rhs(const NodalSystem& sys, const ThermalState& state, double dt) {
  Eigen::VectorXd rhs = sys.source;
  for (std::size_t i = 0; i < sys.size(); ++i) rhs[i] += sys.capacitance[i] / dt * state.temperatures[i];
  return rhs;
}

Eigen::VectorXd solve_refined(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  Eigen::VectorXd x = lu.solve(rhs);
  x += lu.solve(rhs - m * x);
  if (!x.allFinite()) throw ConvergenceError("singular thermal system", std::numeric_limits<double>::infinity());
  return x;
}

} // namespace

ThermalState step_implicit(const NodalSystem& system, const ThermalState& state, double dt) {
  if (!(dt > 0.0)) throw InputError("time step must be > 0");
  if (static_cast<std::size_t>(state.temperatures.size()) != system.size())
    throw InputError("thermal state does not match the nodal system");
  return {solve_refined(implicit_matrix(system, dt), implicit_rhs(system, state, dt)), state.time + dt};
}

ConditionedStep step_conditioned(const NodalSystem& system, const NodeLayout& layout, const ThermalState& state,
                                 double dt, const std::vector<std::optional<double>>& setpoints) {
  if (!(dt > 0.0)) throw InputError("time step must be > 0");
  const Eigen::MatrixXd m = implicit_matrix(system, dt);
  const Eigen::VectorXd rhs = implicit_rhs(system, state, dt);
  const std::size_t zones = layout.air_node.size();

  std::vector<bool> clamped(zones, false);
  ConditionedStep out;
  out.cooling.assign(zones, 0.0);
  for (std::size_t pass = 0; pass < 2 * zones + 2; ++pass) {
    Eigen::MatrixXd mm = m;
    Eigen::VectorXd rr = rhs;
    for (std::size_t z = 0; z < zones; ++z) {
      if (!clamped[z]) continue;
      const auto i = static_cast<Eigen::Index>(layout.air_node[z]);
      mm.row(i).setZero();
      mm(i, i) = 1.0;
      rr[i] = *setpoints[z];
    }
    out.state = {solve_refined(mm, rr), state.time + dt};

    const Eigen::VectorXd flow = system.net_flow(out.state.temperatures);
    bool changed = false;
    for (std::size_t z = 0; z < zones; ++z) {
      const auto i = layout.air_node[z];
      if (clamped[z]) {
        const double storage = system.capacitance[i] / dt * (out.state.temperatures[i] - state.temperatures[i]);
        out.cooling[z] = flow[i] - storage;
        if (out.cooling[z] < 0.0) {
          clamped[z] = false;
          out.cooling[z] = 0.0;
          changed = true;
        }
      } else if (z < setpoints.size() && setpoints[z] && out.state.temperatures[i] > *setpoints[z]) {
        clamped[z] = true;
        changed = true;
      }
    }
    if (!changed) return out;
  }
  return out;
}

double conditioning_power(std::size_t zone, const NodalSystem& system, const NodeLayout& layout,
                          const ThermalState& state, double setpoint, double dt) {
  std::vector<std::optional<double>> setpoints(layout.air_node.size());
  setpoints.at(zone) = setpoint;
  return step_conditioned(system, layout, state, dt, setpoints).cooling[zone];
}

double energy_residual(const NodalSystem& system, const NodeLayout& layout, const ThermalState& before,
                       const ConditionedStep& after, double dt) {
  const Eigen::VectorXd flow = system.net_flow(after.state.temperatures);
  Eigen::VectorXd r(system.size());
  for (std::size_t i = 0; i < system.size(); ++i)
    r[i] = system.capacitance[i] / dt * (after.state.temperatures[i] - before.temperatures[i]) - flow[i];
  for (std::size_t z = 0; z < layout.air_node.size() && z < after.cooling.size(); ++z)
    r[layout.air_node[z]] += after.cooling[z];
  return r.cwiseAbs().maxCoeff();
}

std::vector<double> air_temperatures(const NodeLayout& layout, const ThermalState& state) {
  std::vector<double> t;
  t.reserve(layout.air_node.size());
  for (auto i : layout.air_node) t.push_back(state.temperatures[i]);
  return t;
}

std::vector<double> mean_radiant_temperatures(const BuildingModel& model, const NodeLayout& layout,
                                              const ThermalConfig& config, const ThermalState& state) {
  const std::size_t zones = model.zones.size();
  std::vector<std::vector<SurfaceTemperature>> faces(zones);
  auto face = [&](double node_t, double air_t, double area, double half) {
    const double film = config.h_inside * area;
    return air_t + (node_t - air_t) * half / (film + half);
  };
  for (const auto& sn : layout.surfaces) {
    const auto& surface = model.surfaces[sn.surface];
    const std::size_t zone = *model.zone_index(surface.zone);
    const double air = state.temperatures[layout.air_node[zone]];
    faces[zone].push_back(
        {sn.area, face(state.temperatures[sn.inner_node()], air, sn.area, sn.inner_half_conductance)});
    if (auto adj = std::get_if<AdjacentBoundary>(&surface.boundary)) {
      const std::size_t other = *model.zone_index(adj->zone);
      const double other_air = state.temperatures[layout.air_node[other]];
      faces[other].push_back(
          {sn.area, face(state.temperatures[sn.outer_node()], other_air, sn.area, sn.outer_half_conductance)});
    }
  }
  std::vector<double> out(zones);
  for (std::size_t z = 0; z < zones; ++z)
    out[z] = faces[z].empty() ? state.temperatures[layout.air_node[z]] : mean_radiant(faces[z]);
  return out;
}

CoupledStep couple_zones(const BuildingModel& model, const NodeLayout& layout, const ThermalState& state,
                         const StepInputs& inputs, const ThermalConfig& thermal, const AirflowConfig& airflow_config,
                         double dt, const std::vector<std::optional<double>>& setpoints) {
  CoupledStep out;
  std::vector<double> guess = air_temperatures(layout, state);
  const bool depends_on_temperature = model.airflow.mode != AirflowMode::Sealed;

  for (int it = 1; it <= thermal.max_coupling_iterations; ++it) {
    out.iterations = it;
    out.airflow = solve_airflow(model, guess, *inputs.weather, airflow_config);
    out.system = assemble(model, layout, thermal, out.airflow, inputs);
    out.result = step_conditioned(out.system, layout, state, dt, setpoints);

    const auto next = air_temperatures(layout, out.result.state);
    double change = 0.0;
    for (std::size_t z = 0; z < next.size(); ++z) change = std::max(change, std::abs(next[z] - guess[z]));
    out.max_change = change;
    if (!depends_on_temperature || change < thermal.coupling_tolerance) {
      out.converged = true;
      return out;
    }
    // Under-relax once the plain fixed-point iteration is slow to settle.
    const double relax = it > 10 ? 0.5 : 1.0;
    for (std::size_t z = 0; z < next.size(); ++z) guess[z] += relax * (next[z] - guess[z]);
  }
  return out;
}

} // namespace tropitherm
