#include "tropitherm/airflow.hpp"

#include "tropitherm/constants.hpp"
#include "tropitherm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace tropitherm {

using constants::gravity;

CpTable::CpTable(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InputError("Cp table needs at least two points");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].first > points_[i - 1].first)) throw InputError("Cp table angles must be ascending");
  }
  if (points_.front().first > 0.0 || points_.back().first < 180.0)
    throw InputError("Cp table must cover incidence angles 0..180");
}

double CpTable::operator()(double incidence) const {
  incidence = std::clamp(incidence, 0.0, 180.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const auto& [a1, c1] = points_[i];
    if (incidence <= a1) {
      const auto& [a0, c0] = points_[i - 1];
      return c0 + (c1 - c0) * (incidence - a0) / (a1 - a0);
    }
  }
  return points_.back().second;
}

CpTable CpTable::parse(const std::string& text) {
  std::vector<std::pair<double, double>> pts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("Cp entry '" + item + "' must be angle:cp");
    try {
      pts.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw InputError("Cp entry '" + item + "' is not numeric");
    }
  }
  return CpTable(std::move(pts));
}

double wind_incidence(double facade_azimuth, double wind_direction) {
  double d = std::fmod(std::abs(wind_direction - facade_azimuth), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

double wind_pressure(double facade_azimuth, double wind_speed, double wind_direction, const CpTable& cp,
                     double outdoor_density) {
  if (wind_speed <= 0.0) return 0.0;
  return 0.5 * outdoor_density * cp(wind_incidence(facade_azimuth, wind_direction)) * wind_speed * wind_speed;
}

FlowAndSlope crack_flow(const CrackFlow& crack, double dp, double upstream_density, double linear_below) {
  const double c = crack.coefficient * upstream_density / constants::air_density_ref;
  const double mag = std::abs(dp);
  if (mag < linear_below) {
    const double slope = c * std::pow(linear_below, crack.exponent) / linear_below;
    return {slope * dp, slope};
  }
  const double flow = c * std::pow(mag, crack.exponent);
  return {std::copysign(flow, dp), crack.exponent * flow / mag};
}

namespace {

// Integral of sqrt|p| over a segment of length `len` on which |p| varies
// linearly from q1 to q2 (same sign throughout), and its derivative with
// respect to a uniform shift of |p|.
struct SegmentIntegral {
  double value = 0.0;
  double slope = 0.0;
};

SegmentIntegral sqrt_integral(double len, double q1, double q2) {
  const double s1 = std::sqrt(q1);
  const double s2 = std::sqrt(q2);
  const double sum = s1 + s2;
  if (len <= 0.0 || sum <= 0.0) return {};
  return {2.0 / 3.0 * len * (q1 + s1 * s2 + q2) / sum, len / sum};
}

} // namespace

OpeningFlow large_opening_flow(const LargeOpeningFlow& opening, double bottom_height, PressureSide from,
                               PressureSide to, double linear_below) {
  OpeningFlow out;
  const double h = opening.height;
  const double k_from = opening.discharge_coefficient * opening.width * std::sqrt(2.0 * from.density);
  const double k_to = opening.discharge_coefficient * opening.width * std::sqrt(2.0 * to.density);

  const double p_bottom = (from.datum_pressure - from.density * gravity * bottom_height) -
                          (to.datum_pressure - to.density * gravity * bottom_height);
  const double p_top = p_bottom - (from.density - to.density) * gravity * h;

  if (std::max(std::abs(p_bottom), std::abs(p_top)) < linear_below) {
    const double mean = 0.5 * (p_bottom + p_top);
    const double k = mean >= 0.0 ? k_from : k_to;
    out.slope = k * h / std::sqrt(linear_below);
    const double flow = out.slope * mean;
    if (flow >= 0.0) out.forward = flow;
    else out.reverse = -flow;
    return out;
  }

  if ((p_bottom > 0.0 && p_top < 0.0) || (p_bottom < 0.0 && p_top > 0.0)) {
    const double y = h * p_bottom / (p_bottom - p_top);
    const auto lower = sqrt_integral(y, std::abs(p_bottom), 0.0);
    const auto upper = sqrt_integral(h - y, 0.0, std::abs(p_top));
    if (p_bottom > 0.0) {
      out.forward = k_from * lower.value;
      out.reverse = k_to * upper.value;
      out.slope = k_from * lower.slope + k_to * upper.slope;
    } else {
      out.reverse = k_to * lower.value;
      out.forward = k_from * upper.value;
      out.slope = k_to * lower.slope + k_from * upper.slope;
    }
    out.neutral_height = bottom_height + y;
    return out;
  }

  const auto seg = sqrt_integral(h, std::abs(p_bottom), std::abs(p_top));
  if (p_bottom + p_top >= 0.0) {
    out.forward = k_from * seg.value;
    out.slope = k_from * seg.slope;
  } else {
    out.reverse = k_to * seg.value;
    out.slope = k_to * seg.slope;
  }
  return out;
}

double AirflowSolution::max_residual() const {
  double worst = 0.0;
  for (double r : zone_residuals) worst = std::max(worst, std::abs(r));
  return worst;
}

// ---- network -----------------------------------------------------------------

namespace {

std::optional<std::size_t> endpoint_index(const BuildingModel& model, const LinkEndpoint& e) {
  if (auto z = std::get_if<ZoneEndpoint>(&e)) return model.zone_index(z->zone);
  return std::nullopt;
}

bool link_active(const AirflowLink& link) {
  if (auto o = std::get_if<LargeOpeningFlow>(&link.kind)) return o->openable;
  return true;
}

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

AirflowNetwork::AirflowNetwork(const BuildingModel& model, std::span<const double> zone_temperatures,
                               const WeatherRecord& weather, const AirflowConfig& config)
    : model_(model), config_(config) {
  const std::size_t n = model.zones.size();
  if (zone_temperatures.size() != n) throw InputError("airflow: one temperature per zone required");
  zone_density_.resize(n);
  for (std::size_t i = 0; i < n; ++i) zone_density_[i] = constants::air_density(zone_temperatures[i]);
  const double outdoor_density = constants::air_density(weather.dry_bulb);

  std::vector<std::size_t> link_order(model.links.size());
  std::iota(link_order.begin(), link_order.end(), 0);
  std::sort(link_order.begin(), link_order.end(),
            [&](std::size_t a, std::size_t b) { return model.links[a].id < model.links[b].id; });

  std::vector<std::size_t> zone_order(n);
  std::iota(zone_order.begin(), zone_order.end(), 0);
  std::sort(zone_order.begin(), zone_order.end(),
            [&](std::size_t a, std::size_t b) { return model.zones[a].id < model.zones[b].id; });

  // Connectivity over active links decides which pressures are unknown.
  DisjointSet sets(n + 1); // slot n is the exterior
  std::vector<bool> linked(n, false);
  for (std::size_t li : link_order) {
    const auto& link = model.links[li];
    if (!link_active(link)) continue;
    auto a = endpoint_index(model, link.from);
    auto b = endpoint_index(model, link.to);
    const std::size_t ia = a.value_or(n), ib = b.value_or(n);
    if (a) linked[*a] = true;
    if (b) linked[*b] = true;
    sets.unite(ia, ib);
  }
  std::vector<bool> pinned(n, false);
  std::vector<bool> component_has_reference(n + 1, false);
  component_has_reference[sets.find(n)] = true;
  for (std::size_t zi : zone_order) {
    if (!linked[zi]) continue;
    const auto root = sets.find(zi);
    if (!component_has_reference[root]) {
      component_has_reference[root] = true;
      pinned[zi] = true;
    }
  }
  std::vector<int> unknown_of(n, -1);
  for (std::size_t zi : zone_order) {
    if (linked[zi] && !pinned[zi]) {
      unknown_of[zi] = static_cast<int>(unknown_zone_.size());
      unknown_zone_.push_back(zi);
    }
  }

  auto make_side = [&](const LinkEndpoint& e) {
    Side s;
    if (auto zi = endpoint_index(model, e)) {
      s.zone = static_cast<int>(*zi);
      s.unknown = unknown_of[*zi];
      s.density = zone_density_[*zi];
    } else {
      const auto& ext = std::get<ExteriorEndpoint>(e);
      s.fixed_pressure = wind_pressure(ext.facade_azimuth, weather.wind_speed, weather.wind_direction,
                                       config_.cp, outdoor_density);
      s.density = outdoor_density;
    }
    return s;
  };
  for (std::size_t li : link_order) {
    const auto& link = model.links[li];
    edges_.push_back(Edge{li, make_side(link.from), make_side(link.to), link_active(link)});
  }
}

double AirflowNetwork::side_pressure(const Side& s, const Eigen::VectorXd& p) const {
  return s.unknown >= 0 ? p[s.unknown] : s.fixed_pressure;
}

AirflowNetwork::EdgeFlow AirflowNetwork::edge_flow(const Edge& e, const Eigen::VectorXd& p) const {
  EdgeFlow out;
  if (!e.active) return out;
  const auto& link = model_.links[e.link];
  const double pf = side_pressure(e.from, p);
  const double pt = side_pressure(e.to, p);
  if (auto crack = std::get_if<CrackFlow>(&link.kind)) {
    const double z = link.mid_height;
    const double dp = (pf - e.from.density * gravity * z) - (pt - e.to.density * gravity * z);
    const auto f = crack_flow(*crack, dp, dp >= 0.0 ? e.from.density : e.to.density, config_.crack_linear_below);
    out.forward = std::max(0.0, f.flow);
    out.reverse = std::max(0.0, -f.flow);
    out.slope = f.slope;
  } else {
    const auto& opening = std::get<LargeOpeningFlow>(link.kind);
    const auto f = large_opening_flow(opening, link.mid_height - opening.height / 2.0, {pf, e.from.density},
                                      {pt, e.to.density}, config_.opening_linear_below);
    out.forward = f.forward;
    out.reverse = f.reverse;
    out.slope = f.slope;
    out.neutral_height = f.neutral_height;
  }
  return out;
}

void AirflowNetwork::evaluate(const Eigen::VectorXd& p, Eigen::VectorXd& residual, Eigen::MatrixXd* jacobian) const {
  const auto m = static_cast<Eigen::Index>(unknowns());
  residual = Eigen::VectorXd::Zero(m);
  if (jacobian) *jacobian = Eigen::MatrixXd::Zero(m, m);
  for (const auto& e : edges_) {
    if (!e.active) continue;
    const auto f = edge_flow(e, p);
    const double net = f.forward - f.reverse;
    const int a = e.from.unknown, b = e.to.unknown;
    if (b >= 0) residual[b] += net;
    if (a >= 0) residual[a] -= net;
    if (!jacobian) continue;
    auto& jac = *jacobian;
    if (b >= 0) {
      if (a >= 0) jac(b, a) += f.slope;
      jac(b, b) -= f.slope;
    }
    if (a >= 0) {
      jac(a, a) -= f.slope;
      if (b >= 0) jac(a, b) += f.slope;
    }
  }
}

AirflowSolution AirflowNetwork::solve() const {
  const auto m = static_cast<Eigen::Index>(unknowns());
  Eigen::VectorXd p = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd r, trial_r;
  Eigen::MatrixXd jac;
  int iterations = 0;

  if (m > 0) {
    evaluate(p, r, &jac);
    double norm = r.cwiseAbs().maxCoeff();
    while (norm >= config_.target_residual && iterations < config_.max_iterations) {
      ++iterations;
      Eigen::VectorXd step = jac.fullPivLu().solve(-r);
      if (!step.allFinite()) break;
      const double largest = step.cwiseAbs().maxCoeff();
      if (largest > config_.max_step) step *= config_.max_step / largest;

      // Sufficient decrease on the 2-norm; a bare decrease lets square-root laws
      // bounce across the root with a full step forever.
      const double merit = r.norm();
      double lambda = 1.0;
      Eigen::VectorXd trial = p + step;
      evaluate(trial, trial_r, nullptr);
      while (trial_r.norm() > (1.0 - 0.5 * lambda) * merit && lambda > 1.0 / 1024.0) {
        lambda *= 0.5;
        trial = p + lambda * step;
        evaluate(trial, trial_r, nullptr);
      }
      if (trial_r.norm() >= merit && largest * lambda < 1e-14) break; // stalled at round-off
      p = trial;
      evaluate(p, r, &jac);
      norm = r.cwiseAbs().maxCoeff();
    }
    if (!(norm < config_.required_residual)) {
      std::ostringstream msg;
      msg << "airflow network did not converge after " << iterations << " iterations; worst zone residual "
          << norm << " kg/s";
      throw ConvergenceError(msg.str(), norm);
    }
  }

  AirflowSolution sol;
  sol.iterations = iterations;
  const std::size_t n = model_.zones.size();
  sol.zone_pressures.assign(n, 0.0);
  for (Eigen::Index k = 0; k < m; ++k) sol.zone_pressures[unknown_zone_[k]] = p[k];
  sol.zone_residuals.assign(n, 0.0);
  sol.paths.resize(model_.links.size());
  for (const auto& e : edges_) {
    const auto f = edge_flow(e, p);
    auto& path = sol.paths[e.link];
    path.id = model_.links[e.link].id;
    path.from = e.from.zone;
    path.to = e.to.zone;
    path.forward = f.forward;
    path.reverse = f.reverse;
    path.neutral_height = f.neutral_height;
    if (path.to >= 0) sol.zone_residuals[path.to] += path.net();
    if (path.from >= 0) sol.zone_residuals[path.from] -= path.net();
  }
  return sol;
}

AirflowSolution solve_network(const BuildingModel& model, std::span<const double> zone_temperatures,
                              const WeatherRecord& weather, const AirflowConfig& config) {
  return AirflowNetwork(model, zone_temperatures, weather, config).solve();
}

namespace {

int endpoint_node(const BuildingModel& model, const LinkEndpoint& e) {
  auto i = endpoint_index(model, e);
  return i ? static_cast<int>(*i) : exterior_node;
}

AirflowSolution sealed_solution(const BuildingModel& model) {
  AirflowSolution sol;
  sol.zone_pressures.assign(model.zones.size(), 0.0);
  sol.zone_residuals.assign(model.zones.size(), 0.0);
  for (const auto& link : model.links) {
    FlowPath path;
    path.id = link.id;
    path.from = endpoint_node(model, link.from);
    path.to = endpoint_node(model, link.to);
    sol.paths.push_back(path);
  }
  return sol;
}

AirflowSolution fixed_solution(const BuildingModel& model, std::span<const double> zone_temperatures,
                               const AirflowConfig& config) {
  AirflowSolution sol;
  sol.zone_pressures.assign(model.zones.size(), 0.0);
  sol.zone_residuals.assign(model.zones.size(), 0.0);
  std::size_t k = 0;
  for (const auto& f : model.airflow.fixed_flows) {
    FlowPath path;
    path.id = "fixed-" + std::to_string(k++);
    path.from = endpoint_node(model, f.from);
    path.to = endpoint_node(model, f.to);
    path.forward = f.mass_flow;
    sol.paths.push_back(path);
  }
  for (const auto& r : model.airflow.renewals) {
    const auto zi = *model.zone_index(r.zone);
    const double mass = constants::air_density(zone_temperatures[zi]) * model.zones[zi].volume * r.air_changes / 3600.0;
    FlowPath path;
    path.id = "renewal-" + r.zone;
    path.from = exterior_node;
    path.to = static_cast<int>(zi);
    path.forward = mass;
    path.reverse = mass;
    sol.paths.push_back(path);
  }
  for (const auto& path : sol.paths) {
    if (path.to >= 0) sol.zone_residuals[path.to] += path.net();
    if (path.from >= 0) sol.zone_residuals[path.from] -= path.net();
  }
  for (std::size_t i = 0; i < model.zones.size(); ++i) {
    if (std::abs(sol.zone_residuals[i]) >= config.required_residual)
      throw InputError("known airflow rates do not conserve mass in zone '" + model.zones[i].id + "'");
  }
  return sol;
}

} // namespace

AirflowSolution solve_airflow(const BuildingModel& model, std::span<const double> zone_temperatures,
                              const WeatherRecord& weather, const AirflowConfig& config) {
  switch (model.airflow.mode) {
  case AirflowMode::Sealed: return sealed_solution(model);
  case AirflowMode::Fixed: return fixed_solution(model, zone_temperatures, config);
  case AirflowMode::Network: break;
  }
  return solve_network(model, zone_temperatures, weather, config);
}

double zone_inflow(std::size_t zone, const AirflowSolution& solution) {
  const int z = static_cast<int>(zone);
  double in = 0.0;
  for (const auto& p : solution.paths) {
    if (p.to == z) in += p.forward;
    if (p.from == z) in += p.reverse;
  }
  return in;
}

double air_changes(const Zone& zone, std::size_t zone_index, const AirflowSolution& solution,
                   double zone_temperature) {
  return zone_inflow(zone_index, solution) / constants::air_density(zone_temperature) * 3600.0 / zone.volume;
}

std::string describe(const BuildingModel& model, const AirflowSolution& sol) {
  std::ostringstream out;
  char buf[256];
  out << "airflow solution (" << sol.iterations << " Newton iterations)\n";
  for (std::size_t i = 0; i < model.zones.size(); ++i) {
    std::snprintf(buf, sizeof buf, "  zone %-16s p=%12.6g Pa  residual=%.3g kg/s\n", model.zones[i].id.c_str(),
                  sol.zone_pressures[i], sol.zone_residuals[i]);
    out << buf;
  }
  auto name = [&](int node) { return node < 0 ? std::string("exterior") : model.zones[node].id; };
  for (const auto& p : sol.paths) {
    std::snprintf(buf, sizeof buf, "  link %-16s %s -> %s  fwd=%.6g rev=%.6g kg/s", p.id.c_str(),
                  name(p.from).c_str(), name(p.to).c_str(), p.forward, p.reverse);
    out << buf;
    if (p.neutral_height) {
      std::snprintf(buf, sizeof buf, "  neutral=%.4g m", *p.neutral_height);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

} // namespace tropitherm
