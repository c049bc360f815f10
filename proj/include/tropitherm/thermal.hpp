#pragma once

#include "tropitherm/airflow.hpp"
#include "tropitherm/model.hpp"
#include "tropitherm/solar.hpp"
#include "tropitherm/weather.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace tropitherm {

struct ThermalConfig {
  double h_inside = 8.3;        // W/(m2.K), combined film
  double h_outside_base = 17.0; // W/(m2.K)
  double h_outside_wind = 4.0;  // W/(m2.K) per m/s
  int nodes_per_layer = 2;
  double coupling_tolerance = 0.01; // K on zone air temperatures
  int max_coupling_iterations = 50;

  double h_outside(double wind_speed) const { return h_outside_base + h_outside_wind * wind_speed; }
};

enum class NodeKind { Wall, Air };

struct ThermalNode {
  NodeKind kind = NodeKind::Air;
  std::size_t owner = 0; // surface index for wall nodes, zone index for air nodes
  int depth = 0;         // 0 = exterior-most wall node
  double capacitance = 0.0; // J/K
};

/// Wall nodes of one opaque surface, exterior first.
struct SurfaceNodes {
  std::size_t surface = 0;
  std::size_t first = 0;
  std::size_t count = 0;
  double area = 0.0;               // opaque area, m2
  double outer_half_conductance = 0.0; // W/K, outermost node to exterior face
  double inner_half_conductance = 0.0; // W/K, innermost node to interior face
  std::size_t outer_node() const { return first; }
  std::size_t inner_node() const { return first + count - 1; }
};

struct Conductance {
  std::size_t a = 0;
  std::size_t b = 0;
  double value = 0.0; // W/K
};

struct NodeLayout {
  std::vector<ThermalNode> nodes;
  std::vector<SurfaceNodes> surfaces;        // opaque surfaces with nodes
  std::vector<std::size_t> air_node;         // per zone
  std::vector<Conductance> conduction;       // fixed wall-internal links
  std::vector<std::vector<std::size_t>> floor_surfaces; // per zone, indices into `surfaces`

  std::size_t size() const { return nodes.size(); }
};

/// Splits every layer into `nodes_per_layer` slabs with lumped capacitance and
/// adds one air node per zone.
NodeLayout discretize(const BuildingModel& model, int nodes_per_layer);

/// A heat exchange with a prescribed-temperature boundary (exterior air).
struct AmbientExchange {
  std::size_t node = 0;
  double conductance = 0.0; // W/K
  double temperature = 0.0; // degC
};

/// The linear system C dT/dt = A T + B for one time step.
struct NodalSystem {
  std::vector<double> capacitance;
  Eigen::MatrixXd conductance; // A
  Eigen::VectorXd source;      // B

  // Decomposition of B kept for energy accounting.
  std::vector<AmbientExchange> ambient;
  Eigen::VectorXd solar;    // absorbed and transmitted solar, W
  Eigen::VectorXd internal; // internal sensible gains, W

  std::size_t size() const { return capacitance.size(); }
  /// Net heat flow into each node, A T + B.
  Eigen::VectorXd net_flow(const Eigen::VectorXd& temperatures) const;
};

struct ThermalState {
  Eigen::VectorXd temperatures;
  double time = 0.0; // s
};

/// Per-hour inputs shared by the assembly steps.
struct StepInputs {
  const WeatherRecord* weather = nullptr;
  SunPosition sun;
  int hour = 0; // schedule hour, 0..23
};

NodalSystem assemble(const BuildingModel& model, const NodeLayout& layout, const ThermalConfig& config,
                     const AirflowSolution& airflow, const StepInputs& inputs);

/// Fully implicit step: (C/dt - A) T_new = C/dt T_old + B.
ThermalState step_implicit(const NodalSystem& system, const ThermalState& state, double dt);

struct ConditionedStep {
  ThermalState state;
  std::vector<double> cooling; // W removed per zone (>= 0)
};

/// Implicit step with cooling-only clamps on zone air nodes. `setpoints[z]`
/// is empty for zones that float freely this step.
ConditionedStep step_conditioned(const NodalSystem& system, const NodeLayout& layout, const ThermalState& state,
                                 double dt, const std::vector<std::optional<double>>& setpoints);

/// Sensible cooling needed to hold one zone at `setpoint`, 0 when it would
/// float below it.
double conditioning_power(std::size_t zone, const NodalSystem& system, const NodeLayout& layout,
                          const ThermalState& state, double setpoint, double dt);

/// Largest |C (T_new - T_old)/dt - (A T_new + B) + cooling| over all nodes, W.
double energy_residual(const NodalSystem& system, const NodeLayout& layout, const ThermalState& before,
                       const ConditionedStep& after, double dt);

std::vector<double> air_temperatures(const NodeLayout& layout, const ThermalState& state);

/// Interior face temperature of each opaque surface as seen from its zone.
/// Partition outer faces are reported through `mean_radiant_temperatures`.
std::vector<double> mean_radiant_temperatures(const BuildingModel& model, const NodeLayout& layout,
                                              const ThermalConfig& config, const ThermalState& state);

struct CoupledStep {
  ConditionedStep result;
  AirflowSolution airflow;
  NodalSystem system;
  int iterations = 0;
  bool converged = false;
  double max_change = 0.0; // K, last coupling update
};

/// Alternates airflow solves and implicit thermal steps until zone air
/// temperatures settle.
CoupledStep couple_zones(const BuildingModel& model, const NodeLayout& layout, const ThermalState& state,
                         const StepInputs& inputs, const ThermalConfig& thermal, const AirflowConfig& airflow,
                         double dt, const std::vector<std::optional<double>>& setpoints);

} // namespace tropitherm
