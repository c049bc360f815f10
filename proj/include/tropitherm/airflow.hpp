#pragma once

#include "tropitherm/model.hpp"
#include "tropitherm/weather.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tropitherm {

/// Piecewise-linear wind pressure coefficient over incidence angle 0..180 deg.
class CpTable {
public:
  CpTable() = default;
  explicit CpTable(std::vector<std::pair<double, double>> points);

  double operator()(double incidence_deg) const;
  const std::vector<std::pair<double, double>>& points() const { return points_; }

  /// Parses "angle:cp,angle:cp,..." (angles ascending, covering 0 and 180).
  static CpTable parse(const std::string& text);

private:
  std::vector<std::pair<double, double>> points_{{0.0, 0.70}, {90.0, -0.50}, {180.0, -0.30}};
};

struct AirflowConfig {
  CpTable cp;
  double crack_linear_below = 1e-5;  // Pa; secant regime of the power law
  double opening_linear_below = 1e-5; // Pa; same for large openings
  double target_residual = 1e-10;    // kg/s, Newton stopping test
  double required_residual = 1e-6;   // kg/s, mass conservation contract
  int max_iterations = 100;
  double max_step = 100.0;           // Pa, Newton step cap
};

/// Angle between the wind's origin and a facade's outward normal, in [0,180].
double wind_incidence(double facade_azimuth, double wind_direction);

double wind_pressure(double facade_azimuth, double wind_speed, double wind_direction, const CpTable& cp,
                     double outdoor_density);

struct FlowAndSlope {
  double flow = 0.0;  // kg/s, signed
  double slope = 0.0; // d flow / d dp
};

/// Power-law crack: sign(dp) C (rho_up/1.2) |dp|^n, linear secant below the threshold.
FlowAndSlope crack_flow(const CrackFlow& crack, double dp, double upstream_density,
                        double linear_below = 1e-5);

/// Hydrostatic state of one side of an opening: pressure at the z = 0 datum
/// and the density of the air column.
struct PressureSide {
  double datum_pressure = 0.0;
  double density = 1.2;
};

struct OpeningFlow {
  double forward = 0.0; // kg/s from -> to, >= 0
  double reverse = 0.0; // kg/s to -> from, >= 0
  std::optional<double> neutral_height; // m above datum
  double slope = 0.0;   // d(forward - reverse) / d(datum pressure difference)
  double net() const { return forward - reverse; }
};

/// Bidirectional flow through a large vertical opening whose bottom edge sits
/// `bottom_height` above the pressure datum. Closed-form integration of the
/// orifice equation over the linear pressure-difference profile.
OpeningFlow large_opening_flow(const LargeOpeningFlow& opening, double bottom_height, PressureSide from,
                               PressureSide to, double linear_below = 1e-5);

inline constexpr int exterior_node = -1;

/// One physical flow path; counter-flows are kept separate.
struct FlowPath {
  std::string id;
  int from = exterior_node; // zone index or exterior_node
  int to = exterior_node;
  double forward = 0.0;
  double reverse = 0.0;
  std::optional<double> neutral_height;
  double net() const { return forward - reverse; }
};

struct AirflowSolution {
  std::vector<FlowPath> paths;        // network mode: one per model link, model order
  std::vector<double> zone_pressures; // Pa at ground datum, model zone order
  std::vector<double> zone_residuals; // kg/s net inflow
  int iterations = 0;

  double max_residual() const;
};

/// Zone-pressure network for one set of temperatures and one weather record.
/// Unknowns are ordered by zone id and links are summed in id order, so the
/// result does not depend on the order of entities in the model.
class AirflowNetwork {
public:
  AirflowNetwork(const BuildingModel& model, std::span<const double> zone_temperatures,
                 const WeatherRecord& weather, const AirflowConfig& config = {});

  std::size_t unknowns() const { return unknown_zone_.size(); }
  /// Model zone index of each unknown.
  const std::vector<std::size_t>& unknown_zones() const { return unknown_zone_; }

  /// Net mass inflow per unknown zone and, optionally, its analytic Jacobian.
  void evaluate(const Eigen::VectorXd& pressures, Eigen::VectorXd& residual,
                Eigen::MatrixXd* jacobian) const;

  /// Damped Newton iteration from 0 Pa. Throws ConvergenceError.
  AirflowSolution solve() const;

private:
  struct Side {
    int zone = exterior_node; // model index
    int unknown = -1;         // -1 when pressure is fixed
    double fixed_pressure = 0.0;
    double density = 1.2;
  };
  struct Edge {
    std::size_t link = 0; // model link index
    Side from, to;
    bool active = false;
  };

  struct EdgeFlow {
    double forward = 0.0, reverse = 0.0, slope = 0.0;
    std::optional<double> neutral_height;
  };
  EdgeFlow edge_flow(const Edge& e, const Eigen::VectorXd& p) const;
  double side_pressure(const Side& s, const Eigen::VectorXd& p) const;

  const BuildingModel& model_;
  AirflowConfig config_;
  std::vector<double> zone_density_;
  std::vector<std::size_t> unknown_zone_;
  std::vector<Edge> edges_; // sorted by link id
};

/// Solves per the model's airflow mode: pressure network, sealed, or known flows.
AirflowSolution solve_airflow(const BuildingModel& model, std::span<const double> zone_temperatures,
                              const WeatherRecord& weather, const AirflowConfig& config = {});

AirflowSolution solve_network(const BuildingModel& model, std::span<const double> zone_temperatures,
                              const WeatherRecord& weather, const AirflowConfig& config = {});

/// Sum of mass flows entering a zone, counting both layers of a counter-flow.
double zone_inflow(std::size_t zone, const AirflowSolution& solution);

/// Air changes per hour from the incoming mass flow.
double air_changes(const Zone& zone, std::size_t zone_index, const AirflowSolution& solution,
                   double zone_temperature);

/// Human-readable dump of pressures, link flows and residuals.
std::string describe(const BuildingModel& model, const AirflowSolution& solution);

} // namespace tropitherm
