#include "tropitherm/moisture.hpp"

#include "tropitherm/constants.hpp"
#include "tropitherm/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tropitherm {

double saturation_pressure(double t) { return 610.94 * std::exp(17.625 * t / (t + 243.04)); }

double outdoor_specific_humidity(double dry_bulb, double rh) {
  if (!(rh >= 0.0 && rh <= 100.0)) throw InputError("relative humidity must be in [0,100]");
  const double pv = rh / 100.0 * saturation_pressure(dry_bulb);
  return 0.622 * pv / (constants::atmospheric_pressure - pv);
}

namespace {

struct Balance {
  Eigen::MatrixXd outflow;  // diagonal: total mass leaving each zone
  Eigen::MatrixXd exchange; // (to, from): zone-to-zone mass flow
  Eigen::VectorXd exterior_in;
};

Balance flows(std::size_t zones, const AirflowSolution& airflow) {
  Balance b{Eigen::MatrixXd::Zero(zones, zones), Eigen::MatrixXd::Zero(zones, zones),
            Eigen::VectorXd::Zero(zones)};
  auto carry = [&](int src, int dst, double m) {
    if (m <= 0.0) return;
    if (src >= 0) b.outflow(src, src) += m;
    if (dst < 0) return;
    if (src >= 0) b.exchange(dst, src) += m;
    else b.exterior_in[dst] += m;
  };
  for (const auto& p : airflow.paths) {
    carry(p.from, p.to, p.forward);
    carry(p.to, p.from, p.reverse);
  }
  return b;
}

Eigen::VectorXd storage(std::span<const double> temps, std::span<const double> volumes, double dt) {
  Eigen::VectorXd s(temps.size());
  for (std::size_t z = 0; z < temps.size(); ++z) s[z] = constants::air_density(temps[z]) * volumes[z] / dt;
  return s;
}

void check_sizes(std::size_t n, std::size_t a, std::size_t b, std::size_t c) {
  if (a != n || b != n || c != n) throw InputError("moisture inputs differ in zone count");
}

} // namespace

double moisture_balance(std::span<const double> before, std::span<const double> after,
                        std::span<const double> temps, std::span<const double> volumes,
                        const AirflowSolution& airflow, std::span<const double> gains, double w_out, double dt) {
  const std::size_t n = before.size();
  check_sizes(n, temps.size(), volumes.size(), gains.size());
  const Balance b = flows(n, airflow);
  const Eigen::VectorXd s = storage(temps, volumes, dt);
  const Eigen::Map<const Eigen::VectorXd> w0(before.data(), n), w1(after.data(), n), g(gains.data(), n);
  const Eigen::VectorXd net =
      b.exchange * w1 + b.exterior_in * w_out - b.outflow * w1 + g - s.cwiseProduct(w1 - w0);
  return n == 0 ? 0.0 : net.cwiseAbs().maxCoeff();
}

MoistureStep step_moisture(std::span<const double> humidity, std::span<const double> temps,
                           std::span<const double> volumes, const AirflowSolution& airflow,
                           std::span<const double> gains, double w_out, double dt) {
  if (!(dt > 0.0)) throw InputError("time step must be > 0");
  const std::size_t n = humidity.size();
  check_sizes(n, temps.size(), volumes.size(), gains.size());
  MoistureStep out;
  if (n == 0) return out;

  const Balance b = flows(n, airflow);
  const Eigen::VectorXd s = storage(temps, volumes, dt);
  const Eigen::Map<const Eigen::VectorXd> w0(humidity.data(), n), g(gains.data(), n);
  Eigen::MatrixXd m = b.outflow - b.exchange;
  m.diagonal() += s;
  const Eigen::VectorXd rhs = s.cwiseProduct(w0) + g + b.exterior_in * w_out;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  Eigen::VectorXd w = lu.solve(rhs);
  w += lu.solve(rhs - m * w);

  out.humidity.assign(w.data(), w.data() + n);
  out.balance_residual = moisture_balance(humidity, out.humidity, temps, volumes, airflow, gains, w_out, dt);
  for (std::size_t z = 0; z < n; ++z) {
    const double clamped = std::clamp(out.humidity[z], 0.0, max_specific_humidity);
    if (clamped != out.humidity[z]) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "zone %zu specific humidity %.6g clamped to %.6g", z, out.humidity[z], clamped);
      out.warnings.emplace_back(buf);
      out.humidity[z] = clamped;
    }
  }
  return out;
}

} // namespace tropitherm
