#include "support.hpp"

#include "tropitherm/constants.hpp"
#include "tropitherm/errors.hpp"
#include "tropitherm/moisture.hpp"
#include "tropitherm/simulation.hpp"

#include <gtest/gtest.h>

#include <random>

namespace tropitherm {
namespace {

AirflowSolution exterior_inflow(double mass) {
  AirflowSolution s;
  s.paths.push_back({"vent", exterior_node, 0, mass, mass, std::nullopt});
  return s;
}

TEST(Psychrometrics, ChartValues) {
  EXPECT_EQ(outdoor_specific_humidity(30.0, 0.0), 0.0);
  EXPECT_NEAR(outdoor_specific_humidity(30.0, 100.0), 0.0273, 0.02 * 0.0273);
  EXPECT_NEAR(outdoor_specific_humidity(25.0, 50.0), 0.0099, 0.02 * 0.0099);
  EXPECT_THROW(outdoor_specific_humidity(25.0, 101.0), InputError);
}

TEST(Psychrometrics, SaturationPressureRisesWithTemperature) {
  double previous = 0.0;
  for (double t = 0.0; t <= 45.0; t += 1.0) {
    EXPECT_GT(saturation_pressure(t), previous);
    previous = saturation_pressure(t);
  }
  EXPECT_NEAR(saturation_pressure(0.0), 610.94, 1e-9);
}

TEST(Moisture, IsolatedZoneKeepsItsHumidity) {
  const std::vector<double> w{0.015}, t{27.0}, v{30.0}, g{0.0};
  const auto step = step_moisture(w, t, v, AirflowSolution{}, g, 0.02, 3600.0);
  EXPECT_NEAR(step.humidity[0], 0.015, 1e-15);
  EXPECT_TRUE(step.warnings.empty());
}

TEST(Moisture, MixingApproachesSourceMonotonically) {
  std::vector<double> w{0.020};
  const std::vector<double> t{27.0}, v{30.0}, g{0.0};
  double previous = w[0];
  for (int i = 0; i < 50; ++i) {
    w = step_moisture(w, t, v, exterior_inflow(0.5), g, 0.012, 3600.0).humidity;
    EXPECT_LE(w[0], previous);
    EXPECT_GE(w[0], 0.012);
    previous = w[0];
  }
  EXPECT_NEAR(w[0], 0.012, 1e-9);
}

TEST(Moisture, SteadyStateMatchesClosedForm) {
  const double m = 0.02, w_in = 0.012, gain = 2e-5;
  std::vector<double> w{0.010};
  const std::vector<double> t{27.0}, v{30.0}, g{gain};
  for (int i = 0; i < 400; ++i) w = step_moisture(w, t, v, exterior_inflow(m), g, w_in, 3600.0).humidity;
  EXPECT_NEAR(w[0], w_in + gain / m, 1e-6);
}

TEST(Moisture, ClampIsLogged) {
  const std::vector<double> w{0.049}, t{27.0}, v{1.0}, g{1.0};
  const auto step = step_moisture(w, t, v, AirflowSolution{}, g, 0.01, 3600.0);
  EXPECT_EQ(step.humidity[0], max_specific_humidity);
  ASSERT_EQ(step.warnings.size(), 1u);
  EXPECT_NE(step.warnings[0].find("clamped"), std::string::npos);
}

TEST(MoistureProperty, ConservationAndMaximumPrinciple) {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto model = testing::fixture("individual-light");
  for (int trial = 0; trial < 30; ++trial) {
    WeatherRecord rec = testing::still_night(24.0 + 8.0 * u(rng));
    rec.wind_speed = 4.0 * u(rng);
    rec.wind_direction = 359.0 * u(rng);
    std::vector<double> temps, vols, w, gains(model.zones.size(), 0.0);
    for (const auto& z : model.zones) {
      temps.push_back(24.0 + 8.0 * u(rng));
      vols.push_back(z.volume);
      w.push_back(0.010 + 0.01 * u(rng));
    }
    const auto flow = solve_airflow(model, temps, rec);
    const double w_out = 0.010 + 0.01 * u(rng);
    const auto step = step_moisture(w, temps, vols, flow, gains, w_out, 3600.0);
    EXPECT_LT(step.balance_residual, 1e-9);
    const double lo = std::min(w_out, *std::min_element(w.begin(), w.end()));
    const double hi = std::max(w_out, *std::max_element(w.begin(), w.end()));
    for (double x : step.humidity) {
      EXPECT_GE(x, lo - 1e-15);
      EXPECT_LE(x, hi + 1e-15);
    }
  }
}

TEST(Moisture, SimulationReportsHumidityAndBalance) {
  const auto r = simulate(testing::fixture("individual-light"), testing::typical_day());
  EXPECT_LT(r.worst_moisture_residual(), 1e-9);
  for (const auto& z : r.zones)
    for (double w : z.humidity) {
      EXPECT_GT(w, 0.0);
      EXPECT_LT(w, max_specific_humidity);
    }
}

} // namespace
} // namespace tropitherm
