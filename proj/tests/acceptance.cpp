// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "oracles.hpp"
#include "support.hpp"

#include "tropitherm/ecodom.hpp"
#include "tropitherm/metrics.hpp"
#include "tropitherm/scenario.hpp"
#include "tropitherm/simulation.hpp"
#include "tropitherm/thermal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace tropitherm {
namespace {

using testing::compliance_corpus;
using testing::compliance_mismatches;
using testing::fixture;
using testing::typical_day;

/// Collects failed checks of one criterion.
class Checks {
public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream msg;
    msg.precision(12);
    msg << what << ": got " << got << ", want " << want << " +- " << tol;
    expect(std::abs(got - want) <= tol, msg.str());
  }
  void note(const std::string& line) { notes_.push_back(line); }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

RunInputs inputs(const std::string& name) { return {fixture(name), typical_day(), {}}; }

// ---- criteria -------------------------------------------------------------------

void comfort_formulas(Checks& c) {
  c.near(resultant_temperature(26.0, 30.0), 27.8, 1e-12, "resultant(26, 30)");
  const std::vector<SurfaceTemperature> faces{{10.0, 30.0}, {5.0, 24.0}};
  c.near(mean_radiant(faces), 28.0, 1e-12, "mean radiant of 10 m2 at 30 C and 5 m2 at 24 C");
}

void implicit_step(Checks& c) {
  NodalSystem s;
  s.capacitance = {1e5};
  s.conductance = Eigen::MatrixXd::Constant(1, 1, -100.0);
  s.source = Eigen::VectorXd::Constant(1, 100.0 * 30.0);
  s.solar = Eigen::VectorXd::Zero(1);
  s.internal = Eigen::VectorXd::Zero(1);
  s.ambient = {{0, 100.0, 30.0}};
  ThermalState t0;
  t0.temperatures = Eigen::VectorXd::Constant(1, 20.0);
  const double got = step_implicit(s, t0, 3600.0).temperatures[0];
  // (C T0 + dt K Text) / (C + dt K)
  const double oracle = (1e5 * 20.0 + 3600.0 * 100.0 * 30.0) / (1e5 + 3600.0 * 100.0);
  c.near(got, oracle, 1e-9, "single node after one hour");
  c.near(got, 27.8261, 5e-5, "single node, rounded value");
}

void conservation(Checks& c) {
  const auto weather = typical_day();
  for (const auto& e : std::filesystem::directory_iterator(testing::data_dir() / "buildings")) {
    const auto name = e.path().stem().string();
    const auto start = std::chrono::steady_clock::now();
    const auto r = simulate(load_building(e.path()), weather);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(r.worst_thermal_residual() < 1e-6, name + fmt(": thermal residual %.3g W", r.worst_thermal_residual()));
    c.expect(r.worst_airflow_residual() < 1e-6,
             name + fmt(": airflow residual %.3g kg/s", r.worst_airflow_residual()));
    c.expect(r.worst_moisture_residual() < 1e-9,
             name + fmt(": moisture residual %.3g kg/s", r.worst_moisture_residual()));
    c.expect(r.all_converged(), name + ": a step did not converge");
    c.expect(seconds < 30.0, name + fmt(": run took %.1f s", seconds));
    c.note(name + fmt(": thermal %.2g W, airflow %.2g kg/s, moisture %.2g kg/s", r.worst_thermal_residual(),
                      r.worst_airflow_residual(), r.worst_moisture_residual()));
  }
}

void walton(Checks& c) {
  const LargeOpeningFlow door{0.9, 2.0, 0.78, true};
  const PressureSide warm{0.0, constants::air_density(30.0)}, cool{0.0, constants::air_density(20.0)};
  // Datum at the opening's mid-height, where the two pressures are equal.
  const double bottom = -door.height / 2.0;
  const auto f = large_opening_flow(door, bottom, warm, cool);
  const auto oracle = testing::strip_integrate(door, bottom, warm, cool, 1000);
  c.expect(f.neutral_height.has_value(), "stack doorway has a neutral plane");
  if (f.neutral_height) c.near(*f.neutral_height - bottom, 1.0, 0.02, "neutral plane above the sill");
  c.near(f.forward, oracle.forward, 0.01 * oracle.forward, "outflow against 1000 strips");
  c.near(f.reverse, oracle.reverse, 0.01 * oracle.reverse, "inflow against 1000 strips");

  const auto iso = large_opening_flow(door, 0.0, {1.0, 1.2}, {0.0, 1.2});
  const double orifice = 0.78 * 0.9 * 2.0 * std::sqrt(2.0 * 1.2 * 1.0);
  c.near(iso.forward, orifice, 1e-6, "isothermal 1 Pa opening");
  c.near(orifice, 2.17, 0.01, "orifice value");
}

void network_analytics(Checks& c) {
  {
    const auto m = testing::cross_flow_zone(0.5);
    AirflowConfig cfg;
    cfg.cp = CpTable({{0.0, 0.70}, {90.0, -0.50}, {180.0, -0.50}});
    WeatherRecord w = testing::still_night(28.0);
    w.wind_speed = 5.0;
    w.wind_direction = 0.0;
    const double rho = constants::air_density(w.dry_bulb);
    const std::vector<double> temps{w.dry_bulb};
    const auto sol = solve_network(m, temps, w, cfg);
    const double pw = 0.5 * rho * 0.70 * 25.0, pl = 0.5 * rho * -0.50 * 25.0;
    // Equal cracks in series split the pressure drop evenly.
    const double flow = 0.002 * rho / 1.2 * std::sqrt((pw - pl) / 2.0);
    c.near(sol.paths[0].net(), flow, 1e-8, "windward crack flow");
    c.near(sol.paths[1].net(), -flow, 1e-8, "leeward crack flow");
  }

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t zones = 1 + trial % 5;
    const auto m = testing::random_network(rng, zones);
    WeatherRecord w = testing::still_night(20.0 + 15.0 * u(rng));
    w.wind_speed = 5.0 * u(rng);
    w.wind_direction = 359.0 * u(rng);
    std::vector<double> temps;
    for (std::size_t z = 0; z < zones; ++z) temps.push_back(20.0 + 15.0 * u(rng));
    const AirflowNetwork net(m, temps, w);
    const auto n = static_cast<Eigen::Index>(net.unknowns());
    Eigen::VectorXd p(n);
    for (Eigen::Index i = 0; i < n; ++i) p[i] = -5.0 + 10.0 * u(rng);
    Eigen::VectorXd r, rp, rm;
    Eigen::MatrixXd jac;
    net.evaluate(p, r, &jac);
    const double h = 1e-4;
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::VectorXd q = p;
      q[j] += h;
      net.evaluate(q, rp, nullptr);
      q[j] -= 2.0 * h;
      net.evaluate(q, rm, nullptr);
      const Eigen::VectorXd fd = (rp - rm) / (2.0 * h);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double scale = std::max(std::abs(jac(i, j)), std::abs(fd[i]));
        if (scale > 0.0) worst = std::max(worst, std::abs(jac(i, j) - fd[i]) / scale);
        c.expect(std::abs(jac(i, j) - fd[i]) <= 1e-4 * scale + 1e-12,
                 "network " + std::to_string(trial) + fmt(": jacobian entry (%g, %g)", double(i), double(j)));
      }
    }
  }
  c.note(fmt("worst relative jacobian error %.2g over 20 networks", worst));
}

double principal_day_resultant(const BuildingModel& m, const WeatherSequence& w) {
  const auto r = simulate(m, w);
  double sum = 0.0;
  int count = 0;
  for (std::size_t z = 0; z < m.zones.size(); ++z) {
    if (!m.zones[z].principal) continue;
    sum += zone_summary(m, r, z, 0).day_resultant;
    ++count;
  }
  return sum / count;
}

void roof_finding(Checks& c) {
  const auto base = fixture("individual-light");
  const auto weather = typical_day();
  auto light = base;
  const auto roof = light.surfaces[0].construction;
  for (auto& k : light.constructions)
    if (k.name == roof) k.exterior_absorptivity = 0.3;
  auto insulated = light;
  if (!insulated.find_material("insulation")) insulated.materials.push_back({"insulation", 0.041, 30.0, 1400.0});
  for (auto& k : insulated.constructions)
    if (k.name == roof) k.layers.insert(k.layers.end() - 1, {"insulation", 0.05});

  c.expect(std::abs(base.find_construction(roof)->exterior_absorptivity - 0.9) < 1e-12, "base roof absorptivity 0.9");
  const double t_dark = principal_day_resultant(base, weather);
  const double t_light = principal_day_resultant(light, weather);
  const double t_insulated = principal_day_resultant(insulated, weather);
  c.expect(t_dark - t_light >= 1.0, fmt("light colour lowers day resultant by %.3f K (need 1.0)", t_dark - t_light));
  c.expect(t_light - t_insulated >= 0.5,
           fmt("5 cm insulation lowers it a further %.3f K (need 0.5)", t_light - t_insulated));
  c.note(fmt("day resultant %.2f -> %.2f -> %.2f C", t_dark, t_light, t_insulated));
}

void ventilation_finding(Checks& c) {
  auto in = inputs("individual-light");
  apply_override(in, "wind_speed=1");
  const std::vector<double> grid{0.15, 0.20, 0.25, 0.30, 0.35, 0.40};
  const auto cells = permeability_sweep(in, grid, grid);
  auto ach = [&](std::size_t e, std::size_t i) { return cells[e * grid.size() + i].dwelling_ach; };
  const double low = ach(0, 0), ref = ach(2, 2);
  c.expect(ref >= 1.5 * low, fmt("ACH(25%%, 25%%) = %.2f vs ACH(15%%, 15%%) = %.2f", ref, low));
  for (std::size_t k = 1; k < grid.size(); ++k)
    c.expect(ach(k, k) >= ach(k - 1, k - 1),
             fmt("diagonal decreases at %.0f%%: %.3f < %.3f", 100 * grid[k], ach(k, k), ach(k - 1, k - 1)));
  std::string diag = "diagonal ACH:";
  for (std::size_t k = 0; k < grid.size(); ++k) diag += fmt(" %.1f", ach(k, k));
  c.note(diag);
}

double free_float_swing(const std::string& name, const WeatherSequence& w) {
  auto m = fixture(name);
  SimulationConfig cfg;
  cfg.conditioning = false;
  const auto r = simulate(m, w, cfg);
  double swing = 0.0;
  int count = 0;
  for (std::size_t z = 0; z < m.zones.size(); ++z) {
    if (!m.zones[z].principal) continue;
    const auto& t = r.zones[z].resultant;
    swing += *std::max_element(t.begin(), t.begin() + 24) - *std::min_element(t.begin(), t.begin() + 24);
    ++count;
  }
  return swing / count;
}

void ac_finding(Checks& c) {
  for (const std::string structure : {"light", "heavy"}) {
    const auto cmp = compare_cases(inputs("individual-" + structure + "-ac-bad"),
                                   fixture("individual-" + structure + "-ac-good"));
    c.expect(cmp.cooling_reduction >= 0.30,
             structure + fmt(": nightly cooling reduced by %.1f%% (need 30%%)", 100.0 * cmp.cooling_reduction));
    c.note(structure + fmt(": %.3f -> %.3f kWh per night", cmp.base.cooling_energy, cmp.improved.cooling_energy));
  }
  const auto w = typical_day();
  const double light = free_float_swing("individual-light", w), heavy = free_float_swing("individual-heavy", w);
  c.expect(heavy < light, fmt("free-float resultant swing heavy %.2f K vs light %.2f K", heavy, light));
  c.note(fmt("free-float swing light %.2f K, heavy %.2f K", light, heavy));
}

void compliance(Checks& c) {
  const auto tables = ecodom::load_rule_tables(ecodom::default_rules_dir());
  const auto corpus = compliance_corpus();
  c.expect(corpus.size() >= 20, "corpus holds at least 20 dwellings");
  std::size_t verdicts = 0;
  for (const auto& k : corpus) {
    verdicts += k.expected.size();
    for (const auto& m : compliance_mismatches(k, tables)) c.expect(false, m);
  }
  c.note(std::to_string(corpus.size()) + " dwellings, " + std::to_string(verdicts) + " hand-marked verdicts");
}

void determinism(Checks& c) {
  const auto tables = ecodom::load_rule_tables(ecodom::default_rules_dir());
  const auto in = inputs("individual-light-ac-bad");
  const auto good = fixture("individual-light-ac-good");
  const std::vector<double> grid{0.15, 0.25, 0.40};
  const std::vector<std::pair<std::string, std::function<OutputFiles()>>> modes{
      {"simulate", [&] { return run_simulate(in); }},
      {"windstudy", [&] { return run_windstudy(in); }},
      {"sweep", [&] { return run_sweep(in, grid, grid); }},
      {"compare", [&] { return run_compare(in, good); }},
      {"check", [&] { return run_check(in.model, tables); }}};
  for (const auto& [name, run] : modes) c.expect(run() == run(), name + ": outputs differ between two runs");
}

struct Criterion {
  int id;
  double limit_seconds; // 0: no limit on the whole criterion
  void (*run)(Checks&);
};

} // namespace
} // namespace tropitherm

int main() {
  using namespace tropitherm;
  // Criterion 3 bounds each fixture run separately.
  const std::vector<Criterion> criteria{{1, 1.0, comfort_formulas},   {2, 1.0, implicit_step},
                                        {3, 0.0, conservation},       {4, 5.0, walton},
                                        {5, 30.0, network_analytics}, {6, 60.0, roof_finding},
                                        {7, 120.0, ventilation_finding}, {8, 120.0, ac_finding},
                                        {9, 5.0, compliance},         {10, 0.0, determinism}};
  int failed = 0;
  for (const auto& k : criteria) {
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      k.run(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    checks.expect(k.limit_seconds == 0.0 || seconds < k.limit_seconds, fmt("runtime %.2f s exceeds %.0f s", seconds, k.limit_seconds));
    const bool ok = checks.failures().empty();
    if (!ok) ++failed;
    std::printf("criterion %d: %s (%.2f s)\n", k.id, ok ? "PASS" : "FAIL", seconds);
    for (const auto& n : checks.notes()) std::printf("    %s\n", n.c_str());
    for (const auto& f : checks.failures()) std::printf("    failed: %s\n", f.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
