#include "support.hpp"

#include "tropitherm/errors.hpp"
#include "tropitherm/scenario.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace tropitherm {
namespace {

RunInputs inputs(const std::string& building) { return {testing::fixture(building), testing::typical_day(), {}}; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string c; std::getline(in, c, ',');) out.push_back(c);
  return out;
}

/// One sealed room with a plain wall, no sun, no gains and a constant 27 C outside.
RunInputs sealed_isothermal() {
  RunInputs in;
  auto& m = in.model;
  m.name = "sealed-isothermal";
  testing::add_basic_constructions(m);
  m.zones.push_back(testing::plain_zone("room"));
  m.surfaces.push_back({"wall", "room", 20.0, 0.0, 90.0, "concrete_wall", ExteriorBoundary{}, std::nullopt});
  m.airflow.mode = AirflowMode::Sealed;
  for (int h = 0; h < 24; ++h) {
    auto r = testing::still_night(27.0);
    r.hour_index = h;
    r.wind_speed = 0.0;
    in.weather.records.push_back(r);
  }
  return in;
}

TEST(Overrides, ApplyKnownKeys) {
  auto in = inputs("individual-light");
  apply_override(in, "h_in=4.5");
  apply_override(in, "nodes_per_layer", "3");
  apply_override(in, "wind_speed=2.5");
  apply_override(in, "wind_dir=-90");
  apply_override(in, "cd=0.6");
  apply_override(in, "season_days=30");
  apply_override(in, "cp=0:0.6,90:-0.4,180:-0.2");
  EXPECT_EQ(in.config.thermal.h_inside, 4.5);
  EXPECT_EQ(in.config.thermal.nodes_per_layer, 3);
  EXPECT_EQ(in.config.metrics.season_days, 30);
  for (const auto& r : in.weather.records) {
    EXPECT_EQ(r.wind_speed, 2.5);
    EXPECT_EQ(r.wind_direction, 270.0);
  }
  for (const auto& l : in.model.links)
    if (auto o = std::get_if<LargeOpeningFlow>(&l.kind)) {
      EXPECT_EQ(o->discharge_coefficient, 0.6);
    }

  apply_override(in, "renewal_ach=3");
  EXPECT_EQ(in.model.airflow.mode, AirflowMode::Fixed);
  EXPECT_EQ(in.model.airflow.renewals.size(), in.model.zones.size());
  apply_override(in, "closed=true");
  EXPECT_EQ(in.model.airflow.mode, AirflowMode::Sealed);
}

TEST(Overrides, RejectBadInput) {
  auto in = inputs("individual-light");
  EXPECT_THROW(apply_override(in, "colour=red"), InputError);
  EXPECT_THROW(apply_override(in, "h_in"), InputError);
  EXPECT_THROW(apply_override(in, "h_in=warm"), InputError);
  EXPECT_THROW(apply_override(in, "nodes_per_layer=1.5"), InputError);
  EXPECT_THROW(apply_override(in, "nodes_per_layer=0"), InputError);
  EXPECT_THROW(apply_override(in, "closed=maybe"), InputError);
}

TEST(Permeability, FixturesAndRescaling) {
  const auto bad = permeability(testing::fixture("individual-light"));
  EXPECT_NEAR(bad.exterior, 0.15, 1e-12);
  const auto good = permeability(testing::fixture("individual-light-good"));
  EXPECT_NEAR(good.exterior, 0.25, 1e-12);
  EXPECT_NEAR(good.interior, 0.25, 1e-12);

  const auto m = with_permeability(testing::fixture("individual-light"), 0.33, 0.21);
  const auto p = permeability(m);
  EXPECT_NEAR(p.exterior, 0.33, 1e-12);
  EXPECT_NEAR(p.interior, 0.21, 1e-12);
  std::string why;
  const auto v = ecodom::ventilation_inputs(m, &why);
  ASSERT_TRUE(v) << why;
  EXPECT_NEAR(v->so1, v->so2, 1e-12);
}

TEST(Permeability, NeedsFacadeMetadata) {
  auto m = testing::fixture("individual-light");
  m.zones[0].facades.clear();
  EXPECT_THROW(permeability(m), InputError);
}

TEST(ApplyMeasure, ImportsCollidingConstructionsUnderNewNames) {
  auto base = testing::fixture("individual-light");
  auto improved = testing::fixture("individual-light-good");
  // Same name, different definition in the two models.
  const auto roof_construction = base.surfaces[0].construction;
  const auto improved_roof = improved.surfaces[0].construction;
  for (auto& s : improved.surfaces)
    if (s.construction == improved_roof) s.construction = roof_construction;
  improved.constructions[0].name = roof_construction;

  const auto roofed = apply_measure(base, improved, Measure::Roof);
  EXPECT_TRUE(validate(roofed).empty());
  const auto* c = roofed.find_construction(roofed.surfaces[0].construction);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->exterior_absorptivity, improved.constructions[0].exterior_absorptivity);
  EXPECT_NE(roofed.surfaces[0].construction, roof_construction);
  // Walls keep the base definition.
  const auto* wall = roofed.find_construction(roofed.surfaces[6].construction);
  EXPECT_EQ(wall->exterior_absorptivity, base.find_construction(base.surfaces[6].construction)->exterior_absorptivity);
}

TEST(ApplyMeasure, EachMeasureTouchesOnlyItsGroup) {
  const auto base = testing::fixture("individual-light");
  const auto improved = testing::fixture("individual-light-good");
  const auto windows = apply_measure(base, improved, Measure::Windows);
  EXPECT_TRUE(windows.glazings[0].overhang.has_value());
  EXPECT_EQ(windows.surfaces[0].construction, base.surfaces[0].construction);
  EXPECT_EQ(building_to_json(windows)["links"], building_to_json(base)["links"]);

  const auto vent = apply_measure(base, improved, Measure::Ventilation);
  EXPECT_EQ(building_to_json(vent)["links"], building_to_json(improved)["links"]);
  EXPECT_FALSE(vent.glazings[0].overhang.has_value());
}

TEST(EmitSeries, RowsHeaderAndPrecision) {
  const auto in = inputs("individual-light-ac-bad");
  const auto result = simulate(in.model, in.weather, in.config);
  const auto rows = lines(emit_series(result));
  ASSERT_EQ(rows.size(), 1u + 24u * 3u);
  EXPECT_EQ(rows[0], "hour,zone,T_air,T_mr,T_res,w,ACH,cooling_W");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    ASSERT_EQ(cells.size(), 8u);
    for (std::size_t k = 2; k < cells.size(); ++k) {
      // Significant digits: those from the first nonzero one on.
      std::size_t digits = 0;
      bool started = false;
      for (char ch : cells[k].substr(0, cells[k].find_first_of("eE"))) {
        if (ch >= '1' && ch <= '9') started = true;
        if (started && std::isdigit(static_cast<unsigned char>(ch))) ++digits;
      }
      EXPECT_LE(digits, 6u) << rows[i];
    }
  }
  // Air temperature column carries 6 significant digits.
  const auto first = split(rows[1]);
  char expect[32];
  std::snprintf(expect, sizeof expect, "%.6g", result.zones[0].air[0]);
  EXPECT_EQ(first[2], expect);
}

TEST(EmitSeries, CoolingIsZeroOffSchedule) {
  const auto in = inputs("individual-light-ac-bad");
  const auto result = simulate(in.model, in.weather, in.config);
  const auto bed = *in.model.zone_index("bed1");
  for (std::size_t h = 6; h < 20; ++h) EXPECT_EQ(result.zones[bed].cooling[h], 0.0) << h;
  double night = 0.0;
  for (std::size_t h : {20, 21, 22, 23, 0, 1, 2, 3, 4, 5}) night += result.zones[bed].cooling[h];
  EXPECT_GT(night, 0.0);
  const auto living = *in.model.zone_index("living");
  for (double c : result.zones[living].cooling) EXPECT_EQ(c, 0.0);
}

TEST(RunModes, SealedIsothermalStaysFlat) {
  const auto in = sealed_isothermal();
  const auto files = run_simulate(in);
  const auto rows = lines(files.at("series.csv"));
  ASSERT_EQ(rows.size(), 25u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    EXPECT_EQ(cells[2], "27") << rows[i];
    EXPECT_EQ(cells[4], "27") << rows[i];
  }
}

TEST(RunModes, SweepGridHasTheReferenceCellAndIgnoresOrder) {
  auto in = inputs("individual-light");
  apply_override(in, "wind_speed=1");
  const auto forward = permeability_sweep(in, {0.15, 0.25}, {0.25});
  const auto backward = permeability_sweep(in, {0.25, 0.15}, {0.25});
  ASSERT_EQ(forward.size(), 2u);
  EXPECT_EQ(forward[1].exterior, 0.25);
  EXPECT_EQ(forward[1].interior, 0.25);
  EXPECT_EQ(forward[0].dwelling_ach, backward[1].dwelling_ach);
  EXPECT_EQ(forward[1].dwelling_ach, backward[0].dwelling_ach);
  EXPECT_EQ(forward[1].night_resultant, backward[0].night_resultant);
  EXPECT_THROW(permeability_sweep(in, {0.1}, {0.25}), InputError);
  EXPECT_THROW(permeability_sweep(in, {0.25}, {0.45}), InputError);
}

TEST(RunModes, WindStudyHasSevenDays) {
  const auto study = wind_study(inputs("individual-light"));
  ASSERT_EQ(study.days.size(), 7u);
  EXPECT_EQ(study.days[2].wind_speed, 5.0);
  EXPECT_EQ(study.days[2].wind_direction, 135.0);
  // More wind from the same direction ventilates more.
  EXPECT_GT(study.days[2].dwelling_ach, study.days[1].dwelling_ach);
}

TEST(RunModes, ImprovedCaseIsCooler) {
  const auto cmp = compare_cases(inputs("individual-light"), testing::fixture("individual-light-good"));
  EXPECT_LT(cmp.improved.comfort_metric, cmp.base.comfort_metric);
  ASSERT_EQ(cmp.attribution.size(), 4u);
  double total = 0.0;
  for (const auto& a : cmp.attribution) total += a.share_percent.value_or(0.0);
  EXPECT_NEAR(total, 100.0, 1e-9);
}

TEST(Determinism, EveryRunModeIsByteIdentical) {
  const auto tables = ecodom::load_rule_tables(ecodom::default_rules_dir());
  auto in = inputs("individual-light-ac-bad");
  EXPECT_EQ(run_simulate(in), run_simulate(in));
  EXPECT_EQ(run_windstudy(in), run_windstudy(in));
  EXPECT_EQ(run_sweep(in, {0.15, 0.25}, {0.15, 0.25}), run_sweep(in, {0.15, 0.25}, {0.15, 0.25}));
  const auto good = testing::fixture("individual-light-ac-good");
  EXPECT_EQ(run_compare(in, good), run_compare(in, good));
  EXPECT_EQ(run_check(in.model, tables), run_check(in.model, tables));
}

} // namespace
} // namespace tropitherm
