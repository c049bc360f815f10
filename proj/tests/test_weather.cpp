#include "support.hpp"

#include "tropitherm/errors.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace tropitherm {
namespace {

std::string day_file(int rows, const std::string& override_row = {}, int override_at = -1) {
  std::ostringstream out;
  out << "# label: test day\n# day_of_year: 20\n" << weather_header << '\n';
  for (int h = 0; h < rows; ++h) {
    if (h == override_at) out << override_row << '\n';
    else out << h % 24 << ",27.0,75,0,0,1.0,180\n";
  }
  return out.str();
}

std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_weather(in, "day.csv");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

TEST(Weather, ValidDayParses) {
  std::istringstream in(day_file(24));
  const auto w = parse_weather(in);
  ASSERT_EQ(w.records.size(), 24u);
  EXPECT_EQ(w.days(), 1u);
  EXPECT_EQ(w.site.day_of_year, 20);
  EXPECT_EQ(w.site.label, "test day");
  EXPECT_EQ(w.records[13].hour_index, 13);
}

TEST(Weather, HumidityOutOfRangeNamesFieldAndLine) {
  const auto msg = error_of(day_file(24, "5,27.0,130,0,0,1.0,180", 5));
  EXPECT_NE(msg.find("relative_humidity"), std::string::npos) << msg;
  EXPECT_NE(msg.find("day.csv:9"), std::string::npos) << msg;
}

TEST(Weather, LengthMustBeWholeDays) {
  const auto msg = error_of(day_file(23));
  EXPECT_NE(msg.find("length must be multiple of 24"), std::string::npos) << msg;
}

TEST(Weather, MalformedCellsAndSequence) {
  EXPECT_NE(error_of(day_file(24, "3,warm,75,0,0,1,180", 3)).find("dry_bulb"), std::string::npos);
  EXPECT_NE(error_of(day_file(24, "4,27,75,0,0,1,180", 3)).find("out of sequence"), std::string::npos);
  EXPECT_NE(error_of(day_file(24, "3,27,75,0,0,1,360", 3)).find("wind_direction"), std::string::npos);
  EXPECT_NE(error_of("hour,temp\n").find("expected header"), std::string::npos);
}

TEST(Weather, WriteThenReadIsIdentity) {
  const auto w = testing::typical_day();
  std::ostringstream out;
  write_weather(out, w);
  std::istringstream in(out.str());
  const auto back = parse_weather(in);
  ASSERT_EQ(back.records.size(), w.records.size());
  for (std::size_t i = 0; i < w.records.size(); ++i) EXPECT_DOUBLE_EQ(back.records[i].dry_bulb, w.records[i].dry_bulb);
  EXPECT_EQ(back.site.label, w.site.label);
}

TEST(Weather, CompassConstants) {
  EXPECT_EQ(compass::north, 0.0);
  EXPECT_EQ(compass::east, 90.0);
  EXPECT_EQ(compass::south_east, 135.0);
}

TEST(WindStudy, SevenDaysWithTheListedWinds) {
  const auto base = testing::typical_day();
  const auto w = build_wind_study(base.records, base.site);
  ASSERT_EQ(w.records.size(), 7u * 24u);
  const double speed[7] = {0, 1, 5, 1, 5, 1, 5};
  const double dir[7] = {0, 135, 135, 90, 90, 0, 0};
  for (int d = 0; d < 7; ++d) {
    for (int h = 0; h < 24; ++h) {
      const auto& r = w.records[d * 24 + h];
      EXPECT_EQ(r.wind_speed, speed[d]);
      if (speed[d] > 0) {
        EXPECT_EQ(r.wind_direction, dir[d]);
      }
    }
  }
  EXPECT_EQ(w.records[2 * 24 + 12].wind_speed, 5.0);
  EXPECT_EQ(w.records[2 * 24 + 12].wind_direction, 135.0);
}

TEST(WindStudy, OnlyWindVaries) {
  const auto base = testing::typical_day();
  const auto w = build_wind_study(base.records, base.site);
  for (std::size_t i = 0; i < w.records.size(); ++i) {
    const auto& a = w.records[i];
    const auto& b = base.records[i % 24];
    EXPECT_EQ(a.hour_index, b.hour_index);
    EXPECT_EQ(a.dry_bulb, b.dry_bulb);
    EXPECT_EQ(a.relative_humidity, b.relative_humidity);
    EXPECT_EQ(a.direct_normal, b.direct_normal);
    EXPECT_EQ(a.diffuse_horizontal, b.diffuse_horizontal);
  }
}

TEST(WindStudy, RejectsPartialDay) {
  auto base = testing::typical_day().records;
  base.pop_back();
  EXPECT_THROW(build_wind_study(base), InputError);
}

TEST(TypicalDay, MatchesTheWetSeasonNarrative) {
  const auto w = testing::typical_day();
  double peak = -100.0;
  for (const auto& r : w.records) peak = std::max(peak, r.dry_bulb);
  EXPECT_GE(peak, 30.0);
  EXPECT_LE(peak, 32.0);
  // Night land breeze of 1 m/s.
  EXPECT_EQ(w.records[2].wind_speed, 1.0);
  EXPECT_NE(w.site.label.find("synthesized"), std::string::npos);
}

} // namespace
} // namespace tropitherm
