#include "tropitherm/solar.hpp"

#include "tropitherm/constants.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tropitherm {

using constants::deg;
using constants::pi;

int day_of_year(int month, int day) {
  static constexpr std::array<int, 12> cumulative{0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};
  return cumulative[std::clamp(month, 1, 12) - 1] + day;
}

namespace {

double day_angle(int day_of_year) { return 2.0 * pi * (day_of_year - 1) / 365.0; }

double wrap360(double angle) {
  double a = std::fmod(angle, 360.0);
  return a < 0.0 ? a + 360.0 : a;
}

} // namespace

double solar_declination(int doy) {
  const double g = day_angle(doy);
  const double rad = 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) -
                     0.006758 * std::cos(2 * g) + 0.000907 * std::sin(2 * g) -
                     0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);
  return rad / deg;
}

double equation_of_time(int doy) {
  const double g = day_angle(doy);
  return 229.18 * (0.000075 + 0.001868 * std::cos(g) - 0.032077 * std::sin(g) -
                   0.014615 * std::cos(2 * g) - 0.040849 * std::sin(2 * g));
}

SunPosition solar_position_solar_time(int doy, double solar_hour, double latitude) {
  const double decl = solar_declination(doy) * deg;
  const double lat = latitude * deg;
  const double hour_angle = (solar_hour - 12.0) * 15.0 * deg;

  const double sin_alt = std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
  const double alt = std::asin(std::clamp(sin_alt, -1.0, 1.0));

  // Horizontal components of the unit sun vector (East, North).
  const double east = -std::cos(decl) * std::sin(hour_angle);
  const double north = std::cos(lat) * std::sin(decl) - std::sin(lat) * std::cos(decl) * std::cos(hour_angle);
  double az = std::atan2(east, north) / deg;
  return {alt / deg, wrap360(az)};
}

SunPosition solar_position(const LocalTime& t, double latitude, double longitude) {
  // Apparent solar time = civil time + longitude correction + equation of time.
  const double standard_meridian = 15.0 * t.utc_offset_hours;
  const double solar_hour =
      t.hour + (4.0 * (longitude - standard_meridian) + equation_of_time(t.day_of_year)) / 60.0;
  return solar_position_solar_time(t.day_of_year, solar_hour, latitude);
}

double cos_incidence(double surface_azimuth, double tilt, const SunPosition& sun) {
  const double alt = sun.altitude * deg;
  const double beta = tilt * deg;
  return std::sin(alt) * std::cos(beta) +
         std::cos(alt) * std::sin(beta) * std::cos((sun.azimuth - surface_azimuth) * deg);
}

IrradianceComponents incident_components(double surface_azimuth, double tilt, const SunPosition& sun,
                                         double direct_normal, double diffuse_horizontal,
                                         double ground_albedo) {
  IrradianceComponents c;
  const double cos_beta = std::cos(tilt * deg);
  const double sin_alt = std::max(0.0, std::sin(sun.altitude * deg));
  if (sun.altitude > 0.0) {
    c.direct = direct_normal * std::max(0.0, cos_incidence(surface_azimuth, tilt, sun));
  }
  c.diffuse = diffuse_horizontal * (1.0 + cos_beta) / 2.0;
  const double global_horizontal = direct_normal * sin_alt + diffuse_horizontal;
  c.reflected = ground_albedo * global_horizontal * (1.0 - cos_beta) / 2.0;
  return c;
}

double incident_irradiance(double surface_azimuth, double tilt, const SunPosition& sun,
                           double direct_normal, double diffuse_horizontal, double ground_albedo) {
  return incident_components(surface_azimuth, tilt, sun, direct_normal, diffuse_horizontal, ground_albedo)
      .total();
}

double profile_angle(const SunPosition& sun, double element_azimuth) {
  const double cos_rel = std::cos((sun.azimuth - element_azimuth) * deg);
  if (sun.altitude <= 0.0 || cos_rel <= 0.0) return -1.0;
  return std::atan(std::tan(sun.altitude * deg) / cos_rel) / deg;
}

double overhang_shading_fraction(const OverhangGeometry& geom, double profile_deg) {
  if (geom.depth <= 0.0 || profile_deg <= 0.0) return 0.0;
  if (profile_deg >= 90.0) return 1.0;
  const double shadow = geom.depth * std::tan(profile_deg * deg);
  const double band = std::clamp(shadow - geom.gap, 0.0, geom.height);
  return band / geom.height;
}

double overhang_shading_fraction(const OverhangGeometry& geom, const SunPosition& sun,
                                 double element_azimuth) {
  const double profile = profile_angle(sun, element_azimuth);
  if (profile < 0.0) return 0.0;
  return overhang_shading_fraction(geom, profile);
}

} // namespace tropitherm
