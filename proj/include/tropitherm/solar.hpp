#pragma once

#include "tropitherm/model.hpp"

namespace tropitherm {

struct SunPosition {
  double altitude = 0.0; // deg above horizon, negative at night
  double azimuth = 0.0;  // deg clockwise from North
};

/// Local civil time at the site.
struct LocalTime {
  int day_of_year = 1;          // 1..366
  double hour = 12.0;           // 0..24, fractional
  double utc_offset_hours = 0.0;
};

int day_of_year(int month, int day); // non-leap year

/// Solar declination (deg), Spencer series.
double solar_declination(int day_of_year);
/// Equation of time (minutes), Spencer series.
double equation_of_time(int day_of_year);

/// Position from apparent solar time (12.0 = solar noon).
SunPosition solar_position_solar_time(int day_of_year, double solar_hour, double latitude);

/// Position from local civil time; longitude positive East.
SunPosition solar_position(const LocalTime& instant, double latitude, double longitude);

struct IrradianceComponents {
  double direct = 0.0;
  double diffuse = 0.0;
  double reflected = 0.0;
  double total() const { return direct + diffuse + reflected; }
};

/// Cosine of the beam incidence angle on a surface (may be negative).
double cos_incidence(double surface_azimuth, double tilt, const SunPosition& sun);

/// Beam on a tilted plane plus isotropic-sky diffuse and ground reflection.
IrradianceComponents incident_components(double surface_azimuth, double tilt, const SunPosition& sun,
                                         double direct_normal, double diffuse_horizontal,
                                         double ground_albedo);

double incident_irradiance(double surface_azimuth, double tilt, const SunPosition& sun,
                           double direct_normal, double diffuse_horizontal, double ground_albedo);

/// Vertical profile angle (deg) of the sun seen in the plane normal to a
/// facade. Returns a negative value when the beam does not reach the facade.
double profile_angle(const SunPosition& sun, double element_azimuth);

/// Shaded fraction of a vertical element below a horizontal overhang for a
/// given profile angle.
double overhang_shading_fraction(const OverhangGeometry& geom, double profile_angle_deg);

/// Fraction of the element's height shaded from the beam. Zero when the beam
/// does not reach the facade (nothing left to shade).
double overhang_shading_fraction(const OverhangGeometry& geom, const SunPosition& sun,
                                 double element_azimuth);

} // namespace tropitherm
