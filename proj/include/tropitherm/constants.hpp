#pragma once

namespace tropitherm::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double deg = pi / 180.0;

inline constexpr double gravity = 9.81;             // m/s2
inline constexpr double atmospheric_pressure = 101325.0; // Pa
inline constexpr double gas_constant_air = 287.055;  // J/(kg.K)
inline constexpr double kelvin = 273.15;

// Reference air properties used for capacitances and advection.
inline constexpr double air_density_ref = 1.2;      // kg/m3
inline constexpr double air_specific_heat = 1006.0; // J/(kg.K)

/// Dry-air density from the ideal gas law at atmospheric pressure.
inline double air_density(double temperature_c) {
  return atmospheric_pressure / (gas_constant_air * (temperature_c + kelvin));
}

} // namespace tropitherm::constants
