#pragma once

namespace pseudodrift::constants {

/// Speed of light [m/s].
inline constexpr double c = 299792458.0;

/// WGS-84 Earth gravitational constant [m^3/s^2].
inline constexpr double mu = 3.986005e14;

/// WGS-84 Earth rotation rate [rad/s].
inline constexpr double omega_e_dot = 7.2921151467e-5;

/// pi as fixed by the GPS interface convention. All broadcast-ephemeris
/// math uses this literal, not the platform constant, for bit
/// reproducibility.
inline constexpr double pi = 3.1415926535898;

/// Mean spherical Earth radius used by the great-circle distance [km].
inline constexpr double earth_radius_km = 6372.8;

/// Relativistic clock correction constant F = -2*sqrt(mu)/c^2 [s/m^0.5].
inline constexpr double rel_clock_f = -4.442807633e-10;

inline constexpr double seconds_per_week = 604800.0;
inline constexpr double seconds_per_half_week = 302400.0;

}  // namespace pseudodrift::constants
