#pragma once

#include <Eigen/Dense>
#include <utility>

#include "pseudodrift/constants.hpp"

namespace pseudodrift {

/// Earth-centered Earth-fixed Cartesian position [m].
using EcefPosition = Eigen::Vector3d;

/// Geodetic position on the WGS-84 ellipsoid. Angles in degrees at this
/// boundary; all internal math is in radians.
struct GeodeticPosition {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
};

/// WGS-84 ellipsoid parameters.
struct EllipsoidModel {
  double a = 6378137.0;
  double f = 1.0 / 298.257223563;

  [[nodiscard]] double b() const { return a * (1.0 - f); }
  [[nodiscard]] double e2() const { return f * (2.0 - f); }
};

inline constexpr double deg2rad(double deg) { return deg * constants::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / constants::pi; }

/// Great-circle distance [m] on the mean sphere (r = 6372.8 km).
/// Altitude is ignored. This spherical radius is used only here; every
/// other transform in the module is WGS-84 ellipsoidal.
double haversine(const GeodeticPosition& p1, const GeodeticPosition& p2);

/// Exact closed-form geodetic -> ECEF transform.
EcefPosition geodetic_to_ecef(const GeodeticPosition& p,
                              const EllipsoidModel& ellipsoid = {});

/// Iterative ECEF -> geodetic transform (Bowring-style latitude
/// refinement to |dlat| < 1e-12 rad). Longitude at the poles is 0 by
/// convention. Throws DegenerateInput for points within 1 m of the
/// geocenter.
GeodeticPosition ecef_to_geodetic(const EcefPosition& p,
                                  const EllipsoidModel& ellipsoid = {});

/// Elevation and azimuth [rad] of `target` as seen from `origin`.
/// Azimuth is clockwise from north in the local east-north-up frame.
std::pair<double, double> elevation_azimuth(const EcefPosition& origin,
                                            const EcefPosition& target);

/// Displaces `p` by the given local east/north offsets [m] on the
/// ellipsoid tangent plane. Valid for offsets up to a few km.
GeodeticPosition offset_east_north(const GeodeticPosition& p, double east_m,
                                   double north_m,
                                   const EllipsoidModel& ellipsoid = {});

}  // namespace pseudodrift
