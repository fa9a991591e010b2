#include "pseudodrift/geodesy.hpp"

#include <algorithm>
#include <cmath>

#include "pseudodrift/errors.hpp"

namespace pseudodrift {

double haversine(const GeodeticPosition& p1, const GeodeticPosition& p2) {
  const double phi1 = deg2rad(p1.lat_deg);
  const double phi2 = deg2rad(p2.lat_deg);
  const double dphi = deg2rad(p2.lat_deg - p1.lat_deg);
  const double dpsi = deg2rad(p2.lon_deg - p1.lon_deg);

  const double sp = std::sin(dphi / 2.0);
  const double sl = std::sin(dpsi / 2.0);
  const double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
  const double root = std::sqrt(std::clamp(h, 0.0, 1.0));
  return 2.0 * constants::earth_radius_km * 1000.0 * std::asin(root);
}

EcefPosition geodetic_to_ecef(const GeodeticPosition& p, const EllipsoidModel& ell) {
  const double lat = deg2rad(p.lat_deg);
  const double lon = deg2rad(p.lon_deg);
  const double sin_lat = std::sin(lat);
  const double cos_lat = std::cos(lat);
  const double n = ell.a / std::sqrt(1.0 - ell.e2() * sin_lat * sin_lat);
  return {(n + p.alt_m) * cos_lat * std::cos(lon),
          (n + p.alt_m) * cos_lat * std::sin(lon),
          (n * (1.0 - ell.e2()) + p.alt_m) * sin_lat};
}

GeodeticPosition ecef_to_geodetic(const EcefPosition& p, const EllipsoidModel& ell) {
  if (p.norm() <= 1.0)
    throw DegenerateInput("point within 1 m of the geocenter has no geodetic image");

  const double rho = std::hypot(p.x(), p.y());
  const double e2 = ell.e2();

  // Exactly on the polar axis: latitude is +-90, longitude 0 by convention.
  if (rho == 0.0) {
    const double lat = p.z() >= 0.0 ? 90.0 : -90.0;
    return {lat, 0.0, std::abs(p.z()) - ell.b()};
  }

  double lat = std::atan2(p.z(), rho * (1.0 - e2));
  for (int i = 0; i < 50; ++i) {
    const double sin_lat = std::sin(lat);
    const double n = ell.a / std::sqrt(1.0 - e2 * sin_lat * sin_lat);
    const double alt = rho / std::cos(lat) - n;
    const double next = std::atan2(p.z(), rho * (1.0 - e2 * n / (n + alt)));
    const double step = std::abs(next - lat);
    lat = next;
    if (step < 1e-12) break;
  }

  const double sin_lat = std::sin(lat);
  const double n = ell.a / std::sqrt(1.0 - e2 * sin_lat * sin_lat);
  const double alt = std::abs(sin_lat) > 0.70710678
                         ? p.z() / sin_lat - n * (1.0 - e2)
                         : rho / std::cos(lat) - n;

  return {rad2deg(lat), rad2deg(std::atan2(p.y(), p.x())), alt};
}

std::pair<double, double> elevation_azimuth(const EcefPosition& origin,
                                            const EcefPosition& target) {
  const GeodeticPosition geo = ecef_to_geodetic(origin);
  const double lat = deg2rad(geo.lat_deg);
  const double lon = deg2rad(geo.lon_deg);

  const Eigen::Vector3d east(-std::sin(lon), std::cos(lon), 0.0);
  const Eigen::Vector3d north(-std::sin(lat) * std::cos(lon),
                              -std::sin(lat) * std::sin(lon), std::cos(lat));
  const Eigen::Vector3d up(std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon),
                           std::sin(lat));

  const Eigen::Vector3d los = (target - origin).normalized();
  const double el = std::asin(std::clamp(los.dot(up), -1.0, 1.0));
  const double az = std::atan2(los.dot(east), los.dot(north));
  return {el, az};
}

GeodeticPosition offset_east_north(const GeodeticPosition& p, double east_m,
                                   double north_m, const EllipsoidModel& ell) {
  const double lat = deg2rad(p.lat_deg);
  const double sin_lat = std::sin(lat);
  const double w2 = 1.0 - ell.e2() * sin_lat * sin_lat;
  const double merid = ell.a * (1.0 - ell.e2()) / (w2 * std::sqrt(w2));
  const double prime = ell.a / std::sqrt(w2);

  GeodeticPosition out = p;
  out.lat_deg += rad2deg(north_m / (merid + p.alt_m));
  out.lon_deg += rad2deg(east_m / ((prime + p.alt_m) * std::cos(lat)));
  return out;
}

}  // namespace pseudodrift
