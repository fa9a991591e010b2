#include "pseudodrift/ephemeris.hpp"

#include <cmath>

#include "pseudodrift/rinex.hpp"

namespace pseudodrift {

namespace k = constants;

EcefPosition satellite_position(const EphemerisRecord& eph, const GpsTime& t_emit) {
  const double tk = wrap_half_week(diff_seconds(t_emit, eph.toe_time()));
  if (std::abs(tk) > ephemeris_fit_window_s)
    throw StaleEphemeris(eph.sat_id + ": " + std::to_string(tk) +
                         " s from toe exceeds the fit window");

  const double a = eph.sqrt_a * eph.sqrt_a;
  const double n = std::sqrt(k::mu / (a * a * a)) + eph.delta_n;
  const double m_anom = eph.m0 + n * tk;
  const double e_anom = eccentric_anomaly(m_anom, eph.eccentricity);

  const double sin_e = std::sin(e_anom);
  const double cos_e = std::cos(e_anom);
  const double nu = std::atan2(std::sqrt(1.0 - eph.eccentricity * eph.eccentricity) * sin_e,
                               cos_e - eph.eccentricity);

  const double phi = nu + eph.omega;
  const double sin_2phi = std::sin(2.0 * phi);
  const double cos_2phi = std::cos(2.0 * phi);

  const double arg_lat = phi + eph.cus * sin_2phi + eph.cuc * cos_2phi;
  const double radius =
      a * (1.0 - eph.eccentricity * cos_e) + eph.crs * sin_2phi + eph.crc * cos_2phi;
  const double incl = eph.i0 + eph.cis * sin_2phi + eph.cic * cos_2phi + eph.idot * tk;

  const double x_orb = radius * std::cos(arg_lat);
  const double y_orb = radius * std::sin(arg_lat);

  const double node =
      eph.omega0 + (eph.omega_dot - k::omega_e_dot) * tk - k::omega_e_dot * eph.toe;
  const double sin_node = std::sin(node);
  const double cos_node = std::cos(node);
  const double sin_incl = std::sin(incl);
  const double cos_incl = std::cos(incl);

  return {x_orb * cos_node - y_orb * cos_incl * sin_node,
          x_orb * sin_node + y_orb * cos_incl * cos_node, y_orb * sin_incl};
}

double satellite_clock_correction(const EphemerisRecord& eph, const GpsTime& t,
                                  bool relativistic) {
  const double dt = wrap_half_week(diff_seconds(t, eph.toc));
  double dsv = eph.sv_clock_bias + eph.sv_clock_drift * dt +
               eph.sv_clock_drift_rate * dt * dt;
  if (relativistic && eph.eccentricity > 0.0) {
    const double tk = wrap_half_week(diff_seconds(t, eph.toe_time()));
    const double a = eph.sqrt_a * eph.sqrt_a;
    const double n = std::sqrt(k::mu / (a * a * a)) + eph.delta_n;
    const double e_anom = eccentric_anomaly(eph.m0 + n * tk, eph.eccentricity);
    dsv += k::rel_clock_f * eph.eccentricity * eph.sqrt_a * std::sin(e_anom);
  }
  return dsv;
}

SatelliteState emission_state(const EphemerisRecord& eph, const GpsTime& reception_time,
                              double pseudorange, bool relativistic, bool sagnac) {
  const double transit = pseudorange / k::c;
  const GpsTime coarse = reception_time.advanced(-transit);
  const double dsv = satellite_clock_correction(eph, coarse, relativistic);
  const GpsTime t_emit = coarse.advanced(-dsv);

  SatelliteState state;
  state.sat_id = eph.sat_id;
  state.position = satellite_position(eph, t_emit);
  state.clock_correction = dsv;
  state.tgd = eph.tgd;
  state.emission_time = t_emit;

  if (sagnac) {
    // Express the emission-time position in the reception-epoch ECEF frame.
    const double theta = k::omega_e_dot * (transit + dsv);
    const double sin_t = std::sin(theta);
    const double cos_t = std::cos(theta);
    const double x = cos_t * state.position.x() + sin_t * state.position.y();
    const double y = -sin_t * state.position.x() + cos_t * state.position.y();
    state.position.x() = x;
    state.position.y() = y;
  }
  return state;
}

}  // namespace pseudodrift
