#pragma once

#include <cmath>

#include "pseudodrift/errors.hpp"
#include "pseudodrift/geodesy.hpp"
#include "pseudodrift/gps_time.hpp"
#include "pseudodrift/rinex.hpp"

namespace pseudodrift {

/// A satellite's ECEF position at signal emission (expressed in the
/// reception-epoch frame when Sagnac compensation is on) plus its clock
/// and group-delay terms.
struct SatelliteState {
  std::string sat_id;
  EcefPosition position = EcefPosition::Zero();
  double clock_correction = 0.0;  // [s], includes relativistic term
  double tgd = 0.0;               // [s]
  GpsTime emission_time;
};

/// Solves Kepler's equation E - e*sin(E) = M by Newton iteration from
/// E0 = M, to |E - e*sin(E) - M| < 1e-12 rad. Throws NonConvergence
/// after 30 iterations (unreachable for GPS eccentricities).
template <typename Scalar>
Scalar eccentric_anomaly(Scalar mean_anomaly, Scalar eccentricity) {
  constexpr Scalar tol = Scalar(1e-12);
  Scalar e_anom = mean_anomaly;
  for (int i = 0; i < 30; ++i) {
    const Scalar f = e_anom - eccentricity * std::sin(e_anom) - mean_anomaly;
    if (std::abs(f) < tol) return e_anom;
    e_anom -= f / (Scalar(1) - eccentricity * std::cos(e_anom));
  }
  if (std::abs(e_anom - eccentricity * std::sin(e_anom) - mean_anomaly) < tol)
    return e_anom;
  throw NonConvergence("Kepler iteration did not converge in 30 steps");
}

/// Broadcast-ephemeris satellite position in ECEF at `t_emit`, via the
/// standard chain: corrected mean motion, Kepler's equation, harmonic
/// corrections, node rotation. Throws StaleEphemeris when the wrapped
/// |t_emit - toe| exceeds the 7200 s fit window.
EcefPosition satellite_position(const EphemerisRecord& eph, const GpsTime& t_emit);

/// Satellite clock offset dsv = a0 + a1*dt + a2*dt^2 (+ relativistic
/// term F*e*sqrt(A)*sin(E) when enabled) [s]. TGD is not subtracted
/// here; the solver applies it separately.
double satellite_clock_correction(const EphemerisRecord& eph, const GpsTime& t,
                                  bool relativistic = true);

/// Satellite state at emission for a signal received at `reception_time`
/// with the given apparent travel distance [m]: t_emit = t_r - pr/c - dsv
/// (one refinement pass), position rotated about z by omega_e * transit
/// when `sagnac` is on so it is expressed in the reception-epoch frame.
SatelliteState emission_state(const EphemerisRecord& eph, const GpsTime& reception_time,
                              double pseudorange, bool relativistic = true,
                              bool sagnac = true);

}  // namespace pseudodrift
