#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudodrift/ephemeris.hpp"
#include "pseudodrift/geodesy.hpp"
#include "pseudodrift/rinex.hpp"

namespace pseudodrift {

/// Correction toggles shared by the solver and the spoof emulator.
/// Atmospheric models default off so that emulation round trips stay
/// exactly invertible.
struct CorrectionOptions {
  bool relativistic = true;
  bool sagnac = true;
  bool ionosphere = false;  // requires IonoCoefficients where used
  bool troposphere = false;
};

/// Receiver position fix with convergence diagnostics.
struct PositionSolution {
  EcefPosition ecef = EcefPosition::Zero();
  GeodeticPosition geodetic;
  double clock_bias_m = 0.0;  // c * receiver clock offset
  int iterations = 0;
  std::vector<std::pair<std::string, double>> residuals;  // post-fit [m]
  bool converged = false;
  /// Satellites excluded from the solve, with the reason.
  std::vector<std::pair<std::string, std::string>> dropped;
};

/// Convergence thresholds: iterate until |dx| <= 0.1 m and |db| <= 1 m.
inline constexpr double position_step_threshold_m = 0.1;
inline constexpr double clock_step_threshold_m = 1.0;
inline constexpr int max_solver_iterations = 20;

/// Elevation mask applied when atmospheric corrections are on [rad].
inline constexpr double atmospheric_elevation_mask_rad = deg2rad(5.0);

/// raw + c*dsv - c*tgd [m].
double correct_pseudorange(double raw, double dsv, double tgd);

/// One unweighted Gauss-Newton step of the pseudorange least-squares
/// problem: solves the normal equations for (dx, db) and returns
/// (x0 + dx, b0 + db). Throws InsufficientSatellites (< 4) or
/// SingularGeometry (normal-matrix condition number > 1e12).
std::pair<EcefPosition, double> estimate_position(
    const std::vector<EcefPosition>& sat_positions,
    const std::vector<double>& corrected_pseudoranges, const EcefPosition& x0,
    double b0);

/// Full single-epoch solve: per-satellite ephemeris selection, emission
/// states, clock/group-delay correction, optional atmospheric delays,
/// iterated least squares from x = (0,0,0), b = 0. Satellites whose
/// ephemeris selection fails are dropped and recorded; the solve is a
/// hard error only when fewer than 4 remain. Non-convergence after 20
/// iterations is reported through the `converged` flag, not an error.
PositionSolution solve_epoch(const std::vector<EphemerisRecord>& nav,
                             const ObservationEpoch& epoch,
                             const std::optional<IonoCoefficients>& iono,
                             const CorrectionOptions& opts);

/// Klobuchar single-frequency ionospheric delay [m]. Nighttime floor is
/// c * 5e-9 (times the obliquity factor).
double klobuchar_delay(const IonoCoefficients& iono, const GeodeticPosition& user,
                       double sat_elevation_rad, double sat_azimuth_rad,
                       const GpsTime& t);

/// Saastamoinen zenith delay from a standard atmosphere at `user_alt_m`,
/// mapped by 1/sin(elevation) [m]. Throws BelowElevationMask for
/// elevations at or below 1 degree.
double tropo_delay(double user_alt_m, double sat_elevation_rad);

}  // namespace pseudodrift
