#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pseudodrift/gps_time.hpp"

namespace pseudodrift {

/// One GPS satellite's broadcast clock/ephemeris/integrity data set, one
/// field per RINEX 3.x navigation record entry.
struct EphemerisRecord {
  std::string sat_id;  // "G01".."G32"
  GpsTime toc;         // clock reference epoch

  double sv_clock_bias = 0.0;        // a0 [s]
  double sv_clock_drift = 0.0;       // a1 [s/s]
  double sv_clock_drift_rate = 0.0;  // a2 [s/s^2]

  double iode = 0.0;
  double crs = 0.0;      // [m]
  double delta_n = 0.0;  // [rad/s]
  double m0 = 0.0;       // [rad]

  double cuc = 0.0;  // [rad]
  double eccentricity = 0.0;
  double cus = 0.0;     // [rad]
  double sqrt_a = 0.0;  // [m^1/2]

  double toe = 0.0;  // seconds of week [s]
  double cic = 0.0;  // [rad]
  double omega0 = 0.0;  // [rad]
  double cis = 0.0;  // [rad]

  double i0 = 0.0;   // [rad]
  double crc = 0.0;  // [m]
  double omega = 0.0;      // [rad]
  double omega_dot = 0.0;  // [rad/s]

  double idot = 0.0;  // [rad/s]
  double codes_l2 = 0.0;
  double gps_week = 0.0;  // week of toe, continuous
  double l2p_flag = 0.0;

  double sv_acc = 0.0;  // [m]
  double health = 0.0;
  double tgd = 0.0;  // [s]
  double iodc = 0.0;

  double transmission_time = 0.0;  // [s]

  /// Absolute time of ephemeris (gps_week + toe).
  [[nodiscard]] GpsTime toe_time() const {
    return GpsTime{static_cast<std::int64_t>(gps_week), toe};
  }
};

/// Klobuchar broadcast ionosphere coefficients from the navigation header.
struct IonoCoefficients {
  std::array<double, 4> alpha{};  // [s, s/sc, s/sc^2, s/sc^3]
  std::array<double, 4> beta{};   // [s, s/sc, s/sc^2, s/sc^3]
};

/// One satellite's measurements at one epoch.
struct Measurement {
  std::string sat_id;
  double pseudorange = 0.0;  // C1C [m]
  std::optional<double> carrier_phase;  // L1C [cycles]
};

/// All GPS measurements of one observation epoch, time-tagged.
struct ObservationEpoch {
  GpsTime time;
  std::vector<Measurement> measurements;
};

struct NavigationData {
  std::vector<EphemerisRecord> records;
  std::optional<IonoCoefficients> iono;
};

/// Parses a RINEX 3.x (3.00-3.05) GPS navigation file. Non-GPS blocks are
/// skipped silently. Iono coefficients are returned when GPSA/GPSB header
/// lines are present.
NavigationData parse_navigation(std::istream& source);

/// Parses a RINEX 3.x observation file. Pseudorange is the C1C
/// observable; satellites with a missing or blank C1C are omitted from
/// that epoch. Event records (epoch flag > 1) are skipped.
std::vector<ObservationEpoch> parse_observation(std::istream& source);

/// Selects the record for `sat` with minimal |t - toe|. Ties are broken
/// by larger transmission_time. Throws NoEphemeris, StaleEphemeris
/// (> 7200 s from toe) or UnhealthySatellite (health != 0).
const EphemerisRecord& select_ephemeris(const std::vector<EphemerisRecord>& records,
                                        const std::string& sat, const GpsTime& t);

/// Fit window for select_ephemeris and ephemeris evaluation [s].
inline constexpr double ephemeris_fit_window_s = 7200.0;

/// Emits a RINEX 3.04 navigation file. Re-parsing the output yields the
/// input records field for field.
void write_navigation(std::ostream& out, const NavigationData& nav);

/// Emits a RINEX 3.04 observation file with C1C as the only observable.
void write_observation(std::ostream& out, const std::vector<ObservationEpoch>& epochs,
                       const std::string& marker_name = "SYNTH");

}  // namespace pseudodrift
