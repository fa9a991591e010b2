#pragma once

#include <compare>
#include <cstdint>

#include "pseudodrift/constants.hpp"

namespace pseudodrift {

/// Calendar date/time on the GPS time scale (no leap seconds).
struct CivilTime {
  int year = 1980;
  int month = 1;
  int day = 6;
  int hour = 0;
  int minute = 0;
  double second = 0.0;
};

/// Instant on the continuous GPS time scale: week number (no 1024-week
/// rollover) plus seconds of week in [0, 604800).
struct GpsTime {
  std::int64_t week = 0;
  double sow = 0.0;

  /// Normalized time `this + dt` seconds.
  [[nodiscard]] GpsTime advanced(double dt) const;

  friend auto operator<=>(const GpsTime&, const GpsTime&) = default;
};

/// Seconds of `a - b`, week-aware (exact, no half-week wrap).
double diff_seconds(const GpsTime& a, const GpsTime& b);

/// Folds a time difference into (-302400, 302400]. Applied to t-toe and
/// t-toc so that ephemeris evaluation stays continuous across week
/// rollovers even when week numbers are not carried through.
double wrap_half_week(double dt);

/// Calendar conversion on the GPS time scale (RINEX nav/obs epochs are
/// already GPS time; no leap-second handling).
GpsTime from_civil(const CivilTime& civil);
CivilTime to_civil(const GpsTime& t);

}  // namespace pseudodrift
