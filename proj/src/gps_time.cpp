#include "pseudodrift/gps_time.hpp"

#include <cmath>

namespace pseudodrift {

namespace {

// Days from 1970-01-01 for a proleptic Gregorian date (Hinnant's
// civil-from-days algorithm and inverse).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

// Days from the GPS epoch 1980-01-06.
constexpr std::int64_t kGpsEpochDays = 3657;  // days_from_civil(1980, 1, 6)

}  // namespace

GpsTime GpsTime::advanced(double dt) const {
  GpsTime t{week, sow + dt};
  while (t.sow >= constants::seconds_per_week) {
    t.sow -= constants::seconds_per_week;
    ++t.week;
  }
  while (t.sow < 0.0) {
    t.sow += constants::seconds_per_week;
    --t.week;
  }
  return t;
}

double diff_seconds(const GpsTime& a, const GpsTime& b) {
  return static_cast<double>(a.week - b.week) * constants::seconds_per_week + a.sow -
         b.sow;
}

double wrap_half_week(double dt) {
  while (dt > constants::seconds_per_half_week) dt -= constants::seconds_per_week;
  while (dt <= -constants::seconds_per_half_week) dt += constants::seconds_per_week;
  return dt;
}

GpsTime from_civil(const CivilTime& civil) {
  const std::int64_t days =
      days_from_civil(civil.year, civil.month, civil.day) - kGpsEpochDays;
  const std::int64_t week = (days >= 0 ? days : days - 6) / 7;
  const double sow = static_cast<double>(days - week * 7) * 86400.0 +
                     civil.hour * 3600.0 + civil.minute * 60.0 + civil.second;
  return GpsTime{week, sow};
}

CivilTime to_civil(const GpsTime& t) {
  const double day_f = std::floor(t.sow / 86400.0);
  const std::int64_t days = t.week * 7 + static_cast<std::int64_t>(day_f) + kGpsEpochDays;
  CivilTime civil;
  civil_from_days(days, civil.year, civil.month, civil.day);
  double rem = t.sow - day_f * 86400.0;
  civil.hour = static_cast<int>(rem / 3600.0);
  rem -= civil.hour * 3600.0;
  civil.minute = static_cast<int>(rem / 60.0);
  civil.second = rem - civil.minute * 60.0;
  return civil;
}

}  // namespace pseudodrift
