#pragma once

// Independent oracles for the test suite. Everything here is written
// straight from the published formulas and deliberately shares no code
// with the library implementation it checks.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracles {

inline constexpr double kPi = 3.1415926535898;
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kSphereRadiusM = 6372.8e3;

// Kepler's equation solved by bisection. |E - M| <= e < 1 brackets the
// root in [M - 1, M + 1].
inline double kepler_bisection(double mean_anomaly, double eccentricity) {
  auto f = [&](double e_anom) {
    return e_anom - eccentricity * std::sin(e_anom) - mean_anomaly;
  };
  double lo = mean_anomaly - 1.0;
  double hi = mean_anomaly + 1.0;
  if (f(lo) > 0.0 || f(hi) < 0.0) throw std::runtime_error("bisection bracket failed");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Spherical law of cosines distance [m]; loses precision below ~1 km
// separations but is algebraically independent of the haversine form.
inline double sphere_law_of_cosines(double lat1_deg, double lon1_deg, double lat2_deg,
                                    double lon2_deg) {
  const double p1 = lat1_deg * kPi / 180.0;
  const double p2 = lat2_deg * kPi / 180.0;
  const double dl = (lon2_deg - lon1_deg) * kPi / 180.0;
  double cosc = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
  cosc = std::clamp(cosc, -1.0, 1.0);
  return kSphereRadiusM * std::acos(cosc);
}

// Great-circle distance via the atan2 form of the spherical Vincenty
// formula: stable at all separations, used as the tight (1e-9 relative)
// oracle.
inline double sphere_vincenty(double lat1_deg, double lon1_deg, double lat2_deg,
                              double lon2_deg) {
  const double p1 = lat1_deg * kPi / 180.0;
  const double p2 = lat2_deg * kPi / 180.0;
  const double dl = (lon2_deg - lon1_deg) * kPi / 180.0;
  const double num = std::hypot(std::cos(p2) * std::sin(dl),
                                std::cos(p1) * std::sin(p2) -
                                    std::sin(p1) * std::cos(p2) * std::cos(dl));
  const double den =
      std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
  return kSphereRadiusM * std::atan2(num, den);
}

struct OlsFit {
  double slope;
  double intercept;
  double r_squared;
};

// Textbook covariance-formula OLS of y on x with r^2 = corr(x,y)^2,
// computed about the means (the raw-moment form cancels catastrophically
// at pseudorange magnitudes).
inline OlsFit ols_covariance(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::runtime_error("bad series");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double cov = 0, varx = 0, vary = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    varx += (x[i] - mx) * (x[i] - mx);
    vary += (y[i] - my) * (y[i] - my);
  }
  if (varx <= 0.0) throw std::runtime_error("constant x series");
  OlsFit fit{};
  fit.slope = cov / varx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = vary > 0.0 ? (cov * cov) / (varx * vary) : 1.0;
  return fit;
}

// Klobuchar single-frequency model, transcribed from the published
// algorithm. Angles in radians, returns the slant delay in seconds.
inline double klobuchar_reference_s(const double alpha[4], const double beta[4],
                                    double lat_rad, double lon_rad, double el_rad,
                                    double az_rad, double gps_sow) {
  const double el_sc = el_rad / kPi;  // semicircles
  const double psi = 0.0137 / (el_sc + 0.11) - 0.022;
  double phi_i = lat_rad / kPi + psi * std::cos(az_rad);
  phi_i = std::clamp(phi_i, -0.416, 0.416);
  const double lambda_i = lon_rad / kPi + psi * std::sin(az_rad) / std::cos(phi_i * kPi);
  const double phi_m = phi_i + 0.064 * std::cos((lambda_i - 1.617) * kPi);
  double t = 4.32e4 * lambda_i + gps_sow;
  t = std::fmod(t, 86400.0);
  if (t < 0.0) t += 86400.0;
  double amp = 0.0, per = 0.0;
  for (int n = 0; n < 4; ++n) {
    amp += alpha[n] * std::pow(phi_m, n);
    per += beta[n] * std::pow(phi_m, n);
  }
  amp = std::max(amp, 0.0);
  per = std::max(per, 72000.0);
  const double x = 2.0 * kPi * (t - 50400.0) / per;
  const double slant = 1.0 + 16.0 * std::pow(0.53 - el_sc, 3);
  if (std::abs(x) < 1.57)
    return slant * (5e-9 + amp * (1.0 - x * x / 2.0 + x * x * x * x / 24.0));
  return slant * 5e-9;
}

// Saastamoinen-style zenith delay from a standard atmosphere, mapped by
// 1/sin(el). Returns meters.
inline double tropo_reference_m(double alt_m, double el_rad) {
  const double h = std::clamp(alt_m, -500.0, 11000.0);
  const double pres = 1013.25 * std::pow(1.0 - 2.2557e-5 * h, 5.2568);
  const double temp = 288.15 - 6.5e-3 * h;
  const double rh = 0.7;
  const double e = 6.108 * rh * std::exp((17.15 * temp - 4684.0) / (temp - 38.45));
  const double zenith = 0.002277 * (pres + (1255.0 / temp + 0.05) * e);
  return zenith / std::sin(el_rad);
}

}  // namespace oracles
