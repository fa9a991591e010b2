#include "pseudodrift/spoof.hpp"

#include <algorithm>
#include <cmath>

#include "pseudodrift/errors.hpp"

namespace pseudodrift {

namespace k = constants;

std::vector<std::pair<std::string, double>> emulate_pseudoranges(
    const GeodeticPosition& target, const std::vector<SatelliteState>& sat_states,
    double injected_clock_bias_m, const CorrectionOptions& opts,
    const std::optional<IonoCoefficients>& iono, const std::optional<GpsTime>& time) {
  if (sat_states.size() < 4)
    throw InsufficientSatellites("emulation needs at least 4 satellite states, have " +
                                 std::to_string(sat_states.size()));
  if (opts.ionosphere && (!iono || !time))
    throw Error("ionosphere correction requested but no coefficients/time");

  const EcefPosition x_target = geodetic_to_ecef(target);
  std::vector<std::pair<std::string, double>> out;
  out.reserve(sat_states.size());
  for (const auto& state : sat_states) {
    double pr = (state.position - x_target).norm() + injected_clock_bias_m -
                k::c * state.clock_correction + k::c * state.tgd;
    if (opts.ionosphere || opts.troposphere) {
      // Add the same model delays the solver will subtract.
      const auto [el, az] = elevation_azimuth(x_target, state.position);
      if (el >= atmospheric_elevation_mask_rad) {
        if (opts.ionosphere) pr += klobuchar_delay(*iono, target, el, az, *time);
        if (opts.troposphere) pr += tropo_delay(target.alt_m, el);
      }
    }
    out.emplace_back(state.sat_id, pr);
  }
  return out;
}

SpoofedEpoch verify_spoof(const std::vector<std::pair<std::string, double>>& spoofed,
                          const std::vector<EphemerisRecord>& nav, const GpsTime& time,
                          const GeodeticPosition& target, double tolerance_m,
                          const CorrectionOptions& opts,
                          const std::optional<IonoCoefficients>& iono) {
  if (spoofed.size() < 4)
    throw InsufficientSatellites("verification needs at least 4 pseudoranges");

  ObservationEpoch epoch;
  epoch.time = time;
  for (const auto& [sat, pr] : spoofed)
    epoch.measurements.push_back(Measurement{sat, pr, std::nullopt});

  SpoofedEpoch result;
  result.time = time;
  result.target = target;
  result.spoofed_pseudoranges = spoofed;

  const PositionSolution sol = solve_epoch(nav, epoch, iono, opts);
  result.verified_position = sol.geodetic;
  result.verification_error_m = haversine(target, sol.geodetic);
  // A non-converged solve never verifies (its achieved error is still
  // recorded), except under a vacuous infinite tolerance.
  result.verified = (sol.converged || std::isinf(tolerance_m)) &&
                    result.verification_error_m <= tolerance_m;
  return result;
}

CorrelationReport pseudorange_correlation(const PseudorangeSeries& legit,
                                          const PseudorangeSeries& spoofed) {
  CorrelationReport report;
  for (const auto& [sat, x] : legit) {
    const auto it = spoofed.find(sat);
    if (it == spoofed.end()) {
      report.omitted.push_back(sat);
      continue;
    }
    const auto& y = it->second;
    if (x.size() != y.size())
      throw SatelliteSetMismatch("series for " + sat + " are not aligned (" +
                                 std::to_string(x.size()) + " vs " +
                                 std::to_string(y.size()) + " epochs)");
    if (x.size() < 2) throw DegenerateSeries(sat + " has fewer than 2 epochs");

    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= n;
    my /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
      syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0)
      throw DegenerateSeries("legitimate series for " + sat + " is constant");

    SatelliteCorrelation corr;
    corr.sat_id = sat;
    corr.slope = sxy / sxx;
    corr.intercept_m = my - corr.slope * mx;

    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double fit = corr.slope * x[i] + corr.intercept_m;
      ss_res += (y[i] - fit) * (y[i] - fit);
    }
    corr.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;

    report.per_sat.push_back(corr);
    report.epoch_count = std::max(report.epoch_count, static_cast<int>(x.size()));
  }
  for (const auto& [sat, series] : spoofed)
    if (legit.find(sat) == legit.end()) report.omitted.push_back(sat);
  std::sort(report.omitted.begin(), report.omitted.end());
  return report;
}

std::vector<std::pair<std::string, double>> pseudorange_delta(
    const std::vector<std::pair<std::string, double>>& legit,
    const std::vector<std::pair<std::string, double>>& spoofed) {
  std::map<std::string, double> spoofed_by_sat;
  for (const auto& [sat, pr] : spoofed) spoofed_by_sat.emplace(sat, pr);
  if (legit.size() != spoofed_by_sat.size())
    throw SatelliteSetMismatch("legit and spoofed epochs list different satellites");

  std::vector<std::pair<std::string, double>> deltas;
  deltas.reserve(legit.size());
  for (const auto& [sat, pr] : legit) {
    const auto it = spoofed_by_sat.find(sat);
    if (it == spoofed_by_sat.end())
      throw SatelliteSetMismatch(sat + " present only in the legitimate epoch");
    deltas.emplace_back(sat, pr - it->second);
  }
  return deltas;
}

}  // namespace pseudodrift
