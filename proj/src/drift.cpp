#include "pseudodrift/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "pseudodrift/errors.hpp"

namespace pseudodrift {

namespace k = constants;

void validate_route(const Route& route) {
  for (std::size_t i = 1; i < route.points.size(); ++i) {
    const auto& prev = route.points[i - 1];
    const auto& curr = route.points[i];
    if (diff_seconds(curr.time, prev.time) <= 0.0)
      throw Error("route timestamps not strictly increasing at point " +
                  std::to_string(i));
    if (haversine(prev.position, curr.position) > 100.0)
      throw Error("route points " + std::to_string(i - 1) + " and " +
                  std::to_string(i) + " are more than 100 m apart");
  }
}

namespace {

// Drift offsets are expressed in the same spherical metric they are
// measured with (haversine, r = 6372.8 km), so the max_offset clamp holds
// exactly. Tangent-plane error is O(d^3 / r^2), sub-mm at these scales.
GeodeticPosition displace_on_sphere(const GeodeticPosition& p, double east_m,
                                    double north_m) {
  const double r = k::earth_radius_km * 1000.0;
  GeodeticPosition out = p;
  out.lat_deg += rad2deg(north_m / r);
  out.lon_deg += rad2deg(east_m / (r * std::cos(deg2rad(p.lat_deg))));
  return out;
}

}  // namespace

Route generate_spoofed_route(const Route& legit, const DriftPolicy& policy) {
  if (legit.points.empty()) throw EmptyRoute("legitimate route has no points");

  Route spoofed;
  spoofed.points.reserve(legit.points.size());
  const GpsTime t0 = legit.points.front().time;

  if (policy.kind == DriftPolicy::Kind::linear_offset) {
    const double bearing = deg2rad(policy.bearing_deg);
    for (const auto& pt : legit.points) {
      const double offset =
          std::min(policy.rate_mps * diff_seconds(pt.time, t0), policy.max_offset_m);
      spoofed.points.push_back(
          {pt.time, displace_on_sphere(pt.position, offset * std::sin(bearing),
                                       offset * std::cos(bearing))});
    }
    return spoofed;
  }

  if (!policy.target_route)
    throw Error("waypoint_morph policy requires a target route");
  if (policy.target_route->points.size() != legit.points.size())
    throw RouteLengthMismatch("target route has " +
                              std::to_string(policy.target_route->points.size()) +
                              " points, legitimate route has " +
                              std::to_string(legit.points.size()));

  for (std::size_t i = 0; i < legit.points.size(); ++i) {
    const auto& pt = legit.points[i];
    const auto& tgt = policy.target_route->points[i].position;
    const double dist = haversine(pt.position, tgt);
    const double alpha =
        dist > 0.0 ? std::min(policy.rate_mps * diff_seconds(pt.time, t0) / dist, 1.0)
                   : 1.0;
    GeodeticPosition pos;
    pos.lat_deg = pt.position.lat_deg + alpha * (tgt.lat_deg - pt.position.lat_deg);
    pos.lon_deg = pt.position.lon_deg + alpha * (tgt.lon_deg - pt.position.lon_deg);
    pos.alt_m = pt.position.alt_m + alpha * (tgt.alt_m - pt.position.alt_m);
    spoofed.points.push_back({pt.time, pos});
  }
  return spoofed;
}

namespace {

// Deterministic Gaussian source: Box-Muller over mt19937_64 so that the
// same seed gives bit-identical draws on every platform.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 =
        (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * k::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Raw pseudorange consistent with the solver's fixed point:
//   pr = |xs| + bias - c*dsv + c*tgd  with emission states computed from
//   the bias-corrected travel distance.
double forward_pseudorange(const EphemerisRecord& eph, const GpsTime& time,
                           const EcefPosition& x_true, double bias_m,
                           const CorrectionOptions& opts,
                           const std::optional<IonoCoefficients>& iono,
                           const GeodeticPosition& truth_geo) {
  double pr = (satellite_position(eph, time) - x_true).norm() + bias_m;
  for (int i = 0; i < 5; ++i) {
    const SatelliteState state =
        emission_state(eph, time, pr - bias_m, opts.relativistic, opts.sagnac);
    pr = (state.position - x_true).norm() + bias_m - k::c * state.clock_correction +
         k::c * state.tgd;
    if (opts.ionosphere || opts.troposphere) {
      const auto [el, az] = elevation_azimuth(x_true, state.position);
      if (el >= atmospheric_elevation_mask_rad) {
        if (opts.ionosphere) pr += klobuchar_delay(*iono, truth_geo, el, az, time);
        if (opts.troposphere) pr += tropo_delay(truth_geo.alt_m, el);
      }
    }
  }
  return pr;
}

std::set<std::string> sat_ids(const ObservationEpoch& epoch) {
  std::set<std::string> ids;
  for (const auto& m : epoch.measurements) ids.insert(m.sat_id);
  return ids;
}

}  // namespace

std::vector<ObservationEpoch> synth_observations(const Route& truth_route,
                                                 const std::vector<EphemerisRecord>& nav,
                                                 double receiver_bias_m,
                                                 double noise_sigma_m, std::uint64_t seed,
                                                 const CorrectionOptions& opts) {
  if (truth_route.points.empty()) throw EmptyRoute("truth route has no points");
  if (opts.ionosphere)
    throw Error("synthetic observations with ionosphere need coefficients via run options");

  std::set<std::string> all_sats;
  for (const auto& rec : nav) all_sats.insert(rec.sat_id);

  GaussianSource gauss(seed);
  std::vector<ObservationEpoch> epochs;
  epochs.reserve(truth_route.points.size());
  for (const auto& pt : truth_route.points) {
    const EcefPosition x_true = geodetic_to_ecef(pt.position);
    ObservationEpoch epoch;
    epoch.time = pt.time;
    for (const auto& sat : all_sats) {
      const EphemerisRecord* eph = nullptr;
      try {
        eph = &select_ephemeris(nav, sat, pt.time);
      } catch (const Error&) {
        continue;  // unhealthy or stale satellites simply are not observed
      }
      double pr = forward_pseudorange(*eph, pt.time, x_true, receiver_bias_m, opts,
                                      std::nullopt, pt.position);
      if (noise_sigma_m > 0.0) pr += noise_sigma_m * gauss.next();
      epoch.measurements.push_back(Measurement{sat, pr, std::nullopt});
    }
    if (epoch.measurements.size() < 4)
      throw InsufficientSatellites(
          "truth epoch at week " + std::to_string(epoch.time.week) + " sow " +
          std::to_string(epoch.time.sow) + " has " +
          std::to_string(epoch.measurements.size()) + " usable satellites");
    epochs.push_back(std::move(epoch));
  }
  return epochs;
}

AttackResult run_attack(const std::vector<EphemerisRecord>& nav,
                        const std::vector<ObservationEpoch>& obs,
                        const DriftPolicy& policy, const CorrectionOptions& opts,
                        double tolerance_m, const std::optional<IonoCoefficients>& iono) {
  AttackResult result;
  if (obs.empty()) return result;

  // Common visible set over epochs that can support a solve at all.
  std::set<std::string> common;
  bool first = true;
  for (const auto& epoch : obs) {
    if (epoch.measurements.size() < 4) {
      result.common_set_violation = true;
      continue;
    }
    const std::set<std::string> ids = sat_ids(epoch);
    if (first) {
      common = ids;
      first = false;
    } else if (ids != common) {
      result.common_set_violation = true;
      std::set<std::string> inter;
      std::set_intersection(common.begin(), common.end(), ids.begin(), ids.end(),
                            std::inserter(inter, inter.begin()));
      common = std::move(inter);
    }
  }
  if (common.size() < 4)
    throw CommonSatelliteSetViolation("common visible set has " +
                                      std::to_string(common.size()) +
                                      " satellites, need 4");
  result.common_satellites.assign(common.begin(), common.end());

  // Solve every legitimate epoch over the common set.
  struct LegitEpoch {
    std::size_t obs_index;
    ObservationEpoch restricted;
    PositionSolution solution;
  };
  std::vector<LegitEpoch> solved;
  std::vector<SpoofedEpoch> placeholders(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    placeholders[i].time = obs[i].time;
    ObservationEpoch restricted;
    restricted.time = obs[i].time;
    for (const auto& m : obs[i].measurements)
      if (common.count(m.sat_id) != 0) restricted.measurements.push_back(m);
    if (restricted.measurements.size() < 4) {
      placeholders[i].failure = "insufficient satellites in the common set";
      placeholders[i].verification_error_m = std::numeric_limits<double>::infinity();
      continue;
    }
    try {
      PositionSolution sol = solve_epoch(nav, restricted, iono, opts);
      solved.push_back({i, std::move(restricted), std::move(sol)});
    } catch (const Error& err) {
      placeholders[i].failure = err.what();
      placeholders[i].verification_error_m = std::numeric_limits<double>::infinity();
    }
  }

  Route legit_route;
  for (const auto& le : solved) {
    legit_route.points.push_back({obs[le.obs_index].time, le.solution.geodetic});
    result.legit_solutions.push_back(le.solution);
  }

  PseudorangeSeries legit_series;
  PseudorangeSeries spoofed_series;
  if (!legit_route.points.empty()) {
    const Route spoofed_route = generate_spoofed_route(legit_route, policy);
    for (std::size_t j = 0; j < solved.size(); ++j) {
      const auto& le = solved[j];
      const GeodeticPosition& target = spoofed_route.points[j].position;
      SpoofedEpoch& se = placeholders[le.obs_index];
      try {
        std::vector<SatelliteState> states;
        states.reserve(le.restricted.measurements.size());
        for (const auto& m : le.restricted.measurements) {
          const EphemerisRecord& eph = select_ephemeris(nav, m.sat_id, le.restricted.time);
          states.push_back(emission_state(eph, le.restricted.time,
                                          m.pseudorange - le.solution.clock_bias_m,
                                          opts.relativistic, opts.sagnac));
        }
        const auto spoofed_prs =
            emulate_pseudoranges(target, states, le.solution.clock_bias_m, opts, iono,
                                 le.restricted.time);
        se = verify_spoof(spoofed_prs, nav, le.restricted.time, target, tolerance_m,
                          opts, iono);
        for (std::size_t s = 0; s < spoofed_prs.size(); ++s) {
          legit_series[le.restricted.measurements[s].sat_id].push_back(
              le.restricted.measurements[s].pseudorange);
          spoofed_series[spoofed_prs[s].first].push_back(spoofed_prs[s].second);
        }
      } catch (const Error& err) {
        se.time = le.restricted.time;
        se.target = target;
        se.failure = err.what();
        se.verified = false;
        se.verification_error_m = std::numeric_limits<double>::infinity();
      }
    }
  }

  result.epochs = std::move(placeholders);
  bool have_series = !legit_series.empty();
  for (const auto& [sat, series] : legit_series)
    if (series.size() < 2) have_series = false;
  if (have_series)
    result.correlation = pseudorange_correlation(legit_series, spoofed_series);
  return result;
}

}  // namespace pseudodrift
