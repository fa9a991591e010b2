#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pseudodrift/spoof.hpp"

namespace pseudodrift {

struct RoutePoint {
  GpsTime time;
  GeodeticPosition position;
};

/// Time-ordered receiver trajectory.
struct Route {
  std::vector<RoutePoint> points;
};

/// Throws on non-increasing timestamps or consecutive points more than
/// 100 m apart (vehicle-speed sanity at ~1 Hz).
void validate_route(const Route& route);

/// How the spoofed route diverges from the legitimate one.
struct DriftPolicy {
  enum class Kind { linear_offset, waypoint_morph };

  Kind kind = Kind::linear_offset;
  double bearing_deg = 90.0;   // linear_offset: displacement direction
  double rate_mps = 0.5;       // drift speed, >= 0
  double max_offset_m = 200.0; // linear_offset clamp, >= 0
  std::optional<Route> target_route;  // waypoint_morph: same epoch count
};

/// Displaces each legitimate point per the policy. linear_offset moves
/// point k along `bearing` by min(rate*(t_k - t_0), max_offset);
/// waypoint_morph interpolates point k toward target_route[k] by
/// alpha_k = min(rate*(t_k - t_0)/D_k, 1). Timestamps are preserved.
Route generate_spoofed_route(const Route& legit, const DriftPolicy& policy);

struct AttackResult {
  std::vector<SpoofedEpoch> epochs;
  CorrelationReport correlation;
  /// Per-epoch visible sets differed; the common intersection was used.
  bool common_set_violation = false;
  std::vector<std::string> common_satellites;
  /// Legitimate per-epoch solutions (the baseline route).
  std::vector<PositionSolution> legit_solutions;
};

/// Full closed-loop attack over a dataset: solve each legitimate epoch,
/// generate the drifting target route, emulate and verify spoofed
/// pseudoranges per epoch, and correlate legit vs spoofed series. No
/// epoch aborts the run; failures are recorded per epoch. Throws
/// CommonSatelliteSetViolation only when the intersection of visible
/// sets drops below 4 satellites.
AttackResult run_attack(const std::vector<EphemerisRecord>& nav,
                        const std::vector<ObservationEpoch>& obs,
                        const DriftPolicy& policy, const CorrectionOptions& opts,
                        double tolerance_m,
                        const std::optional<IonoCoefficients>& iono = std::nullopt);

/// Forward-models raw pseudoranges along a truth route: geometric range
/// + receiver bias + c*tgd - c*dsv + optional Gaussian noise, exactly
/// inverting the solver's correction so that noiseless synthesis solves
/// back to the truth. Deterministic for a given seed.
std::vector<ObservationEpoch> synth_observations(const Route& truth_route,
                                                 const std::vector<EphemerisRecord>& nav,
                                                 double receiver_bias_m,
                                                 double noise_sigma_m,
                                                 std::uint64_t seed,
                                                 const CorrectionOptions& opts = {});

}  // namespace pseudodrift
