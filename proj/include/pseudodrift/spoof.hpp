#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudodrift/solver.hpp"

namespace pseudodrift {

/// Per-satellite spoofed pseudoranges for one epoch plus the closed-loop
/// verification result (solve the spoofed epoch, compare to the target).
struct SpoofedEpoch {
  GpsTime time;
  GeodeticPosition target;
  std::vector<std::pair<std::string, double>> spoofed_pseudoranges;
  GeodeticPosition verified_position;
  double verification_error_m = 0.0;  // haversine(target, verified)
  bool verified = false;
  /// Set when the epoch could not be emulated or solved at all.
  std::optional<std::string> failure;
};

/// Per-satellite least-squares fit of spoofed pseudoranges on legitimate
/// ones.
struct SatelliteCorrelation {
  std::string sat_id;
  double slope = 0.0;
  double intercept_m = 0.0;
  double r_squared = 0.0;
};

struct CorrelationReport {
  std::vector<SatelliteCorrelation> per_sat;
  int epoch_count = 0;
  /// Satellites present in only one of the two series.
  std::vector<std::string> omitted;
};

/// Default closed-loop verification tolerance [m].
inline constexpr double default_verification_tolerance_m = 0.5;

/// Computes, for each satellite state, the raw pseudorange whose
/// standard correction and least-squares solve yields exactly `target`:
/// p = |xs - x_target| + injected_clock_bias - c*dsv + c*tgd, plus the
/// same atmospheric model delays the solver will subtract when the
/// corresponding opts flags are on. `iono` and `time` are required when
/// opts.ionosphere is set.
std::vector<std::pair<std::string, double>> emulate_pseudoranges(
    const GeodeticPosition& target, const std::vector<SatelliteState>& sat_states,
    double injected_clock_bias_m, const CorrectionOptions& opts,
    const std::optional<IonoCoefficients>& iono = std::nullopt,
    const std::optional<GpsTime>& time = std::nullopt);

/// Builds a synthetic observation epoch from spoofed pseudoranges, solves
/// it with identical options and reports the haversine error against the
/// desired target. A non-converged solve yields verified = false with
/// the achieved error recorded.
SpoofedEpoch verify_spoof(const std::vector<std::pair<std::string, double>>& spoofed,
                          const std::vector<EphemerisRecord>& nav, const GpsTime& time,
                          const GeodeticPosition& target, double tolerance_m,
                          const CorrectionOptions& opts,
                          const std::optional<IonoCoefficients>& iono = std::nullopt);

/// Per-satellite pseudorange time series, aligned epoch by epoch.
using PseudorangeSeries = std::map<std::string, std::vector<double>>;

/// Ordinary least squares of spoofed on legitimate, per satellite, with
/// r^2 = 1 - SSres/SStot. Satellites present in only one series are
/// omitted and listed. Throws DegenerateSeries when a legitimate series
/// is constant.
CorrelationReport pseudorange_correlation(const PseudorangeSeries& legit,
                                          const PseudorangeSeries& spoofed);

/// Per-satellite legit - spoofed for one epoch. Throws
/// SatelliteSetMismatch when the satellite sets differ.
std::vector<std::pair<std::string, double>> pseudorange_delta(
    const std::vector<std::pair<std::string, double>>& legit,
    const std::vector<std::pair<std::string, double>>& spoofed);

}  // namespace pseudodrift
