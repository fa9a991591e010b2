#include "pseudodrift/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "pseudodrift/errors.hpp"

namespace pseudodrift {

namespace k = constants;

double correct_pseudorange(double raw, double dsv, double tgd) {
  return raw + k::c * dsv - k::c * tgd;
}

std::pair<EcefPosition, double> estimate_position(
    const std::vector<EcefPosition>& sat_positions,
    const std::vector<double>& corrected_pseudoranges, const EcefPosition& x0,
    double b0) {
  if (sat_positions.size() != corrected_pseudoranges.size())
    throw Error("satellite position and pseudorange counts differ");
  const auto n = static_cast<Eigen::Index>(sat_positions.size());
  if (n < 4)
    throw InsufficientSatellites("need at least 4 satellites, have " +
                                 std::to_string(n));

  Eigen::MatrixXd design(n, 4);
  Eigen::VectorXd residual(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d to_sat = sat_positions[static_cast<std::size_t>(i)] - x0;
    const double range = to_sat.norm();
    if (range < 1.0) throw SingularGeometry("satellite coincides with the estimate");
    design.row(i) << -to_sat.transpose() / range, 1.0;
    residual(i) = corrected_pseudoranges[static_cast<std::size_t>(i)] - range - b0;
  }

  const Eigen::Matrix4d normal = design.transpose() * design;
  const Eigen::JacobiSVD<Eigen::Matrix4d> svd(normal);
  const double smin = svd.singularValues()(3);
  if (smin <= 0.0 || svd.singularValues()(0) / smin > 1e12)
    throw SingularGeometry("satellite geometry is degenerate (condition number > 1e12)");

  const Eigen::Vector4d step = normal.ldlt().solve(design.transpose() * residual);
  return {x0 + step.head<3>(), b0 + step(3)};
}

namespace {

struct UsableSat {
  const EphemerisRecord* eph;
  std::string id;
  double raw;
};

struct ModeledSat {
  std::string id;
  EcefPosition position;
  double corrected;
};

// Per-satellite emission state and fully corrected pseudorange for the
// current solution estimate. The bias-corrected travel distance raw - b
// feeds the emission-time computation, so the states track the refined
// geometry across outer iterations.
std::vector<ModeledSat> model_epoch(const std::vector<UsableSat>& sats,
                                    const GpsTime& time, const EcefPosition& x,
                                    double b, const std::optional<IonoCoefficients>& iono,
                                    const CorrectionOptions& opts) {
  const bool atmospheric = opts.ionosphere || opts.troposphere;
  const bool near_earth = x.norm() > 6.0e6 && x.norm() < 7.0e6;

  std::optional<GeodeticPosition> user;
  if (atmospheric && near_earth) user = ecef_to_geodetic(x);

  std::vector<ModeledSat> out;
  out.reserve(sats.size());
  for (const auto& sat : sats) {
    const SatelliteState state =
        emission_state(*sat.eph, time, sat.raw - b, opts.relativistic, opts.sagnac);
    double cpr = correct_pseudorange(sat.raw, state.clock_correction, state.tgd);
    if (user) {
      const auto [el, az] = elevation_azimuth(x, state.position);
      if (el < atmospheric_elevation_mask_rad) continue;
      if (opts.ionosphere) cpr -= klobuchar_delay(*iono, *user, el, az, time);
      if (opts.troposphere) cpr -= tropo_delay(user->alt_m, el);
    }
    out.push_back({sat.id, state.position, cpr});
  }
  return out;
}

}  // namespace

PositionSolution solve_epoch(const std::vector<EphemerisRecord>& nav,
                             const ObservationEpoch& epoch,
                             const std::optional<IonoCoefficients>& iono,
                             const CorrectionOptions& opts) {
  if (opts.ionosphere && !iono)
    throw Error("ionosphere correction requested but no coefficients");

  PositionSolution sol;
  std::vector<UsableSat> sats;
  for (const auto& m : epoch.measurements) {
    try {
      const EphemerisRecord& eph = select_ephemeris(nav, m.sat_id, epoch.time);
      sats.push_back({&eph, m.sat_id, m.pseudorange});
    } catch (const Error& err) {
      sol.dropped.emplace_back(m.sat_id, err.what());
    }
  }
  if (sats.size() < 4)
    throw InsufficientSatellites("epoch has " + std::to_string(sats.size()) +
                                 " usable satellites");

  // Canonical satellite order: the solution is bit-identical under any
  // permutation of the measurement list.
  std::sort(sats.begin(), sats.end(),
            [](const UsableSat& a, const UsableSat& b) { return a.id < b.id; });

  EcefPosition x = EcefPosition::Zero();
  double b = 0.0;
  bool settling = false;
  for (int iter = 1; iter <= max_solver_iterations; ++iter) {
    const std::vector<ModeledSat> modeled = model_epoch(sats, epoch.time, x, b, iono, opts);
    if (modeled.size() < 4)
      throw InsufficientSatellites("elevation mask leaves " +
                                   std::to_string(modeled.size()) + " satellites");

    std::vector<EcefPosition> positions;
    std::vector<double> pseudoranges;
    positions.reserve(modeled.size());
    pseudoranges.reserve(modeled.size());
    for (const auto& m : modeled) {
      positions.push_back(m.position);
      pseudoranges.push_back(m.corrected);
    }

    const auto [x_next, b_next] = estimate_position(positions, pseudoranges, x, b);
    const double dx = (x_next - x).norm();
    const double db = std::abs(b_next - b);
    x = x_next;
    b = b_next;
    sol.iterations = iter;
    if (dx <= position_step_threshold_m && db <= clock_step_threshold_m) {
      // One settling pass after the thresholds are met pins the solution
      // to the least-squares fixed point.
      if (settling) {
        sol.converged = true;
        break;
      }
      settling = true;
    }
  }

  sol.ecef = x;
  sol.geodetic = ecef_to_geodetic(x);
  sol.clock_bias_m = b;
  for (const auto& m : model_epoch(sats, epoch.time, x, b, iono, opts))
    sol.residuals.emplace_back(m.id, m.corrected - (m.position - x).norm() - b);
  return sol;
}

double klobuchar_delay(const IonoCoefficients& iono, const GeodeticPosition& user,
                       double sat_elevation_rad, double sat_azimuth_rad,
                       const GpsTime& t) {
  // Broadcast model works in semicircles.
  const double el = std::clamp(sat_elevation_rad / k::pi, 0.0, 0.5);
  const double psi = 0.0137 / (el + 0.11) - 0.022;

  double phi_i = deg2rad(user.lat_deg) / k::pi + psi * std::cos(sat_azimuth_rad);
  phi_i = std::clamp(phi_i, -0.416, 0.416);
  const double lambda_i =
      deg2rad(user.lon_deg) / k::pi + psi * std::sin(sat_azimuth_rad) / std::cos(phi_i * k::pi);
  const double phi_m = phi_i + 0.064 * std::cos((lambda_i - 1.617) * k::pi);

  double local_t = 4.32e4 * lambda_i + std::fmod(t.sow, 86400.0);
  local_t = std::fmod(local_t, 86400.0);
  if (local_t < 0.0) local_t += 86400.0;

  double amplitude = ((iono.alpha[3] * phi_m + iono.alpha[2]) * phi_m + iono.alpha[1]) * phi_m +
                     iono.alpha[0];
  double period = ((iono.beta[3] * phi_m + iono.beta[2]) * phi_m + iono.beta[1]) * phi_m +
                  iono.beta[0];
  amplitude = std::max(amplitude, 0.0);
  period = std::max(period, 72000.0);

  const double obliquity = 1.0 + 16.0 * std::pow(0.53 - el, 3);
  const double x = 2.0 * k::pi * (local_t - 50400.0) / period;
  const double delay_s = std::abs(x) < 1.57
                             ? obliquity * (5e-9 + amplitude * (1.0 - x * x / 2.0 +
                                                                x * x * x * x / 24.0))
                             : obliquity * 5e-9;
  return k::c * delay_s;
}

double tropo_delay(double user_alt_m, double sat_elevation_rad) {
  if (sat_elevation_rad <= deg2rad(1.0))
    throw BelowElevationMask("troposphere model needs elevation above 1 degree");

  // Standard atmosphere at the receiver height, Saastamoinen zenith
  // delay, 1/sin(el) mapping.
  const double h = std::clamp(user_alt_m, -500.0, 11000.0);
  const double pressure = 1013.25 * std::pow(1.0 - 2.2557e-5 * h, 5.2568);
  const double temperature = 288.15 - 6.5e-3 * h;
  const double humidity = 0.7;
  const double vapor =
      6.108 * humidity * std::exp((17.15 * temperature - 4684.0) / (temperature - 38.45));
  const double zenith = 0.002277 * (pressure + (1255.0 / temperature + 0.05) * vapor);
  return zenith / std::sin(sat_elevation_rad);
}

}  // namespace pseudodrift
