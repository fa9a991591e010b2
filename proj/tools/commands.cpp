#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <vector>

#include "io_util.hpp"
#include "pseudodrift/drift.hpp"
#include "pseudodrift/errors.hpp"
#include "pseudodrift/solver.hpp"
#include "pseudodrift/spoof.hpp"

namespace pseudodrift::cli {

namespace {

CorrectionOptions to_options(const CorrectionFlags& flags) {
  CorrectionOptions opts;
  opts.relativistic = flags.relativistic;
  opts.sagnac = flags.sagnac;
  opts.ionosphere = flags.ionosphere;
  opts.troposphere = flags.troposphere;
  return opts;
}

NavigationData load_navigation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return parse_navigation(in);
  } catch (const Error& err) {
    throw Error(path.string() + ": " + err.what());
  }
}

std::vector<ObservationEpoch> load_observation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return parse_observation(in);
  } catch (const Error& err) {
    throw Error(path.string() + ": " + err.what());
  }
}

// Timestamp key with millisecond resolution for CSV matching.
std::pair<std::int64_t, std::int64_t> time_key(std::int64_t week, double sow) {
  return {week, static_cast<std::int64_t>(std::llround(sow * 1000.0))};
}

std::string format_row(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

}  // namespace

int cmd_solve(const SolveConfig& config) {
  NavigationData nav;
  std::vector<ObservationEpoch> epochs;
  try {
    nav = load_navigation(config.nav_path);
    epochs = load_observation(config.obs_path);
    if (config.corrections.ionosphere && !nav.iono)
      throw Error("ionosphere correction requested but no coefficients");
  } catch (const Error& err) {
    log(LogLevel::error, err.what());
    return exit_input_error;
  }

  const CorrectionOptions opts = to_options(config.corrections);
  std::filesystem::create_directories(config.out_dir);

  std::ofstream csv(config.out_dir / "solutions.csv");
  csv << "week,sow,lat,lon,alt,clock_bias_m,iterations,converged,nsat\n";
  std::vector<GeodeticPosition> path_points;
  int converged_count = 0;
  for (const auto& epoch : epochs) {
    try {
      const PositionSolution sol = solve_epoch(nav.records, epoch, nav.iono, opts);
      csv << format_row("%lld,%.3f,%.9f,%.9f,%.4f,%.4f,%d,%d,%zu\n",
                        static_cast<long long>(epoch.time.week), epoch.time.sow,
                        sol.geodetic.lat_deg, sol.geodetic.lon_deg, sol.geodetic.alt_m,
                        sol.clock_bias_m, sol.iterations, sol.converged ? 1 : 0,
                        sol.residuals.size());
      path_points.push_back(sol.geodetic);
      if (sol.converged) ++converged_count;
    } catch (const Error& err) {
      log(LogLevel::warn, "epoch at sow " + std::to_string(epoch.time.sow) +
                              " skipped: " + err.what());
    }
  }
  csv.close();
  write_geojson(config.out_dir / "path.geojson", {{"solutions", path_points}});

  if (converged_count == 0) {
    log(LogLevel::error, "no solvable epochs");
    return exit_no_result;
  }
  log(LogLevel::info, std::to_string(converged_count) + " epochs converged");
  return exit_ok;
}

int cmd_error_stats(const ErrorStatsConfig& config) {
  std::vector<double> errors;
  std::vector<std::pair<GpsTime, double>> rows;
  try {
    const CsvTable solutions = read_csv(config.solutions_csv);
    const CsvTable truth = read_csv(config.truth_csv);

    const auto s_week = solutions.column_index("week");
    const auto s_sow = solutions.column_index("sow");
    const auto s_lat = solutions.column_index("lat");
    const auto s_lon = solutions.column_index("lon");
    const auto t_week = truth.column_index("week");
    const auto t_sow = truth.column_index("sow");
    const auto t_lat = truth.column_index("lat");
    const auto t_lon = truth.column_index("lon");

    std::map<std::pair<std::int64_t, std::int64_t>, GeodeticPosition> truth_by_time;
    for (const auto& row : truth.rows)
      truth_by_time[time_key(static_cast<std::int64_t>(row[t_week]), row[t_sow])] =
          GeodeticPosition{row[t_lat], row[t_lon], 0.0};

    if (solutions.rows.empty()) throw Error("solutions CSV has no data rows");
    for (const auto& row : solutions.rows) {
      const auto key = time_key(static_cast<std::int64_t>(row[s_week]), row[s_sow]);
      const auto it = truth_by_time.find(key);
      if (it == truth_by_time.end())
        throw Error("timestamp mismatch: no truth row for week " +
                    std::to_string(key.first) + " sow " + std::to_string(row[s_sow]));
      const double err =
          haversine(GeodeticPosition{row[s_lat], row[s_lon], 0.0}, it->second);
      errors.push_back(err);
      rows.emplace_back(GpsTime{key.first, row[s_sow]}, err);
    }
  } catch (const Error& err) {
    log(LogLevel::error, err.what());
    return exit_input_error;
  }

  std::filesystem::create_directories(config.out_dir);
  std::ofstream csv(config.out_dir / "errors.csv");
  csv << "week,sow,error_m\n";
  for (const auto& [time, err] : rows)
    csv << format_row("%lld,%.3f,%.4f\n", static_cast<long long>(time.week), time.sow,
                      err);

  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());
  const double min = sorted.front();
  const double max = sorted.back();
  double mean = 0.0;
  for (double e : sorted) mean += e;
  mean /= static_cast<double>(sorted.size());
  const std::size_t mid = sorted.size() / 2;
  const double median = sorted.size() % 2 == 1
                            ? sorted[mid]
                            : 0.5 * (sorted[mid - 1] + sorted[mid]);

  std::ofstream summary(config.out_dir / "error_summary.txt");
  summary << format_row("count  %zu\n", sorted.size());
  summary << format_row("min    %.4f m\n", min);
  summary << format_row("max    %.4f m\n", max);
  summary << format_row("mean   %.4f m\n", mean);
  summary << format_row("median %.4f m\n", median);
  summary << "\nhistogram (20 bins)\n";
  const double width = max > min ? (max - min) / 20.0 : 1.0;
  for (int bin = 0; bin < 20; ++bin) {
    const double lo = min + bin * width;
    const double hi = lo + width;
    std::size_t count = 0;
    for (double e : sorted)
      if (e >= lo && (e < hi || (bin == 19 && e <= hi))) ++count;
    summary << format_row("%10.4f %10.4f %8zu\n", lo, hi, count);
  }
  return exit_ok;
}

int cmd_spoof(const SpoofConfig& config) {
  NavigationData nav;
  std::vector<ObservationEpoch> epochs;
  DriftPolicy policy;
  try {
    if (config.mode != "linear" && config.mode != "morph")
      throw Error("unknown --mode '" + config.mode + "' (use linear or morph)");
    policy.kind = config.mode == "linear" ? DriftPolicy::Kind::linear_offset
                                          : DriftPolicy::Kind::waypoint_morph;
    policy.bearing_deg = config.bearing_deg;
    policy.rate_mps = config.rate_mps;
    policy.max_offset_m = config.max_offset_m;
    if (policy.kind == DriftPolicy::Kind::waypoint_morph) {
      if (config.target_route_csv.empty())
        throw Error("--mode morph requires --target-route");
      policy.target_route = read_route_csv(config.target_route_csv);
    }
    nav = load_navigation(config.nav_path);
    epochs = load_observation(config.obs_path);
    if (config.corrections.ionosphere && !nav.iono)
      throw Error("ionosphere correction requested but no coefficients");
  } catch (const Error& err) {
    log(LogLevel::error, err.what());
    return exit_input_error;
  }

  AttackResult result;
  std::vector<std::pair<GpsTime, std::vector<std::pair<std::string, double>>>> legit_prs;
  try {
    result = run_attack(nav.records, epochs, policy, to_options(config.corrections),
                        config.tolerance_m, nav.iono);
    for (const auto& epoch : epochs) {
      std::vector<std::pair<std::string, double>> prs;
      for (const auto& m : epoch.measurements)
        if (std::find(result.common_satellites.begin(), result.common_satellites.end(),
                      m.sat_id) != result.common_satellites.end())
          prs.emplace_back(m.sat_id, m.pseudorange);
      legit_prs.emplace_back(epoch.time, std::move(prs));
    }
  } catch (const Error& err) {
    log(LogLevel::error, err.what());
    return exit_input_error;
  }

  std::filesystem::create_directories(config.out_dir);

  std::ofstream pr_csv(config.out_dir / "spoofed_pseudoranges.csv");
  pr_csv << "week,sow,sat,legit_pr,spoofed_pr,delta\n";
  for (std::size_t i = 0; i < result.epochs.size(); ++i) {
    const auto& se = result.epochs[i];
    if (se.failure) continue;
    std::map<std::string, double> legit_by_sat;
    for (const auto& [sat, pr] : legit_prs[i].second) legit_by_sat[sat] = pr;
    for (const auto& [sat, spoofed_pr] : se.spoofed_pseudoranges) {
      const double legit_pr = legit_by_sat.at(sat);
      pr_csv << format_row("%lld,%.3f,%s,%.4f,%.4f,%.4f\n",
                           static_cast<long long>(se.time.week), se.time.sow,
                           sat.c_str(), legit_pr, spoofed_pr, legit_pr - spoofed_pr);
    }
  }

  std::vector<GeodeticPosition> legit_line;
  std::vector<GeodeticPosition> spoofed_line;
  for (const auto& sol : result.legit_solutions) legit_line.push_back(sol.geodetic);
  for (const auto& se : result.epochs)
    if (!se.failure) spoofed_line.push_back(se.target);
  write_geojson(config.out_dir / "spoofed_route.geojson",
                {{"legitimate", legit_line}, {"spoofed", spoofed_line}});

  std::ofstream ver_csv(config.out_dir / "verification.csv");
  ver_csv << "week,sow,target_lat,target_lon,verified_lat,verified_lon,error_m,verified\n";
  bool all_verified = true;
  for (const auto& se : result.epochs) {
    ver_csv << format_row("%lld,%.3f,%.9f,%.9f,%.9f,%.9f,%.6f,%d\n",
                          static_cast<long long>(se.time.week), se.time.sow,
                          se.target.lat_deg, se.target.lon_deg,
                          se.verified_position.lat_deg, se.verified_position.lon_deg,
                          se.verification_error_m, se.verified ? 1 : 0);
    if (!se.verified) all_verified = false;
    if (se.failure)
      log(LogLevel::warn, "epoch at sow " + std::to_string(se.time.sow) +
                              " failed: " + *se.failure);
  }

  std::ofstream corr_csv(config.out_dir / "correlation.csv");
  corr_csv << "sat,slope,intercept,r_squared\n";
  for (const auto& corr : result.correlation.per_sat)
    corr_csv << format_row("%s,%.10g,%.4f,%.10g\n", corr.sat_id.c_str(), corr.slope,
                           corr.intercept_m, corr.r_squared);

  if (result.common_set_violation)
    log(LogLevel::warn, "visible satellite sets differ across epochs; using the "
                        "common intersection");
  return all_verified ? exit_ok : exit_verification_failed;
}

int cmd_synth(const SynthConfig& config) {
  Route route;
  NavigationData nav;
  try {
    route = read_route_csv(config.route_csv);
    validate_route(route);
    if (route.points.empty()) throw Error("truth route has no points");
    nav = load_navigation(config.nav_path);
  } catch (const Error& err) {
    log(LogLevel::error, err.what());
    return exit_input_error;
  }

  std::vector<ObservationEpoch> epochs;
  try {
    epochs = synth_observations(route, nav.records, config.bias_m,
                                config.noise_sigma_m, config.seed);
  } catch (const Error& err) {
    log(LogLevel::error, err.what());
    return exit_no_result;
  }

  if (config.out_path.has_parent_path())
    std::filesystem::create_directories(config.out_path.parent_path());
  std::ofstream out(config.out_path);
  if (!out) {
    log(LogLevel::error, "cannot write " + config.out_path.string());
    return exit_input_error;
  }
  write_observation(out, epochs);
  return exit_ok;
}

}  // namespace pseudodrift::cli
