#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace pseudodrift::cli {

// Exit codes shared by all subcommands.
inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_no_result = 3;
inline constexpr int exit_verification_failed = 4;

struct CorrectionFlags {
  bool relativistic = true;
  bool sagnac = true;
  bool ionosphere = false;
  bool troposphere = false;
};

struct SolveConfig {
  std::filesystem::path nav_path;
  std::filesystem::path obs_path;
  std::filesystem::path out_dir;
  CorrectionFlags corrections;
};

struct ErrorStatsConfig {
  std::filesystem::path solutions_csv;
  std::filesystem::path truth_csv;
  std::filesystem::path out_dir;
};

struct SpoofConfig {
  std::filesystem::path nav_path;
  std::filesystem::path obs_path;
  std::filesystem::path out_dir;
  std::string mode = "linear";  // linear | morph
  double bearing_deg = 90.0;
  double rate_mps = 0.5;
  double max_offset_m = 200.0;
  std::filesystem::path target_route_csv;
  double tolerance_m = 0.5;
  CorrectionFlags corrections;
};

struct SynthConfig {
  std::filesystem::path route_csv;
  std::filesystem::path nav_path;
  std::filesystem::path out_path;
  double bias_m = 0.0;
  double noise_sigma_m = 0.0;
  std::uint64_t seed = 0;
};

int cmd_solve(const SolveConfig& config);
int cmd_error_stats(const ErrorStatsConfig& config);
int cmd_spoof(const SpoofConfig& config);
int cmd_synth(const SynthConfig& config);

}  // namespace pseudodrift::cli
