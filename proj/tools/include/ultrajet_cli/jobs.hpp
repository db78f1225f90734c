#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultrajet/json_io.hpp"

namespace ultrajet::cli {

struct TGridSpec {
  double lo = 1.0;
  double hi = 1e8;
  std::size_t points = 81;
};

struct PlanOverrides {
  double L = 16.0;
  std::size_t p_fold = 10;
  /// Row of V; certify picks the smallest passing row when unset.
  std::optional<double> xi;
  /// Row of the target matrix; 2 xi when unset.
  std::optional<double> w_xi;
  double r_cov = 0.25;
  bool cutoff = false;
};

struct Tolerances {
  double growth_tol = 0.02;
  double little_o_epsilon = 0.05;
  double kappa_rtol = 1e-8;
};

/// Parsed job file. Relative paths are resolved against the config directory.
struct JobConfig {
  std::string command;
  std::filesystem::path weight;
  std::filesystem::path target_weight;
  std::filesystem::path jet;
  std::vector<std::pair<double, double>> set;
  double r_cov = 1.0;
  std::vector<double> xi_grid;
  std::size_t K = 100;
  TGridSpec t_grid;
  PlanOverrides plan;
  std::size_t samples = 200;
  std::size_t alpha_max = 8;
  std::size_t limit_alpha_max = 6;
  int j_max = 40;
  std::filesystem::path output = "out";
  Tolerances tolerances;
  std::uint64_t seed = 1;
};

/// Schema-checked; unknown keys raise Schema.
JobConfig config_from_json(const Json& j, const std::filesystem::path& base_dir);
JobConfig load_config(const std::filesystem::path& path);

enum ExitCode : int { kPass = 0, kError = 1, kInconclusive = 2 };

struct JobResult {
  int exit_code = kPass;
  /// File name (inside the output directory) and contents.
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
};

JobResult cmd_classify(const JobConfig& cfg);
JobResult cmd_matrix(const JobConfig& cfg);
JobResult cmd_extend(const JobConfig& cfg);
JobResult cmd_cover_dump(const JobConfig& cfg);

/// Dispatches by name; errors become exit 1 with no files.
JobResult run_job(const std::string& command, const JobConfig& cfg);

/// Writes every file through a temporary name, then renames.
void write_outputs(const std::filesystem::path& dir, const JobResult& r);

}  // namespace ultrajet::cli
