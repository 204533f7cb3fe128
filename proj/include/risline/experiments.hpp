#pragma once

// Sweep harness: scenes -> problems -> reductions -> solvers -> CSV rows,
// with a manifest that allows byte-identical replay.

#include "risline/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace risline {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct ResultRow {
  std::string method;
  int rows = 0;  // N_v
  int cols = 0;  // N_h
  int elements = 0;
  int levels = 0;  // 2, 4, or 0 for continuous
  double distance_m = 0.0;
  std::uint64_t seed = 0;
  double objective = 0.0;
  double received_power_w = 0.0;
  double received_power_dbm = 0.0;
  std::size_t variable_count = 0;
  std::uint64_t solver_evaluations = 0;
  std::optional<double> wall_time_s;  // written only in timing mode
  std::string solver;                 // recorded in the manifest, not the CSV
};

double watts_to_dbm(double watts);

/// Header plus one line per row in the order given. Missing wall times are
/// written as NA.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
inline constexpr const char* kCsvHeader =
    "method,N_v,N_h,N,L,distance_m,seed,objective,received_power_w,received_power_dbm,"
    "variable_count,solver_evaluations,wall_time_s";

enum class Command { QuadCmp, Scaling, Distance };
std::string to_string(Command c);
Command parse_command(const std::string& name);

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the config's seed list
  bool extended = false;              // allow exhaustive baselines up to 26 line variables
  bool timing = false;
};

struct RunOutput {
  std::vector<ResultRow> rows;
  std::vector<std::string> notes;  // human-readable summary lines
};

RunOutput run_quadratization_comparison(const ExperimentConfig& config, const RunOptions& options);
RunOutput run_scaling_sweep(const ExperimentConfig& config, const RunOptions& options);
RunOutput run_distance_sweep(const ExperimentConfig& config, const RunOptions& options);
RunOutput run_experiment(Command command, const ExperimentConfig& config, const RunOptions& options);

struct Manifest {
  std::string version = kLibraryVersion;
  Command command = Command::Scaling;
  RunOptions options;
  std::string config_sha256;
  std::string csv_sha256;
  std::size_t row_count = 0;
  std::vector<std::string> row_solvers;
  std::string config_text;
};

std::string sha256_hex(std::string_view data);

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);
Manifest parse_manifest(const std::string& text);

/// Runs `command` on `config_text`, writing results.csv and manifest.txt into
/// out_dir. Returns the rows and summary notes.
RunOutput execute_run(Command command, const std::string& config_text, const RunOptions& options,
                      const std::filesystem::path& out_dir);

/// CSV text with the wall_time_s column blanked when timing was on.
std::string comparable_csv(const std::string& csv, bool timing);

struct VerifyReport {
  bool ok = false;
  std::string message;
};

/// Checks the embedded config against its hash, replays the run in
/// `scratch_dir` and compares the CSV digest.
VerifyReport verify_manifest(const std::filesystem::path& manifest_path,
                             const std::filesystem::path& scratch_dir);

}  // namespace risline
