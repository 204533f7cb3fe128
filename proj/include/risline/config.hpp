#pragma once

// INI-style experiment configuration.
//
//   [scene]      frequency_hz, tx_power_w, bs_distance_m, ut_distance_m,
//                ut_angle_deg, bs_position, ris_center, ut_position (x,y,z in m),
//                randomize_ut (per-seed UT angle/distance draw)
//   [bs_array]   rows, cols, spacing (meters or "half-wavelength")
//   [ris_array]  rows, cols, spacing
//   [sweep]      sizes (N, perfect squares), line_variables, distances_m,
//                methods, seeds  (comma-separated lists)
//   [solvers]    <METHOD> = engine[:key=value,...]   first/only solver
//   [second_step] <METHOD> = engine[:...]            line-fit solver (LINE_*)
//   [run]        tuning_budget, exhaustive_cap, variable_accounting
//                (paper|rosenberg), threads, output
//
// Units: Hz, meters, watts, degrees.

#include "risline/geometry.hpp"
#include "risline/quadratize.hpp"
#include "risline/solvers.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace risline {

enum class Method { FullL2, FullL4, LineL2, LineL4, LineL2StdQuad, LineL2Exact, Continuous };

std::string to_string(Method m);
Method parse_method(const std::string& name);
/// Number of phase levels (0 for continuous).
int method_levels(Method m);

struct ExperimentConfig {
  ScenarioConfig scene;
  bool randomize_ut = false;

  std::vector<int> sizes;
  std::vector<int> line_variables;
  std::vector<double> distances_m;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds{1};

  std::map<Method, SolverSpec> solvers;
  std::map<Method, SolverSpec> second_step;

  std::size_t tuning_budget = 200;
  std::size_t exhaustive_cap = 20;
  GadgetMode variable_accounting = GadgetMode::PaperCount;
  unsigned threads = 0;
  std::filesystem::path output = "out";

  /// Spec for `m`, falling back to the built-in default.
  SolverSpec solver_for(Method m) const;
  SolverSpec second_step_for(Method m) const;
};

ExperimentConfig parse_config(const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Scene for one sweep point; with randomize_ut the UT angle is drawn from
/// [-60, 60] degrees and its distance from [0.5, 1.5] x ut_distance_m.
ScenarioConfig scene_for_seed(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace risline
