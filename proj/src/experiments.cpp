#include "risline/experiments.hpp"

#include "risline/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace risline {
namespace {

constexpr std::size_t kExtendedLineCap = 26;
constexpr double kRevalidationTol = 1e-9;

struct Optimized {
  PhaseVector phases;
  std::optional<double> solver_objective;
  std::uint64_t evaluations = 0;
  std::size_t variable_count = 0;
  std::string solver;
};

struct Geometry {
  int rows;
  int cols;
};

Channel channel_for(const ScenarioConfig& base, Geometry g) {
  ScenarioConfig sc = base;
  sc.ris_rows = g.rows;
  sc.ris_cols = g.cols;
  return los_channel(build_scene(sc));
}

PhaseVector phases_from_line_spins(std::span<const Spin> spins, int rows, int cols) {
  return assemble_line_phases(line_control_from_spins(spins, rows, cols, Discretization::TwoLevel));
}

std::string format_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

Optimized optimize(Method method, const Channel& channel, Geometry g, const ExperimentConfig& cfg,
                   std::uint64_t seed, std::size_t exhaustive_cap, double tx_power_w) {
  const auto n = static_cast<std::size_t>(g.rows) * static_cast<std::size_t>(g.cols);
  const auto line_vars = static_cast<std::size_t>(g.rows + g.cols);
  switch (method) {
    case Method::FullL2:
    case Method::FullL4: {
      const auto level = method == Method::FullL2 ? Discretization::TwoLevel : Discretization::FourLevel;
      const SolverSpec spec = cfg.solver_for(method);
      const IsingProblem problem = coupling_from_channel(channel, level);
      SolveResult r = solve_dispatch(problem, spec, seed);
      return {spins_to_phases(r.spins, level), r.objective, r.evaluations,
              static_cast<std::size_t>(problem.size()), spec.str()};
    }
    case Method::LineL2:
    case Method::LineL4: {
      const auto level = method == Method::LineL2 ? Discretization::TwoLevel : Discretization::FourLevel;
      const SolverSpec first = cfg.solver_for(method);
      const SolverSpec second = cfg.second_step_for(method);
      PipelineResult r = two_step_pipeline(channel, g.rows, g.cols, level, first, second, tx_power_w, seed);
      const std::size_t factor = level == Discretization::TwoLevel ? 1 : 2;
      return {std::move(r.phases), std::nullopt, r.evaluations,
              factor * count_variables(QuadratizationMethod::TwoStep, g.rows, g.cols),
              first.str() + " | " + second.str()};
    }
    case Method::LineL2StdQuad: {
      const SolverSpec spec = cfg.solver_for(method);
      const HigherOrderProblem line =
          line_fourth_order(coupling_from_channel(channel, Discretization::TwoLevel), g.rows, g.cols);
      const TuneResult tuned = tune_penalty(line, spec, cfg.tuning_budget, seed);
      return {phases_from_line_spins(tuned.originals, g.rows, g.cols), tuned.objective, tuned.evaluations,
              count_variables(QuadratizationMethod::Standard, g.rows, g.cols, cfg.variable_accounting),
              spec.str() + " alpha=" + format_g(tuned.alpha)};
    }
    case Method::LineL2Exact: {
      const IsingProblem full = coupling_from_channel(channel, Discretization::TwoLevel);
      const SolveResult r = exhaustive_line_search(full, g.rows, g.cols, exhaustive_cap);
      return {phases_from_line_spins(r.spins, g.rows, g.cols), r.objective, r.evaluations, line_vars,
              "exhaustive-line"};
    }
    case Method::Continuous: {
      ManifoldOptions options;
      options.seed = seed;
      ContinuousResult r = continuous_manifold(channel, options);
      return {std::move(r.phases), r.objective, r.iterations, n, "manifold"};
    }
  }
  throw std::logic_error("unhandled method");
}

void require_close(double a, double b, const std::string& what) {
  const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
  if (std::abs(a - b) > kRevalidationTol * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " failed revalidation: " << a << " vs " << b;
    throw std::runtime_error(msg.str());
  }
}

ResultRow make_row(Method method, Geometry g, double distance_m, std::uint64_t seed,
                   const Channel& channel, const Optimized& opt, double tx_power_w) {
  ResultRow row;
  row.method = to_string(method);
  row.rows = g.rows;
  row.cols = g.cols;
  row.elements = g.rows * g.cols;
  row.levels = method_levels(method);
  row.distance_m = distance_m;
  row.seed = seed;
  row.objective = effective_objective(channel, opt.phases);
  // Independent route: ||C^H phi||^2 via the objective factor.
  require_close(row.objective, (objective_factor(channel).adjoint() * opt.phases.phases()).squaredNorm(),
                row.method + " objective");
  row.received_power_w = received_power(channel, opt.phases, mrt_beamformer(channel, opt.phases, tx_power_w));
  require_close(row.received_power_w, tx_power_w * row.objective, row.method + " received power");
  row.received_power_dbm = watts_to_dbm(row.received_power_w);
  row.variable_count = opt.variable_count;
  row.solver_evaluations = opt.evaluations;
  row.solver = opt.solver;
  return row;
}

struct Job {
  Method method;
  Geometry geometry;
  std::uint64_t seed;
};

std::vector<std::uint64_t> effective_seeds(const ExperimentConfig& cfg, const RunOptions& options) {
  if (options.seed) return {*options.seed};
  if (cfg.seeds.empty()) throw std::invalid_argument("seed list is empty");
  return cfg.seeds;
}

void require_methods(const ExperimentConfig& cfg) {
  if (cfg.methods.empty()) throw std::invalid_argument("method list is empty");
}

template <typename Fn>
std::vector<ResultRow> run_jobs(const std::vector<Job>& jobs, unsigned threads, bool timing, Fn&& evaluate) {
  std::vector<ResultRow> rows(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    rows[k] = evaluate(jobs[k]);
    if (timing) rows[k].wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return rows;
}

std::string format_db(double db) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", db);
  return buf;
}

/// Gap of every discrete row to the continuous row of the same point.
void append_gap_notes(const std::vector<ResultRow>& rows, RunOutput& out) {
  for (const auto& ref : rows) {
    if (ref.method != "CONTINUOUS") continue;
    for (const auto& row : rows) {
      if (row.method == "CONTINUOUS" || row.elements != ref.elements || row.seed != ref.seed ||
          row.distance_m != ref.distance_m) {
        continue;
      }
      out.notes.push_back("N=" + std::to_string(row.elements) + " seed=" + std::to_string(row.seed) + " " +
                          row.method + " gap to CONTINUOUS: " +
                          format_db(10.0 * std::log10(ref.objective / row.objective)) + " dB");
    }
  }
}

}  // namespace

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1000.0); }

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%d,%.17g,%llu,%.17g,%.17g,%.17g,%zu,%llu,", r.method.c_str(),
                  r.rows, r.cols, r.elements, r.levels, r.distance_m, static_cast<unsigned long long>(r.seed),
                  r.objective, r.received_power_w, r.received_power_dbm, r.variable_count,
                  static_cast<unsigned long long>(r.solver_evaluations));
    out << buf;
    if (r.wall_time_s) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.wall_time_s);
      out << buf;
    } else {
      out << "NA";
    }
    out << '\n';
  }
}

std::string to_string(Command c) {
  switch (c) {
    case Command::QuadCmp:
      return "quadcmp";
    case Command::Scaling:
      return "scaling";
    case Command::Distance:
      return "distance";
  }
  throw std::logic_error("unnamed command");
}

Command parse_command(const std::string& name) {
  if (name == "quadcmp") return Command::QuadCmp;
  if (name == "scaling") return Command::Scaling;
  if (name == "distance") return Command::Distance;
  throw std::invalid_argument("unknown command '" + name + "'");
}

RunOutput run_quadratization_comparison(const ExperimentConfig& cfg, const RunOptions& options) {
  require_methods(cfg);
  if (cfg.line_variables.empty()) throw std::invalid_argument("sweep.line_variables is empty");
  const std::size_t limit = options.extended ? std::max(cfg.exhaustive_cap, kExtendedLineCap) : cfg.exhaustive_cap;
  RunOutput out;
  for (int size : cfg.line_variables) {
    if (size < 2) throw std::invalid_argument("line variable count must be >= 2");
    if (static_cast<std::size_t>(size) > limit) {
      throw std::invalid_argument("line variable count " + std::to_string(size) + " exceeds the exhaustive cap of " +
                                  std::to_string(limit) + (options.extended ? "" : " (use --extended for up to 26)"));
    }
    if (size > 20) {
      out.notes.push_back("warning: exhaustive line search over " + std::to_string(size) +
                          " variables enumerates 2^" + std::to_string(size - 2) + " states");
    }
  }

  std::vector<Job> jobs;
  for (int size : cfg.line_variables) {
    const Geometry g{size / 2, size - size / 2};
    for (Method m : cfg.methods) {
      for (std::uint64_t seed : effective_seeds(cfg, options)) jobs.push_back({m, g, seed});
    }
  }
  out.rows = run_jobs(jobs, cfg.threads, options.timing, [&](const Job& job) {
    const ScenarioConfig sc = scene_for_seed(cfg, job.seed);
    const Channel ch = channel_for(sc, job.geometry);
    const Optimized opt = optimize(job.method, ch, job.geometry, cfg, job.seed, limit, sc.tx_power_w);
    ResultRow row = make_row(job.method, job.geometry, build_scene(sc).ut_position.norm(), job.seed, ch, opt,
                             sc.tx_power_w);
    if (opt.solver_objective) require_close(*opt.solver_objective, row.objective, row.method + " solver objective");
    return row;
  });

  for (const auto& exact : out.rows) {
    if (exact.method != "LINE_L2_EXACT") continue;
    for (const auto& row : out.rows) {
      if (row.method == exact.method || row.elements != exact.elements || row.seed != exact.seed) continue;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%d line variables seed=%llu %s / exhaustive power ratio: %.6f",
                    exact.rows + exact.cols, static_cast<unsigned long long>(row.seed), row.method.c_str(),
                    row.received_power_w / exact.received_power_w);
      out.notes.emplace_back(buf);
    }
  }
  return out;
}

RunOutput run_scaling_sweep(const ExperimentConfig& cfg, const RunOptions& options) {
  require_methods(cfg);
  if (cfg.sizes.empty()) throw std::invalid_argument("sweep.sizes is empty");
  std::vector<Geometry> shapes;
  for (int n : cfg.sizes) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (n >= 1 && side * side == n) {
      shapes.push_back({side, side});
    } else if (cfg.scene.ris_rows * cfg.scene.ris_cols == n) {
      shapes.push_back({cfg.scene.ris_rows, cfg.scene.ris_cols});
    } else {
      throw std::invalid_argument("N=" + std::to_string(n) +
                                  " is not a perfect square and does not match ris_array rows x cols");
    }
  }

  std::vector<Job> jobs;
  for (const Geometry& g : shapes) {
    for (Method m : cfg.methods) {
      for (std::uint64_t seed : effective_seeds(cfg, options)) jobs.push_back({m, g, seed});
    }
  }
  RunOutput out;
  out.rows = run_jobs(jobs, cfg.threads, options.timing, [&](const Job& job) {
    const ScenarioConfig sc = scene_for_seed(cfg, job.seed);
    const Channel ch = channel_for(sc, job.geometry);
    const Optimized opt = optimize(job.method, ch, job.geometry, cfg, job.seed, cfg.exhaustive_cap, sc.tx_power_w);
    ResultRow row = make_row(job.method, job.geometry, sc.ut_distance_m, job.seed, ch, opt, sc.tx_power_w);
    if (opt.solver_objective && job.method != Method::Continuous) {
      require_close(*opt.solver_objective, row.objective, row.method + " solver objective");
    }
    return row;
  });
  append_gap_notes(out.rows, out);
  return out;
}

RunOutput run_distance_sweep(const ExperimentConfig& cfg, const RunOptions& options) {
  require_methods(cfg);
  if (cfg.distances_m.empty()) throw std::invalid_argument("sweep.distances_m is empty");
  const Geometry g{cfg.scene.ris_rows, cfg.scene.ris_cols};
  const auto seeds = effective_seeds(cfg, options);

  std::vector<Job> design_jobs;
  for (Method m : cfg.methods) {
    for (std::uint64_t seed : seeds) design_jobs.push_back({m, g, seed});
  }
  std::vector<std::optional<Optimized>> designs(design_jobs.size());
  std::vector<double> design_seconds(design_jobs.size(), 0.0);
  parallel_for(design_jobs.size(), cfg.threads, [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioConfig sc = scene_for_seed(cfg, design_jobs[k].seed);
    designs[k] = optimize(design_jobs[k].method, channel_for(sc, g), g, cfg, design_jobs[k].seed,
                          cfg.exhaustive_cap, sc.tx_power_w);
    design_seconds[k] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  RunOutput out;
  for (double d : cfg.distances_m) {
    for (std::size_t k = 0; k < design_jobs.size(); ++k) {
      const Job& job = design_jobs[k];
      ScenarioConfig sc = scene_for_seed(cfg, job.seed);
      sc.ris_rows = g.rows;
      sc.ris_cols = g.cols;
      const Scene scene = build_scene(sc).with_ut_distance(d);
      const Channel ch = los_channel(scene);
      ResultRow row = make_row(job.method, g, d, job.seed, ch, *designs[k], sc.tx_power_w);
      if (options.timing) row.wall_time_s = design_seconds[k];
      out.rows.push_back(std::move(row));
    }
  }

  // Off-design leakage per method: strongest off-design power relative to the
  // design point, raw and with the free-space 1/d^2 trend removed.
  for (std::size_t k = 0; k < design_jobs.size(); ++k) {
    const double d0 = cfg.scene.ut_distance_m;
    std::optional<double> design_power;
    double leak = -std::numeric_limits<double>::infinity();
    double leak_normalized = leak;
    for (const auto& row : out.rows) {
      if (row.method != to_string(design_jobs[k].method) || row.seed != design_jobs[k].seed) continue;
      if (row.distance_m == d0) design_power = row.received_power_w;
    }
    if (!design_power) continue;
    for (const auto& row : out.rows) {
      if (row.method != to_string(design_jobs[k].method) || row.seed != design_jobs[k].seed || row.distance_m == d0) {
        continue;
      }
      const double ratio = row.received_power_w / *design_power;
      leak = std::max(leak, 10.0 * std::log10(ratio));
      leak_normalized = std::max(leak_normalized, 10.0 * std::log10(ratio * std::pow(row.distance_m / d0, 2.0)));
    }
    if (std::isfinite(leak)) {
      out.notes.push_back(to_string(design_jobs[k].method) + " seed=" + std::to_string(design_jobs[k].seed) +
                          " peak off-design power relative to design point: " + format_db(leak) +
                          " dB (distance-normalized " + format_db(leak_normalized) + " dB)");
    }
  }
  return out;
}

RunOutput run_experiment(Command command, const ExperimentConfig& config, const RunOptions& options) {
  switch (command) {
    case Command::QuadCmp:
      return run_quadratization_comparison(config, options);
    case Command::Scaling:
      return run_scaling_sweep(config, options);
    case Command::Distance:
      return run_distance_sweep(config, options);
  }
  throw std::logic_error("unhandled command");
}

}  // namespace risline
