#pragma once

// Optimization engines: exhaustive enumeration, simulated annealing (software
// stand-in for a coherent Ising machine), greedy polishing, alternating
// bipartite ascent, and continuous unit-modulus ascent.

#include "risline/geometry.hpp"
#include "risline/ising.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace risline {

/// Best spins found plus bookkeeping. `objective` is always recomputed from
/// the problem (energy + constant) when the result is built.
struct SolveResult {
  Spins spins;
  double objective = 0.0;
  std::uint64_t evaluations = 0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  std::vector<std::pair<std::uint64_t, double>> trace;
  std::string engine;
  std::string parameters;

  SolveResult() = default;
  SolveResult(const IsingProblem& problem, Spins best);
  SolveResult(const HigherOrderProblem& problem, Spins best);
};

struct AnnealSchedule {
  std::uint64_t sweeps = 1;
  double beta_start = 1.0;
  double beta_end = 1.0;
  int replicas = 1;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
  bool check_bookkeeping = false;
  bool record_trace = false;

  /// sweeps = 200 N_s, beta from 0.1/<|J|> to 20/<|J|>, 8 replicas.
  static AnnealSchedule defaults_for(const IsingProblem& problem, std::uint64_t seed = 0);
  void validate() const;
};

inline constexpr std::size_t kDefaultExhaustiveCap = 24;
inline constexpr std::size_t kHardExhaustiveCap = 30;

/// Global optimum. Ties resolve to the lexicographically smallest spin vector
/// with +1 ordered before -1. Zero-bias problems enumerate only half the
/// states (spin 0 fixed to +1).
SolveResult exhaustive_search(const IsingProblem& problem,
                              std::size_t cap = kDefaultExhaustiveCap);
SolveResult exhaustive_search(const HigherOrderProblem& problem,
                              std::size_t cap = kDefaultExhaustiveCap);

/// Exact optimum of a two-level full-element problem restricted to line
/// patterns phi_{i N_h + j} = v_i h_j. Enumerates v, and for each v solves the
/// induced quadratic problem in h by Gray-code enumeration. Spins are (v, h);
/// the objective equals ising_objective(full, assembled phases).
SolveResult exhaustive_line_search(const IsingProblem& full, int rows, int cols,
                                   std::size_t cap = kDefaultExhaustiveCap);

SolveResult simulated_annealing(const IsingProblem& problem, const AnnealSchedule& schedule);

/// Steepest single-flip ascent (in the problem's sense) until no flip gains.
SolveResult greedy_flip(const IsingProblem& problem, Spins start);

struct AlternatingOptions {
  int starts = 32;
  std::uint64_t seed = 0;
  std::size_t max_rounds = 10'000;
  bool record_trace = false;
};

/// Coordinate ascent on a bipartite problem: right side <- sign(C^T left),
/// left side <- sign(C right), sign(0) = +1, until a fixed point. Start 0 has
/// the left side all +1; the rest are seeded random. With record_trace the
/// objective after every half-step of every start goes into `trace`.
SolveResult alternating_bipartite(const IsingProblem& problem, const AlternatingOptions& options);

struct ManifoldOptions {
  int random_starts = 8;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 10'000;
  double tolerance = 1e-10;
  std::size_t window = 10;
  bool record_trace = false;
};

struct ContinuousResult {
  PhaseVector phases;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::vector<double> trace;  // accepted objective values of the winning start
};

/// Maximizes ||C^H phi||^2 over unit-modulus phi by phi <- normalize(phi + eta R phi)
/// with R = C C^H; eta halves whenever a step would decrease the objective.
/// Starts: phase-aligned leading singular vector of C, then random phases.
ContinuousResult continuous_manifold(const Eigen::MatrixXcd& factor, const ManifoldOptions& options = {});
ContinuousResult continuous_manifold(const Channel& channel, const ManifoldOptions& options = {});

/// Parsed `engine[:key=value,...]`.
struct SolverSpec {
  std::string engine;
  std::map<std::string, std::string> params;

  static SolverSpec parse(const std::string& text);
  std::string str() const;
};

/// Engines: exhaustive (cap), sa (sweeps, beta_start, beta_end, replicas, seed,
/// threads, quantize), sa+greedy (same keys), greedy, alternating (starts,
/// seed). `default_seed` applies when the spec carries no seed. quantize=<bits>
/// anneals the integer-quantized copy and scores the spins on the original.
SolveResult solve_dispatch(const IsingProblem& problem, const SolverSpec& spec,
                           std::uint64_t default_seed = 0);

}  // namespace risline
