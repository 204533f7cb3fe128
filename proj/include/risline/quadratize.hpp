#pragma once

// Reductions of the fourth-order line-control objective to quadratic Ising
// form: the auxiliary-spin penalty method and the penalty-free two-step fit.

#include "risline/geometry.hpp"
#include "risline/ising.hpp"
#include "risline/solvers.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace risline {

enum class QuadratizationMethod { Standard, TwoStep };

/// How the standard method's variable count is reported: one auxiliary per
/// row/column product (Rosenberg) or the 2N + N_v + N_h accounting used for
/// comparison tables.
enum class GadgetMode { Rosenberg, PaperCount };

/// Rosenberg consistency penalty in spin form (x = (1 + s)/2 applied to
/// xy - 2xz - 2yz + 3z). Zero iff z = AND(s1, s2) in the +1-is-true
/// encoding, at least 1 otherwise.
double rosenberg_penalty(Spin s1, Spin s2, Spin z);

struct QuadratizationResult {
  IsingProblem problem;
  /// aux_map[k] = (p, q): spin num_original + k stands for AND(s_p, s_q).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> aux_map;
  std::size_t num_original = 0;
  std::optional<double> alpha;
  QuadratizationMethod method = QuadratizationMethod::Standard;

  /// Overwrites every auxiliary with the value its gadget enforces.
  Spins repair(std::span<const Spin> spins) const;
  /// Original spins only.
  Spins originals(std::span<const Spin> spins) const;
};

/// Smallest alpha for which max over auxiliaries of the quadratized objective
/// equals the higher-order objective at every original assignment: the sum of
/// |coefficients| of the pseudo-Boolean monomials that receive an auxiliary.
double penalty_sufficiency_bound(const HigherOrderProblem& problem);

/// Spin polynomial -> pseudo-Boolean polynomial -> Rosenberg substitution of
/// pair products -> spin Ising problem (MAX). Degree-4 monomials (a,b,c,d)
/// pair as (a,c)(b,d), i.e. (v_i h_j)(v_k h_l) on line problems.
QuadratizationResult standard_quadratize(const HigherOrderProblem& problem, double alpha);

std::size_t count_variables(QuadratizationMethod method, int rows, int cols,
                            GadgetMode mode = GadgetMode::Rosenberg);

/// First step: solve the unconstrained full-element problem.
SolveResult two_step_first(const IsingProblem& full, const SolverSpec& solver,
                           std::uint64_t seed = 0);

/// Second step, two levels: maximize sum_ij target_{i N_h + j} v_i h_j, a
/// bipartite problem over (v, h).
IsingProblem two_step_second_problem(std::span<const Spin> target, int rows, int cols);

/// Second step, four levels: maximize Re{target^H vec(phi_h^T phi_v)} with
/// phi_v = (v + j v_imag)/sqrt(2), phi_h = (h + j h_imag)/sqrt(2). Spins are
/// laid out (v, v_imag | h, h_imag).
IsingProblem two_step_second_problem(const Eigen::VectorXcd& target, int rows, int cols);

LineControl two_step_second_solve(const IsingProblem& second, int rows, int cols,
                                  Discretization level, const SolverSpec& solver,
                                  std::uint64_t seed = 0);

struct PipelineResult {
  LineControl line;
  PhaseVector phases;
  double objective = 0.0;       // effective_objective(channel, phases)
  double received_power_w = 0.0;
  Spins first_step;
  std::uint64_t evaluations = 0;
};

PipelineResult two_step_pipeline(const Channel& channel, int rows, int cols, Discretization level,
                                 const SolverSpec& first, const SolverSpec& second,
                                 double tx_power_w = 1.0, std::uint64_t seed = 0);

struct TuneResult {
  double alpha = 0.0;
  double objective = 0.0;  // higher-order objective of the repaired best solution
  Spins originals;         // best original spins
  std::vector<double> sampled;
  std::uint64_t evaluations = 0;
};

/// Log-uniform random search for alpha in [1e-2 C, 1e2 C], C = max |coefficient|.
/// Every trial is solved, repaired and scored on the higher-order objective.
TuneResult tune_penalty(const HigherOrderProblem& problem, const SolverSpec& solver,
                        std::size_t budget, std::uint64_t seed = 0);

}  // namespace risline
