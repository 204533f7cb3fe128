#pragma once

// Quadratic and fourth-order spin objectives built from RIS channels.

#include "risline/geometry.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace risline {

using Spin = std::int8_t;
using Spins = std::vector<Spin>;

enum class Sense { Max, Min };

enum class Discretization { TwoLevel, FourLevel };

inline int level_count(Discretization d) { return d == Discretization::TwoLevel ? 2 : 4; }

/// H(s) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j, plus a recorded constant
/// that the objective carries along (diagonal terms dropped because s_i^2 = 1).
/// J is stored symmetric with a zero diagonal.
class IsingProblem {
 public:
  IsingProblem(Eigen::MatrixXd couplings, Eigen::VectorXd bias, Sense sense,
               double constant = 0.0);

  /// Two-sided problem: spins [0, left) only couple to spins [left, left+right).
  static IsingProblem bipartite(const Eigen::MatrixXd& cross, Sense sense, double constant = 0.0);

  const Eigen::MatrixXd& couplings() const { return J_; }
  const Eigen::VectorXd& bias() const { return h_; }
  Sense sense() const { return sense_; }
  double constant() const { return constant_; }
  Eigen::Index size() const { return h_.size(); }
  std::optional<Eigen::Index> bipartite_split() const { return split_; }

  bool has_bias() const { return !h_.isZero(0.0); }
  /// Sum of |J_ij| over i<j plus sum |h_i|; used for relative tolerances.
  double magnitude() const;

 private:
  Eigen::MatrixXd J_;
  Eigen::VectorXd h_;
  Sense sense_;
  double constant_;
  std::optional<Eigen::Index> split_;
};

struct Monomial {
  std::array<std::uint32_t, 4> index{};
  std::uint8_t degree = 0;
  double coeff = 0.0;

  std::span<const std::uint32_t> indices() const { return {index.data(), degree}; }
};

/// Sparse polynomial in spins with terms of degree 1..4. Index tuples are
/// strictly increasing and unique; degree-0 parts live in constant().
class HigherOrderProblem {
 public:
  HigherOrderProblem(std::size_t num_spins, std::vector<Monomial> terms, double constant = 0.0);

  /// Builds a monomial from an index multiset; repeated indices cancel.
  static Monomial term(std::initializer_list<std::uint32_t> indices, double coeff);

  std::size_t num_spins() const { return num_spins_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  double constant() const { return constant_; }
  int max_degree() const;

 private:
  std::size_t num_spins_;
  std::vector<Monomial> terms_;
  double constant_;
};

/// Row/column control spins. For four levels the real parts are v/h and the
/// imaginary parts v_imag/h_imag.
struct LineControl {
  Discretization level = Discretization::TwoLevel;
  Spins v;
  Spins h;
  Spins v_imag;
  Spins h_imag;

  std::size_t rows() const { return v.size(); }
  std::size_t cols() const { return h.size(); }
};

/// Full-element problem whose energy plus constant equals the received-power
/// objective. Four levels use 2N spins ordered (sigma_Re, sigma_Im).
IsingProblem coupling_from_channel(const Channel& channel, Discretization level);

double ising_energy(const IsingProblem& problem, std::span<const Spin> spins);
double ising_objective(const IsingProblem& problem, std::span<const Spin> spins);

/// Substitutes phi_{i N_h + j} = v_i h_j into a two-level full-element
/// problem. Spin i < N_v is v_i; spin N_v + j is h_j.
HigherOrderProblem line_fourth_order(const IsingProblem& full, int rows, int cols);

double higher_order_energy(const HigherOrderProblem& problem, std::span<const Spin> spins);

PhaseVector assemble_line_phases(const LineControl& line);

/// Flat spin layout used by the line-fitting problem: (v, h) for two levels,
/// (v, v_imag, h, h_imag) for four.
Spins line_control_spins(const LineControl& line);
LineControl line_control_from_spins(std::span<const Spin> spins, int rows, int cols,
                                    Discretization level);

/// CIM-style integer couplings: scale so the largest |J_ij| or |h_i| maps to
/// 2^(bits-1) - 1, round, clip. The constant is scaled, not rounded.
IsingProblem quantize_couplings(const IsingProblem& problem, int bits = 8);

PhaseVector spins_to_phases(std::span<const Spin> spins, Discretization level);

void validate_spins(std::span<const Spin> spins, std::size_t expected);

/// Text form for external solvers:
///   header "<N_s> <max|min> <constant>", then "i j value" coupling lines
///   (i < j, nonzero only) and "i value" bias lines. '#' starts a comment.
void write_problem(std::ostream& out, const IsingProblem& problem);
IsingProblem read_problem(std::istream& in);

}  // namespace risline
