#include "risline/quadratize.hpp"

#include "risline/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace risline {
namespace {

using Index4 = std::array<std::uint32_t, 4>;
using Pair = std::pair<std::uint32_t, std::uint32_t>;

struct BooleanKey {
  std::uint8_t degree;
  Index4 index;
  auto operator<=>(const BooleanKey&) const = default;
};

/// Multilinear pseudo-Boolean polynomial equal to the spin polynomial under
/// s = 2x - 1.
struct BooleanPolynomial {
  std::map<BooleanKey, double> terms;
  double constant = 0.0;
};

BooleanPolynomial to_boolean(const HigherOrderProblem& problem) {
  BooleanPolynomial out;
  out.constant = problem.constant();
  for (const Monomial& m : problem.terms()) {
    const unsigned d = m.degree;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      BooleanKey key{0, {}};
      for (unsigned k = 0; k < d; ++k) {
        if (mask & (1u << k)) key.index[key.degree++] = m.index[k];
      }
      // prod (2x - 1): 2^|S| (-1)^(d - |S|) per subset S.
      const double c = m.coeff * std::ldexp(1.0, key.degree) * (((d - key.degree) % 2) ? -1.0 : 1.0);
      if (key.degree == 0) {
        out.constant += c;
      } else {
        out.terms[key] += c;
      }
    }
  }
  std::erase_if(out.terms, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

/// Quadratic pseudo-Boolean accumulator converted to spins at the end.
class QuboBuilder {
 public:
  explicit QuboBuilder(std::size_t n) : quad_(Eigen::MatrixXd::Zero(n, n)), lin_(Eigen::VectorXd::Zero(n)) {}

  void constant(double c) { const_ += c; }
  void linear(std::uint32_t a, double c) { lin_[a] += c; }
  void quadratic(std::uint32_t a, std::uint32_t b, double c) {
    if (a == b) {
      lin_[a] += c;
      return;
    }
    quad_(std::min(a, b), std::max(a, b)) += c;
  }

  /// x = (1 + s)/2.
  IsingProblem to_spins() const {
    const Eigen::Index n = lin_.size();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd h = 0.5 * lin_;
    double c = const_ + 0.5 * lin_.sum();
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a + 1; b < n; ++b) {
        const double q = quad_(a, b);
        if (q == 0.0) continue;
        J(a, b) = J(b, a) = 0.25 * q;
        h[a] += 0.25 * q;
        h[b] += 0.25 * q;
        c += 0.25 * q;
      }
    }
    return IsingProblem(std::move(J), std::move(h), Sense::Max, c);
  }

 private:
  Eigen::MatrixXd quad_;
  Eigen::VectorXd lin_;
  double const_ = 0.0;
};

/// Chooses one auxiliary pair per degree-3/4 Boolean monomial.
std::map<Pair, std::uint32_t> choose_pairs(const BooleanPolynomial& poly, std::size_t first_aux) {
  std::map<Pair, std::uint32_t> pairs;
  const auto add = [&](std::uint32_t a, std::uint32_t b) {
    pairs.try_emplace({a, b}, static_cast<std::uint32_t>(first_aux + pairs.size()));
  };
  for (const auto& [key, coeff] : poly.terms) {
    if (key.degree == 4) {
      add(key.index[0], key.index[2]);
      add(key.index[1], key.index[3]);
    }
  }
  for (const auto& [key, coeff] : poly.terms) {
    if (key.degree != 3) continue;
    const auto& i = key.index;
    if (!pairs.contains({i[0], i[1]}) && !pairs.contains({i[0], i[2]}) && !pairs.contains({i[1], i[2]})) {
      add(i[0], i[1]);
    }
  }
  return pairs;
}

}  // namespace

double rosenberg_penalty(Spin s1, Spin s2, Spin z) {
  return (3 - s1 - s2 + 2 * z + s1 * s2 - 2 * s1 * z - 2 * s2 * z) / 4.0;
}

Spins QuadratizationResult::repair(std::span<const Spin> spins) const {
  validate_spins(spins, num_original + aux_map.size());
  Spins out(spins.begin(), spins.end());
  for (std::size_t k = 0; k < aux_map.size(); ++k) {
    const auto [p, q] = aux_map[k];
    out[num_original + k] = (spins[p] == 1 && spins[q] == 1) ? Spin{1} : Spin{-1};
  }
  return out;
}

Spins QuadratizationResult::originals(std::span<const Spin> spins) const {
  validate_spins(spins, num_original + aux_map.size());
  return Spins(spins.begin(), spins.begin() + static_cast<std::ptrdiff_t>(num_original));
}

double penalty_sufficiency_bound(const HigherOrderProblem& problem) {
  double bound = 0.0;
  for (const auto& [key, coeff] : to_boolean(problem).terms) {
    if (key.degree >= 3) bound += std::abs(coeff);
  }
  return bound;
}

QuadratizationResult standard_quadratize(const HigherOrderProblem& problem, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("penalty weight must be positive");
  if (problem.max_degree() > 4) throw std::invalid_argument("degree above 4");
  const std::size_t n = problem.num_spins();
  const BooleanPolynomial poly = to_boolean(problem);
  const auto pairs = choose_pairs(poly, n);
  const auto aux = [&pairs](std::uint32_t a, std::uint32_t b) { return pairs.at({a, b}); };

  QuboBuilder qubo(n + pairs.size());
  qubo.constant(poly.constant);
  for (const auto& [key, coeff] : poly.terms) {
    const auto& i = key.index;
    switch (key.degree) {
      case 1:
        qubo.linear(i[0], coeff);
        break;
      case 2:
        qubo.quadratic(i[0], i[1], coeff);
        break;
      case 3: {
        if (pairs.contains({i[0], i[1]})) {
          qubo.quadratic(aux(i[0], i[1]), i[2], coeff);
        } else if (pairs.contains({i[0], i[2]})) {
          qubo.quadratic(aux(i[0], i[2]), i[1], coeff);
        } else {
          qubo.quadratic(aux(i[1], i[2]), i[0], coeff);
        }
        break;
      }
      case 4:
        qubo.quadratic(aux(i[0], i[2]), aux(i[1], i[3]), coeff);
        break;
      default:
        break;
    }
  }

  std::vector<Pair> aux_map(pairs.size());
  for (const auto& [pair, z] : pairs) {
    const auto [a, b] = pair;
    // -alpha (xy - 2xz - 2yz + 3z)
    qubo.quadratic(a, b, -alpha);
    qubo.quadratic(a, z, 2.0 * alpha);
    qubo.quadratic(b, z, 2.0 * alpha);
    qubo.linear(z, -3.0 * alpha);
    aux_map[z - n] = pair;
  }
  return QuadratizationResult{qubo.to_spins(), std::move(aux_map), n, alpha,
                              QuadratizationMethod::Standard};
}

std::size_t count_variables(QuadratizationMethod method, int rows, int cols, GadgetMode mode) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("line dimensions must be positive");
  const auto r = static_cast<std::size_t>(rows);
  const auto c = static_cast<std::size_t>(cols);
  const std::size_t n = r * c;
  if (method == QuadratizationMethod::TwoStep) return std::max(n, r + c);
  return mode == GadgetMode::Rosenberg ? r + c + n : 2 * n + r + c;
}

SolveResult two_step_first(const IsingProblem& full, const SolverSpec& solver, std::uint64_t seed) {
  return solve_dispatch(full, solver, seed);
}

IsingProblem two_step_second_problem(std::span<const Spin> target, int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("line dimensions must be positive");
  validate_spins(target, static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  Eigen::MatrixXd cross(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) cross(i, j) = target[static_cast<std::size_t>(i * cols + j)];
  }
  return IsingProblem::bipartite(cross, Sense::Max);
}

IsingProblem two_step_second_problem(const Eigen::VectorXcd& target, int rows, int cols) {
  if (rows < 1 || cols < 1 || target.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw std::invalid_argument("target length does not match the line dimensions");
  }
  // Re{conj(t) (a + jb)(c + jd)/2} = [re (ac - bd) + im (ad + bc)] / 2.
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(2 * rows, 2 * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const auto t = target[i * cols + j];
      const double re = 0.5 * t.real();
      const double im = 0.5 * t.imag();
      cross(i, j) = re;
      cross(rows + i, cols + j) = -re;
      cross(i, cols + j) = im;
      cross(rows + i, j) = im;
    }
  }
  return IsingProblem::bipartite(cross, Sense::Max);
}

LineControl two_step_second_solve(const IsingProblem& second, int rows, int cols,
                                  Discretization level, const SolverSpec& solver,
                                  std::uint64_t seed) {
  const SolveResult result = solve_dispatch(second, solver, seed);
  return line_control_from_spins(result.spins, rows, cols, level);
}

PipelineResult two_step_pipeline(const Channel& channel, int rows, int cols, Discretization level,
                                 const SolverSpec& first, const SolverSpec& second,
                                 double tx_power_w, std::uint64_t seed) {
  if (static_cast<Eigen::Index>(rows) * cols != channel.num_elements()) {
    throw std::invalid_argument("line dimensions do not match the channel");
  }
  SolveResult first_result = [&] {
    const IsingProblem full = coupling_from_channel(channel, level);
    return two_step_first(full, first, seed);
  }();

  const IsingProblem fit = [&] {
    if (level == Discretization::TwoLevel) return two_step_second_problem(first_result.spins, rows, cols);
    // Rotate onto the {1, j, -1, -j} grid that line products live on; a
    // global phase leaves the objective unchanged.
    const Eigen::VectorXcd target = spins_to_phases(first_result.spins, level).phases() *
                                    std::polar(1.0, -std::numbers::pi / 4.0);
    return two_step_second_problem(target, rows, cols);
  }();
  const SolveResult fit_result = solve_dispatch(fit, second, seed);

  LineControl line = line_control_from_spins(fit_result.spins, rows, cols, level);
  PhaseVector phases = assemble_line_phases(line);
  const double objective = effective_objective(channel, phases);
  const double power = received_power(channel, phases, mrt_beamformer(channel, phases, tx_power_w));
  return PipelineResult{std::move(line), std::move(phases), objective, power,
                        std::move(first_result.spins),
                        first_result.evaluations + fit_result.evaluations};
}

TuneResult tune_penalty(const HigherOrderProblem& problem, const SolverSpec& solver,
                        std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("tuning budget must be at least 1");
  double scale = 0.0;
  for (const auto& m : problem.terms()) scale = std::max(scale, std::abs(m.coeff));
  if (!(scale > 0.0)) scale = 1.0;

  const auto score = [&](double alpha, std::uint64_t trial, TuneResult& best) {
    const QuadratizationResult q = standard_quadratize(problem, alpha);
    const SolveResult solved = solve_dispatch(q.problem, solver, seed + trial);
    Spins originals = q.originals(q.repair(solved.spins));
    const double value = higher_order_energy(problem, originals) + problem.constant();
    best.evaluations += solved.evaluations;
    best.sampled.push_back(alpha);
    if (best.sampled.size() == 1 || value > best.objective) {
      best.alpha = alpha;
      best.objective = value;
      best.originals = std::move(originals);
    }
  };

  TuneResult best;
  if (problem.max_degree() < 3) {
    score(scale, 0, best);
    return best;
  }
  auto rng = make_rng(seed, 0);
  std::uniform_real_distribution<double> exponent(-2.0, 2.0);
  for (std::size_t t = 0; t < budget; ++t) score(scale * std::pow(10.0, exponent(rng)), t, best);
  return best;
}

}  // namespace risline
