#include "risline/solvers.hpp"

#include "risline/parallel.hpp"
#include "risline/random.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace risline {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double sense_sign(Sense s) { return s == Sense::Max ? 1.0 : -1.0; }

/// +1 sorts before -1.
bool lex_less(std::span<const Spin> a, std::span<const Spin> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

Eigen::VectorXd as_vector(std::span<const Spin> s) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) v[static_cast<Eigen::Index>(i)] = s[i];
  return v;
}

double tie_tolerance(double magnitude) {
  return 1e-12 * std::max(magnitude, std::numeric_limits<double>::min());
}

void check_cap(std::size_t n, std::size_t cap) {
  if (cap > kHardExhaustiveCap) {
    throw std::invalid_argument("exhaustive cap above the hard limit of " +
                                std::to_string(kHardExhaustiveCap));
  }
  if (n > cap) {
    throw std::invalid_argument("exhaustive search over " + std::to_string(n) +
                                " spins exceeds the cap of " + std::to_string(cap));
  }
}

/// Incremental best-state tracker shared by the enumerators.
class BestTracker {
 public:
  BestTracker(Spins initial, double value, double tol)
      : best_(std::move(initial)), value_(value), tol_(tol) {}

  void offer(std::span<const Spin> state, double value) {
    if (value > value_ + tol_) {
      best_.assign(state.begin(), state.end());
      value_ = value;
    } else if (value >= value_ - tol_ && lex_less(state, best_)) {
      best_.assign(state.begin(), state.end());
      value_ = std::max(value_, value);
    }
  }
  const Spins& best() const { return best_; }
  double value() const { return value_; }

 private:
  Spins best_;
  double value_;
  double tol_;
};

/// Gray-code walk over `free_bits` spins ending at `offset + free_bits - 1`;
/// bit b of the counter toggles spin offset + free_bits - 1 - b so the lowest
/// bit moves the last spin.
template <typename Flip>
void gray_walk(std::size_t free_bits, std::size_t offset, Flip&& flip) {
  const std::uint64_t states = std::uint64_t{1} << free_bits;
  for (std::uint64_t k = 1; k < states; ++k) {
    const auto b = static_cast<std::size_t>(std::countr_zero(k));
    flip(offset + free_bits - 1 - b, k);
  }
}

struct LocalFieldState {
  const IsingProblem& problem;
  Spins spins;
  Eigen::VectorXd field;  // J * spins
  double energy = 0.0;

  LocalFieldState(const IsingProblem& p, Spins start) : problem(p), spins(std::move(start)) {
    resync();
  }

  void resync() {
    field.noalias() = problem.couplings() * as_vector(spins);
    energy = ising_energy(problem, spins);
  }

  double flip_delta(Eigen::Index i) const {
    return -2.0 * spins[i] * (problem.bias()[i] + field[i]);
  }

  void flip(Eigen::Index i, double delta) {
    spins[i] = static_cast<Spin>(-spins[i]);
    energy += delta;
    field.noalias() += (2.0 * spins[i]) * problem.couplings().col(i);
  }
};

}  // namespace

SolveResult::SolveResult(const IsingProblem& problem, Spins best)
    : spins(std::move(best)), objective(ising_objective(problem, spins)) {}

SolveResult::SolveResult(const HigherOrderProblem& problem, Spins best)
    : spins(std::move(best)),
      objective(higher_order_energy(problem, spins) + problem.constant()) {}

// ---------------------------------------------------------------- exhaustive

SolveResult exhaustive_search(const IsingProblem& problem, std::size_t cap) {
  const auto start = Clock::now();
  const auto n = static_cast<std::size_t>(problem.size());
  check_cap(n, cap);
  const double sign = sense_sign(problem.sense());
  const bool halve = !problem.has_bias();
  const std::size_t free_bits = halve ? n - 1 : n;

  LocalFieldState state(problem, Spins(n, 1));
  BestTracker tracker(state.spins, sign * state.energy, tie_tolerance(problem.magnitude()));

  gray_walk(free_bits, n - free_bits, [&](std::size_t i, std::uint64_t k) {
    const auto idx = static_cast<Eigen::Index>(i);
    state.flip(idx, state.flip_delta(idx));
    if ((k & 0xFFFF) == 0) state.resync();
    tracker.offer(state.spins, sign * state.energy);
  });

  SolveResult result(problem, tracker.best());
  result.evaluations = std::uint64_t{1} << free_bits;
  result.engine = "exhaustive";
  result.wall_time_s = seconds_since(start);
  return result;
}

SolveResult exhaustive_search(const HigherOrderProblem& problem, std::size_t cap) {
  const auto start = Clock::now();
  const std::size_t n = problem.num_spins();
  if (n == 0) throw std::invalid_argument("higher-order problem has no spins");
  check_cap(n, cap);
  const auto& terms = problem.terms();

  std::vector<std::vector<std::size_t>> touching(n);
  bool all_even = true;
  double magnitude = 0.0;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    for (auto idx : terms[t].indices()) touching[idx].push_back(t);
    all_even = all_even && terms[t].degree % 2 == 0;
    magnitude += std::abs(terms[t].coeff);
  }
  const std::size_t free_bits = all_even ? n - 1 : n;

  Spins spins(n, 1);
  std::vector<int> term_sign(terms.size(), 1);
  double energy = 0.0;
  for (const auto& m : terms) energy += m.coeff;
  BestTracker tracker(spins, energy, tie_tolerance(magnitude));

  gray_walk(free_bits, n - free_bits, [&](std::size_t i, std::uint64_t k) {
    spins[i] = static_cast<Spin>(-spins[i]);
    for (std::size_t t : touching[i]) {
      energy -= 2.0 * terms[t].coeff * term_sign[t];
      term_sign[t] = -term_sign[t];
    }
    if ((k & 0xFFFF) == 0) energy = higher_order_energy(problem, spins);
    tracker.offer(spins, energy);
  });

  SolveResult result(problem, tracker.best());
  result.evaluations = std::uint64_t{1} << free_bits;
  result.engine = "exhaustive";
  result.wall_time_s = seconds_since(start);
  return result;
}

SolveResult exhaustive_line_search(const IsingProblem& full, int rows, int cols, std::size_t cap) {
  const auto start = Clock::now();
  if (rows < 1 || cols < 1 || static_cast<Eigen::Index>(rows) * cols != full.size()) {
    throw std::invalid_argument("line dimensions do not match the full-element problem");
  }
  if (full.sense() != Sense::Max) throw std::invalid_argument("line search expects a MAX problem");
  const auto r = static_cast<std::size_t>(rows);
  const auto c = static_cast<std::size_t>(cols);
  check_cap(r + c, cap);

  // Zero bias: (v, h) -> (-v, h) and (v, -h) both leave phi^T J phi unchanged.
  const bool halve = !full.has_bias();
  const std::size_t v_bits = halve ? r - 1 : r;
  const std::size_t h_bits = halve ? c - 1 : c;
  const Eigen::MatrixXd& J = full.couplings();
  const Eigen::VectorXd& bias = full.bias();

  Spins v(r, 1);
  Spins joint(r + c, 1);
  std::optional<BestTracker> tracker;
  std::uint64_t evaluations = 0;

  const auto solve_columns = [&] {
    // Induced problem in h: phi = S h with S_{(i,j), j} = v_i.
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(full.size(), cols);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) S(static_cast<Eigen::Index>(i * c + j), j) = v[i];
    }
    Eigen::MatrixXd K = S.transpose() * J * S;
    K = (0.5 * (K + K.transpose())).eval();
    Eigen::MatrixXd Kc = K;
    Kc.diagonal().setZero();
    const IsingProblem columns(std::move(Kc), S.transpose() * bias, Sense::Max,
                               0.5 * K.trace() + full.constant());

    LocalFieldState state(columns, Spins(c, 1));
    std::copy(v.begin(), v.end(), joint.begin());
    const auto offer = [&] {
      std::copy(state.spins.begin(), state.spins.end(), joint.begin() + static_cast<std::ptrdiff_t>(r));
      const double value = state.energy + columns.constant();
      if (!tracker) {
        tracker.emplace(joint, value, tie_tolerance(full.magnitude()));
      } else {
        tracker->offer(joint, value);
      }
    };
    offer();
    gray_walk(h_bits, c - h_bits, [&](std::size_t j, std::uint64_t k) {
      const auto idx = static_cast<Eigen::Index>(j);
      state.flip(idx, state.flip_delta(idx));
      if ((k & 0xFFFF) == 0) state.resync();
      offer();
    });
    evaluations += std::uint64_t{1} << h_bits;
  };

  solve_columns();
  gray_walk(v_bits, r - v_bits, [&](std::size_t i, std::uint64_t) {
    v[i] = static_cast<Spin>(-v[i]);
    solve_columns();
  });

  SolveResult result;
  result.spins = tracker->best();
  LineControl line;
  line.v.assign(result.spins.begin(), result.spins.begin() + rows);
  line.h.assign(result.spins.begin() + rows, result.spins.end());
  const Spins phi = [&] {
    Spins out(r * c);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) out[i * c + j] = static_cast<Spin>(line.v[i] * line.h[j]);
    }
    return out;
  }();
  result.objective = ising_objective(full, phi);
  result.evaluations = evaluations;
  result.engine = "exhaustive-line";
  result.wall_time_s = seconds_since(start);
  return result;
}

// ------------------------------------------------------------------ annealing

AnnealSchedule AnnealSchedule::defaults_for(const IsingProblem& problem, std::uint64_t seed) {
  const Eigen::Index n = problem.size();
  double total = 0.0;
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double a = std::abs(problem.couplings()(i, j));
      if (a > 0.0) {
        total += a;
        ++count;
      }
    }
    const double b = std::abs(problem.bias()[j]);
    if (b > 0.0) {
      total += b;
      ++count;
    }
  }
  const double mean = count > 0 ? total / static_cast<double>(count) : 1.0;
  AnnealSchedule s;
  s.sweeps = 200 * static_cast<std::uint64_t>(n);
  s.beta_start = 0.1 / mean;
  s.beta_end = 20.0 / mean;
  s.replicas = 8;
  s.seed = seed;
  return s;
}

void AnnealSchedule::validate() const {
  if (sweeps < 1) throw std::invalid_argument("anneal schedule needs at least one sweep");
  if (replicas < 1) throw std::invalid_argument("anneal schedule needs at least one replica");
  if (!(beta_start > 0.0) || !(beta_end >= beta_start) || !std::isfinite(beta_end)) {
    throw std::invalid_argument("anneal schedule needs 0 < beta_start <= beta_end");
  }
}

namespace {

struct ReplicaOutcome {
  Spins best;
  double value = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::uint64_t, double>> trace;
};

ReplicaOutcome anneal_replica(const IsingProblem& problem, const AnnealSchedule& schedule,
                              std::uint64_t replica) {
  const Eigen::Index n = problem.size();
  const double sign = sense_sign(problem.sense());
  const double drift_tol = 1e-9 * std::max(problem.magnitude(), std::numeric_limits<double>::min());
  auto rng = make_rng(schedule.seed, replica);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Spins init(static_cast<std::size_t>(n));
  for (auto& s : init) s = (rng() >> 63) ? Spin{1} : Spin{-1};
  LocalFieldState state(problem, std::move(init));

  ReplicaOutcome out;
  out.best = state.spins;
  out.value = sign * state.energy;

  const double ratio = schedule.beta_end / schedule.beta_start;
  const std::uint64_t trace_every = std::max<std::uint64_t>(1, schedule.sweeps / 100);
  for (std::uint64_t sweep = 0; sweep < schedule.sweeps; ++sweep) {
    const double t = schedule.sweeps > 1 ? double(sweep) / double(schedule.sweeps - 1) : 1.0;
    const double beta = schedule.beta_start * std::pow(ratio, t);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double delta = state.flip_delta(i);
      const double gain = sign * delta;
      if (gain >= 0.0 || unit(rng) < std::exp(beta * gain)) state.flip(i, delta);
    }
    if ((sweep + 1) % 100 == 0) {
      const double incremental = state.energy;
      state.resync();
      if (schedule.check_bookkeeping && std::abs(incremental - state.energy) > drift_tol) {
        throw std::logic_error("annealer energy bookkeeping drifted");
      }
    }
    if (sign * state.energy > out.value) {
      out.value = sign * state.energy;
      out.best = state.spins;
    }
    if (schedule.record_trace && (sweep % trace_every == 0 || sweep + 1 == schedule.sweeps)) {
      out.trace.emplace_back(sweep, sign * out.value + problem.constant());
    }
  }
  return out;
}

}  // namespace

SolveResult simulated_annealing(const IsingProblem& problem, const AnnealSchedule& schedule) {
  schedule.validate();
  const auto start = Clock::now();
  std::vector<ReplicaOutcome> outcomes(static_cast<std::size_t>(schedule.replicas));
  parallel_for(outcomes.size(), schedule.threads,
               [&](std::size_t r) { outcomes[r] = anneal_replica(problem, schedule, r); });

  std::size_t winner = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].value > outcomes[winner].value) winner = r;
  }
  SolveResult result(problem, std::move(outcomes[winner].best));
  result.trace = std::move(outcomes[winner].trace);
  result.evaluations = schedule.sweeps * static_cast<std::uint64_t>(problem.size()) *
                       static_cast<std::uint64_t>(schedule.replicas);
  result.seed = schedule.seed;
  result.engine = "sa";
  result.wall_time_s = seconds_since(start);
  return result;
}

// --------------------------------------------------------------------- greedy

SolveResult greedy_flip(const IsingProblem& problem, Spins start_spins) {
  const auto start = Clock::now();
  validate_spins(start_spins, static_cast<std::size_t>(problem.size()));
  const double sign = sense_sign(problem.sense());
  const double tol = tie_tolerance(problem.magnitude());
  LocalFieldState state(problem, std::move(start_spins));
  std::uint64_t evaluations = 0;

  for (;;) {
    Eigen::Index pick = -1;
    double best_gain = tol;
    for (Eigen::Index i = 0; i < problem.size(); ++i) {
      const double gain = sign * state.flip_delta(i);
      if (gain > best_gain) {
        best_gain = gain;
        pick = i;
      }
    }
    evaluations += static_cast<std::uint64_t>(problem.size());
    if (pick < 0) break;
    state.flip(pick, state.flip_delta(pick));
  }

  SolveResult result(problem, std::move(state.spins));
  result.evaluations = evaluations;
  result.engine = "greedy";
  result.wall_time_s = seconds_since(start);
  return result;
}

// ---------------------------------------------------------------- alternating

SolveResult alternating_bipartite(const IsingProblem& problem, const AlternatingOptions& options) {
  const auto start = Clock::now();
  const auto split = problem.bipartite_split();
  if (!split) throw std::invalid_argument("alternating solver needs a bipartite problem");
  if (options.starts < 1) throw std::invalid_argument("alternating solver needs at least one start");
  const Eigen::Index left = *split;
  const Eigen::Index right = problem.size() - left;
  const double sign = sense_sign(problem.sense());
  const Eigen::MatrixXd cross = sign * problem.couplings().topRightCorner(left, right);

  const auto sign_of = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd s(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) s[i] = x[i] >= 0.0 ? 1.0 : -1.0;
    return s;
  };

  struct Outcome {
    Eigen::VectorXd a, b;
    double value;
  };
  std::optional<Outcome> best;
  std::vector<std::pair<std::uint64_t, double>> trace;
  std::uint64_t evaluations = 0;

  for (int s = 0; s < options.starts; ++s) {
    Eigen::VectorXd a = Eigen::VectorXd::Ones(left);
    if (s > 0) {
      auto rng = make_rng(options.seed, static_cast<std::uint64_t>(s));
      for (Eigen::Index i = 0; i < left; ++i) a[i] = (rng() >> 63) ? 1.0 : -1.0;
    }
    Eigen::VectorXd b = sign_of(cross.transpose() * a);
    for (std::size_t round = 0; round < options.max_rounds; ++round) {
      if (options.record_trace) trace.emplace_back(s, a.dot(cross * b));
      Eigen::VectorXd a_next = sign_of(cross * b);
      if (options.record_trace) trace.emplace_back(s, a_next.dot(cross * b));
      Eigen::VectorXd b_next = sign_of(cross.transpose() * a_next);
      evaluations += static_cast<std::uint64_t>(problem.size());
      const bool fixed = a_next == a && b_next == b;
      a = std::move(a_next);
      b = std::move(b_next);
      if (fixed) break;
    }
    const double value = a.dot(cross * b);
    if (!best || value > best->value) best = Outcome{a, b, value};
  }

  Spins spins(static_cast<std::size_t>(problem.size()));
  for (Eigen::Index i = 0; i < left; ++i) spins[i] = static_cast<Spin>(best->a[i]);
  for (Eigen::Index j = 0; j < right; ++j) spins[left + j] = static_cast<Spin>(best->b[j]);
  SolveResult result(problem, std::move(spins));
  if (options.record_trace) {
    // Report in the problem's own sense.
    for (auto& [step, value] : trace) value = sign * value + problem.constant();
    result.trace = std::move(trace);
  }
  result.evaluations = evaluations;
  result.seed = options.seed;
  result.engine = "alternating";
  result.wall_time_s = seconds_since(start);
  return result;
}

// ----------------------------------------------------------------- continuous

ContinuousResult continuous_manifold(const Eigen::MatrixXcd& factor, const ManifoldOptions& options) {
  const Eigen::Index n = factor.rows();
  if (n < 1) throw std::invalid_argument("empty objective factor");
  const auto objective = [&factor](const Eigen::VectorXcd& phi) {
    return (factor.adjoint() * phi).squaredNorm();
  };
  const auto project = [](const Eigen::VectorXcd& z, const Eigen::VectorXcd& fallback) {
    Eigen::VectorXcd out(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double mag = std::abs(z[i]);
      out[i] = mag > 0.0 ? z[i] / mag : fallback[i];
    }
    return out;
  };

  std::vector<Eigen::VectorXcd> starts;
  {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(factor, Eigen::ComputeThinU);
    const Eigen::VectorXcd lead = svd.matrixU().col(0);
    starts.push_back(project(lead, Eigen::VectorXcd::Ones(n)));
  }
  auto rng = make_rng(options.seed, 0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int s = 0; s < options.random_starts; ++s) {
    Eigen::VectorXcd phi(n);
    for (Eigen::Index i = 0; i < n; ++i) phi[i] = std::polar(1.0, angle(rng));
    starts.push_back(std::move(phi));
  }

  const double trace_r = factor.squaredNorm();
  const double eta0 = trace_r > 0.0 ? double(n) / trace_r : 1.0;

  std::optional<ContinuousResult> best;
  for (const auto& initial : starts) {
    Eigen::VectorXcd phi = initial;
    double value = objective(phi);
    double eta = eta0;
    std::vector<double> history{value};
    std::size_t it = 0;
    for (; it < options.max_iterations; ++it) {
      const Eigen::VectorXcd ascent = factor * (factor.adjoint() * phi);
      Eigen::VectorXcd candidate = project(phi + eta * ascent, phi);
      const double next = objective(candidate);
      if (next < value) {
        eta *= 0.5;
        if (eta < 1e-30 * eta0) break;
        continue;
      }
      phi = std::move(candidate);
      value = next;
      history.push_back(value);
      const std::size_t w = options.window;
      if (history.size() > w && value - history[history.size() - 1 - w] <= options.tolerance * value) break;
    }
    if (!best || value > best->objective) {
      best = ContinuousResult{PhaseVector(phi, PhaseLevel::Continuous), value, it,
                              options.record_trace ? std::move(history) : std::vector<double>{}};
    }
  }
  return std::move(*best);
}

ContinuousResult continuous_manifold(const Channel& channel, const ManifoldOptions& options) {
  return continuous_manifold(objective_factor(channel), options);
}

// ------------------------------------------------------------------- dispatch

SolverSpec SolverSpec::parse(const std::string& text) {
  SolverSpec spec;
  const auto colon = text.find(':');
  spec.engine = text.substr(0, colon);
  if (spec.engine.empty()) throw std::invalid_argument("empty solver engine in '" + text + "'");
  if (colon == std::string::npos) return spec;
  std::stringstream rest(text.substr(colon + 1));
  for (std::string item; std::getline(rest, item, ',');) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("solver parameter '" + item + "' is not key=value");
    }
    spec.params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return spec;
}

std::string SolverSpec::str() const {
  std::string out = engine;
  char sep = ':';
  for (const auto& [k, v] : params) {
    out += sep;
    out += k + "=" + v;
    sep = ',';
  }
  return out;
}

namespace {

class ParamReader {
 public:
  ParamReader(const SolverSpec& spec, std::initializer_list<const char*> allowed) : spec_(spec) {
    for (const auto& [key, value] : spec.params) {
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
          allowed.end()) {
        throw std::invalid_argument("unknown parameter '" + key + "' for engine '" + spec.engine + "'");
      }
    }
  }

  template <typename T>
  T get(const char* key, T fallback) const {
    const auto it = spec_.params.find(key);
    if (it == spec_.params.end()) return fallback;
    try {
      if constexpr (std::is_floating_point_v<T>) {
        return static_cast<T>(std::stod(it->second));
      } else {
        return static_cast<T>(std::stoull(it->second));
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("bad value '" + it->second + "' for solver parameter '" + key + "'");
    }
  }

 private:
  const SolverSpec& spec_;
};

SolveResult run_annealer(const IsingProblem& problem, const SolverSpec& spec,
                         std::uint64_t default_seed, bool polish) {
  const ParamReader p(spec, {"sweeps", "beta_start", "beta_end", "replicas", "seed", "threads",
                             "quantize"});
  const auto seed = p.get<std::uint64_t>("seed", default_seed);
  const int bits = p.get<int>("quantize", 0);
  const IsingProblem annealed = bits > 0 ? quantize_couplings(problem, bits) : problem;

  AnnealSchedule schedule = AnnealSchedule::defaults_for(annealed, seed);
  schedule.sweeps = p.get("sweeps", schedule.sweeps);
  schedule.beta_start = p.get("beta_start", schedule.beta_start);
  schedule.beta_end = p.get("beta_end", schedule.beta_end);
  schedule.replicas = p.get("replicas", schedule.replicas);
  schedule.threads = p.get("threads", schedule.threads);

  SolveResult annealed_result = simulated_annealing(annealed, schedule);
  SolveResult result(problem, std::move(annealed_result.spins));
  result.evaluations = annealed_result.evaluations;
  result.wall_time_s = annealed_result.wall_time_s;
  result.trace = std::move(annealed_result.trace);
  if (polish) {
    SolveResult polished = greedy_flip(problem, result.spins);
    polished.evaluations += result.evaluations;
    polished.wall_time_s += result.wall_time_s;
    result = std::move(polished);
  }
  result.seed = seed;
  return result;
}

}  // namespace

SolveResult solve_dispatch(const IsingProblem& problem, const SolverSpec& spec,
                           std::uint64_t default_seed) {
  SolveResult result;
  if (spec.engine == "exhaustive") {
    const ParamReader p(spec, {"cap"});
    result = exhaustive_search(problem, p.get<std::size_t>("cap", kDefaultExhaustiveCap));
  } else if (spec.engine == "sa") {
    result = run_annealer(problem, spec, default_seed, false);
  } else if (spec.engine == "sa+greedy") {
    result = run_annealer(problem, spec, default_seed, true);
  } else if (spec.engine == "greedy") {
    const ParamReader p(spec, {});
    result = greedy_flip(problem, Spins(static_cast<std::size_t>(problem.size()), 1));
  } else if (spec.engine == "alternating") {
    const ParamReader p(spec, {"starts", "seed"});
    AlternatingOptions options;
    options.starts = p.get("starts", options.starts);
    options.seed = p.get<std::uint64_t>("seed", default_seed);
    result = alternating_bipartite(problem, options);
  } else {
    throw std::invalid_argument("unknown solver engine '" + spec.engine + "'");
  }
  result.engine = spec.engine;
  result.parameters = spec.str();
  return result;
}

}  // namespace risline
