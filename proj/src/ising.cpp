#include "risline/ising.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace risline {

IsingProblem::IsingProblem(Eigen::MatrixXd couplings, Eigen::VectorXd bias, Sense sense,
                           double constant)
    : J_(std::move(couplings)), h_(std::move(bias)), sense_(sense), constant_(constant) {
  const Eigen::Index n = h_.size();
  if (n < 1) throw std::invalid_argument("Ising problem needs at least one spin");
  if (J_.rows() != n || J_.cols() != n) throw std::invalid_argument("coupling/bias size mismatch");
  if (!J_.allFinite() || !h_.allFinite() || !std::isfinite(constant_)) {
    throw std::invalid_argument("non-finite Ising coefficients");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (J_(i, i) != 0.0) throw std::invalid_argument("coupling diagonal must be zero");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (J_(i, j) != J_(j, i)) throw std::invalid_argument("coupling matrix must be symmetric");
    }
  }
}

IsingProblem IsingProblem::bipartite(const Eigen::MatrixXd& cross, Sense sense, double constant) {
  const Eigen::Index left = cross.rows();
  const Eigen::Index n = left + cross.cols();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  J.topRightCorner(left, cross.cols()) = cross;
  J.bottomLeftCorner(cross.cols(), left) = cross.transpose();
  IsingProblem problem(std::move(J), Eigen::VectorXd::Zero(n), sense, constant);
  problem.split_ = left;
  return problem;
}

double IsingProblem::magnitude() const {
  return 0.5 * J_.cwiseAbs().sum() + h_.cwiseAbs().sum();
}

Monomial HigherOrderProblem::term(std::initializer_list<std::uint32_t> indices, double coeff) {
  if (indices.size() > 4) throw std::invalid_argument("monomial degree above 4");
  Monomial m;
  std::copy(indices.begin(), indices.end(), m.index.begin());
  m.degree = static_cast<std::uint8_t>(indices.size());
  m.coeff = coeff;
  return m;
}

HigherOrderProblem::HigherOrderProblem(std::size_t num_spins, std::vector<Monomial> terms,
                                       double constant)
    : num_spins_(num_spins), constant_(constant) {
  for (Monomial& m : terms) {
    if (m.degree > 4) throw std::invalid_argument("monomial degree above 4");
    auto* first = m.index.data();
    std::sort(first, first + m.degree);
    // s_i^2 = 1: drop equal neighbours pairwise.
    std::array<std::uint32_t, 4> kept{};
    std::uint8_t count = 0;
    for (std::uint8_t k = 0; k < m.degree; ++k) {
      if (first[k] >= num_spins_) throw std::invalid_argument("monomial index out of range");
      if (count > 0 && kept[count - 1] == first[k]) {
        --count;
      } else {
        kept[count++] = first[k];
      }
    }
    m.index = {};
    std::copy(kept.begin(), kept.begin() + count, m.index.begin());
    m.degree = count;
  }

  const auto key_less = [](const Monomial& a, const Monomial& b) {
    return std::tie(a.degree, a.index) < std::tie(b.degree, b.index);
  };
  std::sort(terms.begin(), terms.end(), key_less);

  for (const Monomial& m : terms) {
    if (m.degree == 0) {
      constant_ += m.coeff;
    } else if (!terms_.empty() && terms_.back().degree == m.degree && terms_.back().index == m.index) {
      terms_.back().coeff += m.coeff;
    } else {
      terms_.push_back(m);
    }
  }
  std::erase_if(terms_, [](const Monomial& m) { return m.coeff == 0.0; });
  if (!std::isfinite(constant_)) throw std::invalid_argument("non-finite constant");
}

int HigherOrderProblem::max_degree() const {
  int d = 0;
  for (const auto& m : terms_) d = std::max<int>(d, m.degree);
  return d;
}

void validate_spins(std::span<const Spin> spins, std::size_t expected) {
  if (spins.size() != expected) {
    throw std::invalid_argument("expected " + std::to_string(expected) + " spins, got " +
                                std::to_string(spins.size()));
  }
  for (Spin s : spins) {
    if (s != 1 && s != -1) throw std::invalid_argument("spin values must be +1 or -1");
  }
}

IsingProblem coupling_from_channel(const Channel& channel, Discretization level) {
  if (channel.h_r.size() != channel.G.rows()) throw std::invalid_argument("channel dimension mismatch");
  const Eigen::MatrixXcd C = objective_factor(channel);
  const Eigen::MatrixXd Cr = C.real();
  const Eigen::MatrixXd Ci = C.imag();
  const Eigen::Index n = C.rows();

  // R = C C^H = (Cr Cr^T + Ci Ci^T) + j (Ci Cr^T - Cr Ci^T).
  Eigen::MatrixXd re(n, n);
  re.noalias() = Cr * Cr.transpose();
  re.noalias() += Ci * Ci.transpose();
  // The product is symmetric only up to rounding; averaging is exact.
  re = (0.5 * (re + re.transpose())).eval();
  const double constant = re.trace();

  if (level == Discretization::TwoLevel) {
    Eigen::MatrixXd J = 2.0 * re;
    J.diagonal().setZero();
    return IsingProblem(std::move(J), Eigen::VectorXd::Zero(n), Sense::Max, constant);
  }

  // phi = (s_re + j s_im)/sqrt(2):
  //   phi^H R phi = x^T (1/2)[[Re R, -Im R], [Im R, Re R]] x,  x = (s_re, s_im).
  Eigen::MatrixXd J(2 * n, 2 * n);
  J.topLeftCorner(n, n) = re;
  J.bottomRightCorner(n, n) = re;
  re.resize(0, 0);
  Eigen::MatrixXd im(n, n);
  im.noalias() = Ci * Cr.transpose();
  im.noalias() -= Cr * Ci.transpose();
  J.bottomLeftCorner(n, n) = im;
  J.topRightCorner(n, n) = -im.transpose();
  // Exact symmetry: -Im R^T equals Im R only up to rounding.
  J.topRightCorner(n, n) = J.bottomLeftCorner(n, n).transpose();
  J.diagonal().setZero();
  return IsingProblem(std::move(J), Eigen::VectorXd::Zero(2 * n), Sense::Max, constant);
}

double ising_energy(const IsingProblem& problem, std::span<const Spin> spins) {
  const Eigen::Index n = problem.size();
  validate_spins(spins, static_cast<std::size_t>(n));
  const auto& J = problem.couplings();
  const auto& h = problem.bias();
  double energy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) row += J(j, i) * spins[j];
    energy += spins[i] * (h[i] + row);
  }
  return energy;
}

double ising_objective(const IsingProblem& problem, std::span<const Spin> spins) {
  return ising_energy(problem, spins) + problem.constant();
}

HigherOrderProblem line_fourth_order(const IsingProblem& full, int rows, int cols) {
  if (rows < 1 || cols < 1 || static_cast<Eigen::Index>(rows) * cols != full.size()) {
    throw std::invalid_argument("line dimensions do not match the full-element problem");
  }
  const auto v = [](int i) { return static_cast<std::uint32_t>(i); };
  const auto h = [rows](int j) { return static_cast<std::uint32_t>(rows + j); };
  const auto& J = full.couplings();
  const auto& bias = full.bias();

  std::vector<Monomial> terms;
  for (int e = 0; e < rows * cols; ++e) {
    const int i = e / cols;
    const int j = e % cols;
    if (bias[e] != 0.0) terms.push_back(HigherOrderProblem::term({v(i), h(j)}, bias[e]));
    for (int f = e + 1; f < rows * cols; ++f) {
      const double c = J(f, e);
      if (c == 0.0) continue;
      // v_i h_j v_k h_l; repeated row or column indices cancel in the constructor.
      terms.push_back(HigherOrderProblem::term({v(i), h(j), v(f / cols), h(f % cols)}, c));
    }
  }
  return HigherOrderProblem(static_cast<std::size_t>(rows + cols), std::move(terms),
                            full.constant());
}

double higher_order_energy(const HigherOrderProblem& problem, std::span<const Spin> spins) {
  validate_spins(spins, problem.num_spins());
  double energy = 0.0;
  for (const Monomial& m : problem.terms()) {
    int sign = 1;
    for (std::uint32_t idx : m.indices()) sign *= spins[idx];
    energy += sign * m.coeff;
  }
  return energy;
}

namespace {

std::complex<double> quaternary(Spin re, Spin im) {
  return std::complex<double>(re, im) / std::numbers::sqrt2;
}

}  // namespace

PhaseVector assemble_line_phases(const LineControl& line) {
  const std::size_t rows = line.rows();
  const std::size_t cols = line.cols();
  validate_spins(line.v, rows);
  validate_spins(line.h, cols);
  Eigen::VectorXcd phases(static_cast<Eigen::Index>(rows * cols));

  if (line.level == Discretization::TwoLevel) {
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) phases[i * cols + j] = double(line.v[i] * line.h[j]);
    }
    return PhaseVector(std::move(phases), PhaseLevel::Binary);
  }

  validate_spins(line.v_imag, rows);
  validate_spins(line.h_imag, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      // ((a + jb)(c + jd)) / 2 lands exactly on {1, j, -1, -j}.
      const int a = line.v[i], b = line.v_imag[i], c = line.h[j], d = line.h_imag[j];
      phases[i * cols + j] = std::complex<double>((a * c - b * d) / 2, (a * d + b * c) / 2);
    }
  }
  return PhaseVector(std::move(phases), PhaseLevel::QuaternaryAxis);
}

Spins line_control_spins(const LineControl& line) {
  Spins out(line.v);
  if (line.level == Discretization::FourLevel) out.insert(out.end(), line.v_imag.begin(), line.v_imag.end());
  out.insert(out.end(), line.h.begin(), line.h.end());
  if (line.level == Discretization::FourLevel) out.insert(out.end(), line.h_imag.begin(), line.h_imag.end());
  return out;
}

LineControl line_control_from_spins(std::span<const Spin> spins, int rows, int cols,
                                    Discretization level) {
  const std::size_t r = static_cast<std::size_t>(rows);
  const std::size_t c = static_cast<std::size_t>(cols);
  const std::size_t factor = level == Discretization::TwoLevel ? 1 : 2;
  validate_spins(spins, factor * (r + c));
  LineControl line;
  line.level = level;
  auto take = [&spins](std::size_t offset, std::size_t count) {
    return Spins(spins.begin() + offset, spins.begin() + offset + count);
  };
  if (level == Discretization::TwoLevel) {
    line.v = take(0, r);
    line.h = take(r, c);
  } else {
    line.v = take(0, r);
    line.v_imag = take(r, r);
    line.h = take(2 * r, c);
    line.h_imag = take(2 * r + c, c);
  }
  return line;
}

IsingProblem quantize_couplings(const IsingProblem& problem, int bits) {
  if (bits < 2 || bits > 32) throw std::invalid_argument("quantization bits must be in [2, 32]");
  const double limit = std::ldexp(1.0, bits - 1) - 1.0;
  const double peak = std::max(problem.couplings().cwiseAbs().maxCoeff(),
                               problem.bias().cwiseAbs().maxCoeff());
  if (!(peak > 0.0)) throw std::invalid_argument("cannot quantize an all-zero problem");
  const double scale = limit / peak;
  const auto q = [scale, limit](double x) { return std::clamp(std::round(scale * x), -limit, limit); };
  return IsingProblem(problem.couplings().unaryExpr(q), problem.bias().unaryExpr(q),
                      problem.sense(), scale * problem.constant());
}

PhaseVector spins_to_phases(std::span<const Spin> spins, Discretization level) {
  if (level == Discretization::TwoLevel) {
    validate_spins(spins, spins.size());
    Eigen::VectorXcd phases(static_cast<Eigen::Index>(spins.size()));
    for (std::size_t i = 0; i < spins.size(); ++i) phases[i] = double(spins[i]);
    return PhaseVector(std::move(phases), PhaseLevel::Binary);
  }
  if (spins.size() % 2 != 0) throw std::invalid_argument("four-level spin vector must have even length");
  validate_spins(spins, spins.size());
  const std::size_t n = spins.size() / 2;
  Eigen::VectorXcd phases(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) phases[i] = quaternary(spins[i], spins[n + i]);
  // 1/sqrt(2) rounding leaves |phi| within a few ulp of one.
  return PhaseVector(std::move(phases), PhaseLevel::Quaternary);
}

void write_problem(std::ostream& out, const IsingProblem& problem) {
  const auto& J = problem.couplings();
  const auto& h = problem.bias();
  char buf[128];
  std::snprintf(buf, sizeof buf, "%lld %s %.17g\n", static_cast<long long>(problem.size()),
                problem.sense() == Sense::Max ? "max" : "min", problem.constant());
  out << buf;
  for (Eigen::Index i = 0; i < problem.size(); ++i) {
    for (Eigen::Index j = i + 1; j < problem.size(); ++j) {
      if (J(i, j) == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n", static_cast<long long>(i),
                    static_cast<long long>(j), J(i, j));
      out << buf;
    }
  }
  for (Eigen::Index i = 0; i < problem.size(); ++i) {
    if (h[i] == 0.0) continue;
    std::snprintf(buf, sizeof buf, "%lld %.17g\n", static_cast<long long>(i), h[i]);
    out << buf;
  }
}

IsingProblem read_problem(std::istream& in) {
  std::string line;
  std::optional<Eigen::Index> n;
  Sense sense = Sense::Max;
  double constant = 0.0;
  Eigen::MatrixXd J;
  Eigen::VectorXd h;
  int line_no = 0;

  const auto fail = [&line_no](const std::string& what) {
    throw std::invalid_argument("problem file line " + std::to_string(line_no) + ": " + what);
  };
  const auto index = [&](const std::string& tok) {
    const long long i = std::stoll(tok);
    if (i < 0 || i >= *n) fail("index out of range");
    return static_cast<Eigen::Index>(i);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (!n) {
      if (tok.size() != 3) fail("expected header '<spins> <max|min> <constant>'");
      const long long count = std::stoll(tok[0]);
      if (count < 1) fail("spin count must be positive");
      if (tok[1] == "max") {
        sense = Sense::Max;
      } else if (tok[1] == "min") {
        sense = Sense::Min;
      } else {
        fail("unknown sense '" + tok[1] + "'");
      }
      constant = std::stod(tok[2]);
      n = static_cast<Eigen::Index>(count);
      J = Eigen::MatrixXd::Zero(*n, *n);
      h = Eigen::VectorXd::Zero(*n);
    } else if (tok.size() == 3) {
      const auto i = index(tok[0]);
      const auto j = index(tok[1]);
      if (i == j) fail("self-coupling");
      J(i, j) = J(j, i) = std::stod(tok[2]);
    } else if (tok.size() == 2) {
      h[index(tok[0])] = std::stod(tok[1]);
    } else {
      fail("expected 'i j value' or 'i value'");
    }
  }
  if (!n) throw std::invalid_argument("problem file has no header");
  return IsingProblem(std::move(J), std::move(h), sense, constant);
}

}  // namespace risline
