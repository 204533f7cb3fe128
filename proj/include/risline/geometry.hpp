#pragma once

// Propagation scene, line-of-sight channels and received-power evaluation for
// a BS -> RIS -> UT link.

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace risline {

using Vec3 = Eigen::Vector3d;

inline constexpr double kSpeedOfLight = 299'792'458.0;

struct ArrayLayout {
  int rows = 1;
  int cols = 1;
  double spacing_m = 0.0;

  int size() const { return rows * cols; }
};

/// Unit normal plus the two in-plane axes of a planar array. Row index grows
/// along -vertical, column index along +horizontal.
struct Orientation {
  Vec3 normal{1.0, 0.0, 0.0};
  Vec3 horizontal{0.0, 1.0, 0.0};
  Vec3 vertical{0.0, 0.0, 1.0};
};

struct Scene {
  double frequency_hz = 28.0e9;
  ArrayLayout bs_array;
  ArrayLayout ris_array;
  Vec3 bs_position = Vec3::Zero();
  Vec3 ris_center = Vec3::Zero();
  Vec3 ut_position = Vec3::Zero();
  Orientation ris_orientation;
  double tx_power_w = 1.0;

  double wavelength() const { return kSpeedOfLight / frequency_hz; }
  int num_elements() const { return ris_array.size(); }
  int num_antennas() const { return bs_array.size(); }

  /// Same scene with the UT moved to `distance_m` along its current ray from
  /// the RIS center.
  Scene with_ut_distance(double distance_m) const;
};

/// Scenario description as read from a config file. Spacings left empty mean
/// half-wavelength. Explicit positions override the default geometry.
struct ScenarioConfig {
  double frequency_hz = 28.0e9;
  double tx_power_w = 1.0;
  int bs_rows = 8;
  int bs_cols = 8;
  std::optional<double> bs_spacing_m;
  int ris_rows = 74;
  int ris_cols = 74;
  std::optional<double> ris_spacing_m;
  double bs_distance_m = 20.0;
  double ut_distance_m = 50.0;
  double ut_angle_deg = 30.0;
  std::optional<Vec3> bs_position;
  std::optional<Vec3> ris_center;
  std::optional<Vec3> ut_position;
};

/// Per-element unit-modulus RIS phases.
enum class PhaseLevel {
  Binary,         // {-1, +1}
  Quaternary,     // {e^{j pi/4}, e^{j 3pi/4}, e^{j 5pi/4}, e^{j 7pi/4}}
  QuaternaryAxis, // {1, j, -1, -j}: products of two Quaternary values
  Continuous,
};

class PhaseVector {
 public:
  /// Throws std::invalid_argument when an entry is off the unit circle or
  /// outside the constellation of `level` (tolerance 1e-12).
  PhaseVector(Eigen::VectorXcd phases, PhaseLevel level);

  const Eigen::VectorXcd& phases() const { return phases_; }
  PhaseLevel level() const { return level_; }
  Eigen::Index size() const { return phases_.size(); }

 private:
  Eigen::VectorXcd phases_;
  PhaseLevel level_;
};

/// G is BS->RIS (N x M); h_r is RIS->UT (1 x N).
struct Channel {
  Eigen::MatrixXcd G;
  Eigen::RowVectorXcd h_r;

  Eigen::Index num_elements() const { return G.rows(); }
  Eigen::Index num_antennas() const { return G.cols(); }
};

Scene build_scene(const ScenarioConfig& config);

/// Row-major: element i * N_h + j sits in row i, column j.
std::vector<Vec3> element_positions(const Scene& scene);
std::vector<Vec3> antenna_positions(const Scene& scene);

/// Spherical-wave free-space channel, amplitude lambda / (4 pi d) and phase
/// -2 pi d / lambda per link.
Channel los_channel(const Scene& scene);

Eigen::VectorXcd mrt_beamformer(const Channel& channel, const PhaseVector& phi,
                                double tx_power_w);

double received_power(const Channel& channel, const PhaseVector& phi,
                      const Eigen::VectorXcd& w);

/// (h_r diag(phi) G)(h_r diag(phi) G)^H.
double effective_objective(const Channel& channel, const PhaseVector& phi);

/// C = conj(diag(h_r) G), so effective_objective(phi) = ||C^H phi||^2 and the
/// quadratic form is phi^H (C C^H) phi.
Eigen::MatrixXcd objective_factor(const Channel& channel);

}  // namespace risline
