#include "risline/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace risline {
namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kCoincidentTol = 1e-9;

bool on_constellation(std::complex<double> z, PhaseLevel level) {
  using std::numbers::pi;
  switch (level) {
    case PhaseLevel::Continuous:
      return true;
    case PhaseLevel::Binary:
      return std::abs(z - 1.0) <= kUnitTol || std::abs(z + 1.0) <= kUnitTol;
    case PhaseLevel::Quaternary:
    case PhaseLevel::QuaternaryAxis: {
      const double offset = level == PhaseLevel::Quaternary ? pi / 4.0 : 0.0;
      for (int k = 0; k < 4; ++k) {
        if (std::abs(z - std::polar(1.0, offset + k * pi / 2.0)) <= kUnitTol) return true;
      }
      return false;
    }
  }
  return false;
}

std::vector<Vec3> planar_grid(const ArrayLayout& layout, const Vec3& center,
                              const Orientation& axes) {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(layout.size()));
  const double row_mid = 0.5 * (layout.rows - 1);
  const double col_mid = 0.5 * (layout.cols - 1);
  for (int i = 0; i < layout.rows; ++i) {
    for (int j = 0; j < layout.cols; ++j) {
      out.push_back(center + (j - col_mid) * layout.spacing_m * axes.horizontal +
                    (row_mid - i) * layout.spacing_m * axes.vertical);
    }
  }
  return out;
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void require_dims(int rows, int cols, const char* what) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument(std::string(what) + " dimensions must be >= 1");
  }
}

}  // namespace

PhaseVector::PhaseVector(Eigen::VectorXcd phases, PhaseLevel level)
    : phases_(std::move(phases)), level_(level) {
  for (Eigen::Index i = 0; i < phases_.size(); ++i) {
    const auto z = phases_[i];
    if (std::abs(std::abs(z) - 1.0) > kUnitTol || !on_constellation(z, level_)) {
      throw std::invalid_argument("phase entry " + std::to_string(i) +
                                  " is not on the requested constellation");
    }
  }
}

Scene Scene::with_ut_distance(double distance_m) const {
  require_positive(distance_m, "UT distance");
  const Vec3 ray = ut_position - ris_center;
  if (ray.norm() <= 0.0) throw std::invalid_argument("UT sits on the RIS center");
  Scene moved = *this;
  moved.ut_position = ris_center + distance_m * ray.normalized();
  return moved;
}

Scene build_scene(const ScenarioConfig& config) {
  require_positive(config.frequency_hz, "frequency");
  require_positive(config.tx_power_w, "transmit power");
  require_dims(config.bs_rows, config.bs_cols, "BS array");
  require_dims(config.ris_rows, config.ris_cols, "RIS array");

  Scene scene;
  scene.frequency_hz = config.frequency_hz;
  scene.tx_power_w = config.tx_power_w;
  const double half_wave = 0.5 * scene.wavelength();

  scene.bs_array = {config.bs_rows, config.bs_cols, config.bs_spacing_m.value_or(half_wave)};
  scene.ris_array = {config.ris_rows, config.ris_cols, config.ris_spacing_m.value_or(half_wave)};
  require_positive(scene.bs_array.spacing_m, "BS spacing");
  require_positive(scene.ris_array.spacing_m, "RIS spacing");

  scene.ris_center = config.ris_center.value_or(Vec3::Zero());
  const Orientation& axes = scene.ris_orientation;

  if (config.bs_position) {
    scene.bs_position = *config.bs_position;
  } else {
    require_positive(config.bs_distance_m, "BS distance");
    scene.bs_position = scene.ris_center + config.bs_distance_m * axes.normal;
  }
  if (config.ut_position) {
    scene.ut_position = *config.ut_position;
  } else {
    require_positive(config.ut_distance_m, "UT distance");
    const double angle = config.ut_angle_deg * std::numbers::pi / 180.0;
    scene.ut_position = scene.ris_center + config.ut_distance_m * (std::cos(angle) * axes.normal +
                                                                   std::sin(angle) * axes.horizontal);
  }

  for (const Vec3& p : element_positions(scene)) {
    if ((p - scene.ut_position).norm() < kCoincidentTol) {
      throw std::invalid_argument("UT coincides with a RIS element");
    }
    if ((p - scene.bs_position).norm() < kCoincidentTol) {
      throw std::invalid_argument("BS coincides with a RIS element");
    }
  }
  return scene;
}

std::vector<Vec3> element_positions(const Scene& scene) {
  return planar_grid(scene.ris_array, scene.ris_center, scene.ris_orientation);
}

// BS panel shares the RIS in-plane axes (broadside toward the RIS by default).
std::vector<Vec3> antenna_positions(const Scene& scene) {
  return planar_grid(scene.bs_array, scene.bs_position, scene.ris_orientation);
}

Channel los_channel(const Scene& scene) {
  const double lambda = scene.wavelength();
  const auto path = [lambda](double d) {
    if (!(d > 0.0)) throw std::invalid_argument("zero propagation distance");
    return std::polar(lambda / (4.0 * std::numbers::pi * d), -2.0 * std::numbers::pi * d / lambda);
  };

  const auto elements = element_positions(scene);
  const auto antennas = antenna_positions(scene);
  const auto n = static_cast<Eigen::Index>(elements.size());
  const auto m = static_cast<Eigen::Index>(antennas.size());

  Channel ch;
  ch.G.resize(n, m);
  ch.h_r.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < m; ++k) {
      ch.G(i, k) = path((elements[i] - antennas[k]).norm());
    }
    ch.h_r[i] = path((elements[i] - scene.ut_position).norm());
  }
  return ch;
}

namespace {

Eigen::RowVectorXcd cascaded(const Channel& channel, const PhaseVector& phi) {
  if (phi.size() != channel.num_elements() || channel.h_r.size() != channel.num_elements()) {
    throw std::invalid_argument("phase vector / channel dimension mismatch");
  }
  return channel.h_r.cwiseProduct(phi.phases().transpose()) * channel.G;
}

}  // namespace

Eigen::VectorXcd mrt_beamformer(const Channel& channel, const PhaseVector& phi,
                                double tx_power_w) {
  const Eigen::VectorXcd g = cascaded(channel, phi).adjoint();
  const double norm = g.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("effective channel is zero");
  return std::sqrt(tx_power_w) * g / norm;
}

double received_power(const Channel& channel, const PhaseVector& phi, const Eigen::VectorXcd& w) {
  const auto g = cascaded(channel, phi);
  if (w.size() != g.size()) throw std::invalid_argument("beamformer dimension mismatch");
  return std::norm((g * w)(0));
}

double effective_objective(const Channel& channel, const PhaseVector& phi) {
  return cascaded(channel, phi).squaredNorm();
}

Eigen::MatrixXcd objective_factor(const Channel& channel) {
  return (channel.h_r.transpose().asDiagonal() * channel.G).conjugate();
}

}  // namespace risline
