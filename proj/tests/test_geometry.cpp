#include "oracles.hpp"

#include "risline/geometry.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

using namespace risline;
using oracle::cd;

namespace {

ScenarioConfig single_element(double d_bs, double d_ut) {
  ScenarioConfig sc;
  sc.bs_rows = sc.bs_cols = 1;
  sc.ris_rows = sc.ris_cols = 1;
  sc.bs_position = Vec3(d_bs, 0, 0);
  sc.ut_position = Vec3(0, d_ut, 0);
  return sc;
}

PhaseVector ones(Eigen::Index n) { return PhaseVector(Eigen::VectorXcd::Ones(n), PhaseLevel::Binary); }

PhaseVector random_continuous(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  Eigen::VectorXcd p(n);
  for (auto& x : p) x = std::polar(1.0, u(rng));
  return PhaseVector(p, PhaseLevel::Continuous);
}

}  // namespace

TEST(Scene, TableOneDefaults) {
  const Scene s = build_scene({});
  EXPECT_NEAR(s.wavelength(), 0.010707, 5e-7);
  EXPECT_NEAR(s.bs_array.spacing_m, 5.35e-3, 5e-6);
  EXPECT_EQ(s.num_elements(), 5476);
  EXPECT_EQ(s.num_antennas(), 64);
  EXPECT_NEAR((s.ut_position - s.ris_center).norm(), 50.0, 1e-12);
  EXPECT_NEAR((s.bs_position - s.ris_center).norm(), 20.0, 1e-12);
}

TEST(Scene, MinimalArrays) {
  ScenarioConfig sc;
  sc.bs_rows = sc.bs_cols = sc.ris_rows = sc.ris_cols = 1;
  const Scene s = build_scene(sc);
  EXPECT_EQ(s.num_elements(), 1);
  EXPECT_EQ(s.num_antennas(), 1);
  const Channel ch = los_channel(s);
  EXPECT_EQ(ch.G.rows(), 1);
  EXPECT_EQ(ch.G.cols(), 1);
}

TEST(Scene, RejectsBadValues) {
  ScenarioConfig sc;
  sc.ris_spacing_m = -0.01;
  EXPECT_THROW(build_scene(sc), std::invalid_argument);
  sc = {};
  sc.frequency_hz = 0.0;
  EXPECT_THROW(build_scene(sc), std::invalid_argument);
  sc = {};
  sc.ris_rows = 0;
  EXPECT_THROW(build_scene(sc), std::invalid_argument);
}

TEST(Scene, RejectsNodesOnElements) {
  ScenarioConfig sc;
  sc.ris_rows = sc.ris_cols = 1;
  sc.ut_position = Vec3::Zero();
  EXPECT_THROW(build_scene(sc), std::invalid_argument);
  sc = {};
  sc.ris_rows = sc.ris_cols = 1;
  sc.bs_position = Vec3::Zero();
  EXPECT_THROW(build_scene(sc), std::invalid_argument);
}

TEST(Elements, SingleElementAtCenter) {
  ScenarioConfig sc;
  sc.ris_rows = sc.ris_cols = 1;
  sc.ris_center = Vec3(1.0, 2.0, 3.0);
  sc.bs_position = Vec3(30.0, 2.0, 3.0);
  sc.ut_position = Vec3(10.0, 10.0, 3.0);
  const auto p = element_positions(build_scene(sc));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], Vec3(1.0, 2.0, 3.0));
}

TEST(Elements, TwoByTwoSquare) {
  ScenarioConfig sc;
  sc.ris_rows = sc.ris_cols = 2;
  sc.ris_spacing_m = 0.1;
  const auto p = element_positions(build_scene(sc));
  ASSERT_EQ(p.size(), 4u);
  Vec3 centroid = Vec3::Zero();
  for (const auto& x : p) centroid += x / 4.0;
  EXPECT_LT(centroid.norm(), 1e-15);
  for (const auto& x : p) EXPECT_NEAR((x - centroid).norm(), 0.1 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR((p[0] - p[1]).norm(), 0.1, 1e-15);  // same row
  EXPECT_NEAR((p[0] - p[2]).norm(), 0.1, 1e-15);  // same column
  EXPECT_NEAR((p[0] - p[3]).norm(), 0.1 * std::numbers::sqrt2, 1e-15);
  // Row-major: index 1 is the next column (horizontal axis), index 2 the next row.
  EXPECT_NEAR(p[1].y() - p[0].y(), 0.1, 1e-15);
  EXPECT_NEAR(p[2].z() - p[0].z(), -0.1, 1e-15);
}

TEST(Elements, FullApertureSide) {
  const auto p = element_positions(build_scene({}));
  double lo = 1e9, hi = -1e9;
  for (const auto& x : p) {
    lo = std::min(lo, x.y());
    hi = std::max(hi, x.y());
  }
  EXPECT_NEAR(hi - lo, 0.3908, 5e-5);
  EXPECT_NEAR(hi - lo, 73.0 * kSpeedOfLight / 28e9 / 2.0, 1e-12);
}

TEST(Channel, SingleElementClosedForm) {
  const Scene s = build_scene(single_element(10.0, 10.0));
  const Channel ch = los_channel(s);
  const double amp = s.wavelength() / (40.0 * std::numbers::pi);
  EXPECT_NEAR(std::abs(ch.G(0, 0)), amp, 1e-18);
  EXPECT_NEAR(std::abs(ch.h_r(0)), amp, 1e-18);
  const PhaseVector phi = ones(1);
  const double p = received_power(ch, phi, mrt_beamformer(ch, phi, 1.0));
  EXPECT_TRUE(oracle::close(p, std::pow(amp, 4), 1e-12));
}

TEST(Channel, DoublingDistanceHalvesAmplitude) {
  ScenarioConfig sc;
  sc.ris_rows = sc.ris_cols = 3;
  sc.bs_rows = sc.bs_cols = 2;
  sc.bs_position = Vec3(5.0, 1.0, 0.5);
  sc.ut_position = Vec3(4.0, -2.0, 1.0);
  const Channel a = los_channel(build_scene(sc));
  // Positions scale with the distances, so the geometry is kept and every
  // distance doubles exactly when all coordinates (including the grids) double.
  sc.bs_position = Vec3(10.0, 2.0, 1.0);
  sc.ut_position = Vec3(8.0, -4.0, 2.0);
  sc.ris_spacing_m = 2.0 * build_scene(sc).ris_array.spacing_m;
  sc.bs_spacing_m = 2.0 * build_scene(sc).bs_array.spacing_m;
  const Channel b = los_channel(build_scene(sc));
  for (Eigen::Index i = 0; i < a.G.size(); ++i) {
    EXPECT_NEAR(std::abs(b.G(i)), 0.5 * std::abs(a.G(i)), 1e-15);
  }
  for (Eigen::Index i = 0; i < a.h_r.size(); ++i) {
    EXPECT_NEAR(std::abs(b.h_r(i)), 0.5 * std::abs(a.h_r(i)), 1e-15);
  }
}

TEST(Channel, PhaseIsPeriodicInWavelength) {
  ScenarioConfig sc = single_element(1.0, 1.0);
  const double lambda = build_scene(sc).wavelength();
  sc.bs_position = Vec3(lambda, 0, 0);
  const Channel ch = los_channel(build_scene(sc));
  EXPECT_NEAR(std::arg(ch.G(0, 0)), 0.0, 1e-9);
}

TEST(Channel, EntriesFiniteAndNonzero) {
  ScenarioConfig sc;
  sc.ris_rows = sc.ris_cols = 8;
  const Channel ch = los_channel(build_scene(sc));
  EXPECT_TRUE(ch.G.allFinite());
  EXPECT_TRUE(ch.h_r.allFinite());
  EXPECT_GT(ch.G.cwiseAbs().minCoeff(), 0.0);
  EXPECT_GT(ch.h_r.cwiseAbs().minCoeff(), 0.0);
  EXPECT_EQ(ch.G.rows(), 64);
  EXPECT_EQ(ch.G.cols(), 64);
}

TEST(Channel, SphericalWaveAgainstScalarGeometry) {
  ScenarioConfig sc;
  sc.ris_rows = 2;
  sc.ris_cols = 3;
  sc.bs_rows = 1;
  sc.bs_cols = 2;
  const Scene s = build_scene(sc);
  const Channel ch = los_channel(s);
  const double lambda = s.wavelength();
  const double sp = lambda / 2.0;
  // Independent grid: RIS in the y-z plane, BS at x = 20 with the same axes.
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Vec3 e(0.0, (j - 1.0) * sp, (0.5 - i) * sp);
      for (int k = 0; k < 2; ++k) {
        const Vec3 a(20.0, (k - 0.5) * sp, 0.0);
        const double d = (e - a).norm();
        const cd want = std::polar(lambda / (4 * std::numbers::pi * d), -2 * std::numbers::pi * d / lambda);
        EXPECT_NEAR(std::abs(ch.G(i * 3 + j, k) - want), 0.0, 1e-15);
      }
      const Vec3 ut(50.0 * std::cos(std::numbers::pi / 6), 50.0 * std::sin(std::numbers::pi / 6), 0.0);
      const double d = (e - ut).norm();
      const cd want = std::polar(lambda / (4 * std::numbers::pi * d), -2 * std::numbers::pi * d / lambda);
      EXPECT_NEAR(std::abs(ch.h_r(i * 3 + j) - want), 0.0, 1e-15);
    }
  }
}

TEST(Beamformer, SingleAntennaHasFullPower) {
  std::mt19937_64 rng(3);
  const Channel ch = oracle::random_channel(4, 1, rng);
  const auto w = mrt_beamformer(ch, ones(4), 2.5);
  ASSERT_EQ(w.size(), 1);
  EXPECT_NEAR(std::norm(w(0)), 2.5, 1e-12);
}

TEST(Beamformer, NormEqualsTransmitPower) {
  std::mt19937_64 rng(4);
  const Channel ch = oracle::random_channel(6, 5, rng);
  EXPECT_NEAR(mrt_beamformer(ch, random_continuous(6, rng), 0.7).squaredNorm(), 0.7, 1e-12);
}

TEST(Beamformer, ZeroEffectiveChannelRejected) {
  Channel ch{Eigen::MatrixXcd::Zero(2, 2), Eigen::RowVectorXcd::Ones(2)};
  EXPECT_THROW(mrt_beamformer(ch, ones(2), 1.0), std::invalid_argument);
}

TEST(Beamformer, PowerIdentity) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Channel ch = oracle::random_channel(7, 3, rng);
    const PhaseVector phi = random_continuous(7, rng);
    const double pt = 1.0 + t;
    const double p = received_power(ch, phi, mrt_beamformer(ch, phi, pt));
    EXPECT_TRUE(oracle::close(p, pt * effective_objective(ch, phi), 1e-9));
  }
}

TEST(Beamformer, GlobalPhaseOfReceiveChannelIrrelevant) {
  std::mt19937_64 rng(6);
  Channel ch = oracle::random_channel(5, 4, rng);
  const PhaseVector phi = random_continuous(5, rng);
  const double p0 = received_power(ch, phi, mrt_beamformer(ch, phi, 1.0));
  ch.h_r *= std::polar(1.0, 1.234);
  const double p1 = received_power(ch, phi, mrt_beamformer(ch, phi, 1.0));
  EXPECT_TRUE(oracle::close(p0, p1, 1e-12));
}

TEST(ReceivedPower, ZeroBeamformer) {
  std::mt19937_64 rng(7);
  const Channel ch = oracle::random_channel(3, 2, rng);
  EXPECT_EQ(received_power(ch, ones(3), Eigen::VectorXcd::Zero(2)), 0.0);
}

TEST(ReceivedPower, UnitChannel) {
  Channel ch{Eigen::MatrixXcd::Ones(1, 1), Eigen::RowVectorXcd::Ones(1)};
  EXPECT_DOUBLE_EQ(received_power(ch, ones(1), Eigen::VectorXcd::Ones(1)), 1.0);
}

TEST(ReceivedPower, MatchesScalarLoop) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const Channel ch = oracle::random_channel(4, 3, rng);
    const PhaseVector phi = random_continuous(4, rng);
    Eigen::VectorXcd w(3);
    for (auto& x : w) x = cd(rng() % 7 - 3.0, rng() % 5 - 2.0);
    EXPECT_TRUE(oracle::close(received_power(ch, phi, w),
                              oracle::power(ch, oracle::to_std(phi.phases()), oracle::to_std(w)), 1e-12));
  }
}

TEST(Objective, SingleElement) {
  std::mt19937_64 rng(9);
  const Channel ch = oracle::random_channel(1, 5, rng);
  const double want = std::norm(ch.h_r(0)) * ch.G.row(0).squaredNorm();
  EXPECT_TRUE(oracle::close(effective_objective(ch, random_continuous(1, rng)), want, 1e-12));
}

TEST(Objective, QuadraticFormIdentity) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    const Channel ch = oracle::random_channel(6, 4, rng);
    const PhaseVector phi = random_continuous(6, rng);
    const Eigen::MatrixXcd B = ch.h_r.transpose().asDiagonal() * ch.G;
    const Eigen::MatrixXcd A = B * B.adjoint();
    // h_r diag(phi) G is a row vector, so the form is phi^T A conj(phi).
    const cd q = (phi.phases().transpose() * A * phi.phases().conjugate())(0);
    const double got = effective_objective(ch, phi);
    EXPECT_TRUE(oracle::close(got, q.real(), 1e-10));
    EXPECT_NEAR(q.imag(), 0.0, 1e-10 * got);
    EXPECT_TRUE(oracle::close(got, oracle::objective(ch, oracle::to_std(phi.phases())), 1e-12));
    EXPECT_TRUE(oracle::close(got, (objective_factor(ch).adjoint() * phi.phases()).squaredNorm(), 1e-12));
  }
}

TEST(Objective, GlobalRotationInvariance) {
  std::mt19937_64 rng(11);
  const Channel ch = oracle::random_channel(8, 3, rng);
  const PhaseVector phi = random_continuous(8, rng);
  const PhaseVector rotated(phi.phases() * std::polar(1.0, 0.77), PhaseLevel::Continuous);
  EXPECT_TRUE(oracle::close(effective_objective(ch, phi), effective_objective(ch, rotated), 1e-9));
}

TEST(Objective, SimultaneousPermutationInvariance) {
  std::mt19937_64 rng(12);
  const Channel ch = oracle::random_channel(6, 3, rng);
  const PhaseVector phi = random_continuous(6, rng);
  std::vector<int> perm{3, 0, 5, 1, 4, 2};
  Channel pc{Eigen::MatrixXcd(6, 3), Eigen::RowVectorXcd(6)};
  Eigen::VectorXcd pp(6);
  for (int i = 0; i < 6; ++i) {
    pc.G.row(i) = ch.G.row(perm[i]);
    pc.h_r(i) = ch.h_r(perm[i]);
    pp(i) = phi.phases()(perm[i]);
  }
  EXPECT_TRUE(oracle::close(effective_objective(ch, phi),
                            effective_objective(pc, PhaseVector(pp, PhaseLevel::Continuous)), 1e-12));
}

TEST(Objective, InverseSquareLaw) {
  const double base = [] {
    const Channel ch = los_channel(build_scene(single_element(10.0, 7.0)));
    return received_power(ch, ones(1), mrt_beamformer(ch, ones(1), 1.0));
  }();
  for (double k : {0.5, 2.0, 3.7}) {
    for (double l : {0.25, 1.0, 5.0}) {
      const Channel ch = los_channel(build_scene(single_element(10.0 * k, 7.0 * l)));
      const double p = received_power(ch, ones(1), mrt_beamformer(ch, ones(1), 1.0));
      EXPECT_TRUE(oracle::close(p, base / (k * k * l * l), 1e-9));
    }
  }
}

TEST(PhaseVector, ValidatesConstellation) {
  Eigen::VectorXcd p(2);
  p << 1.0, cd(0.0, 1.0);
  EXPECT_THROW(PhaseVector(p, PhaseLevel::Binary), std::invalid_argument);
  EXPECT_NO_THROW(PhaseVector(p, PhaseLevel::QuaternaryAxis));
  EXPECT_THROW(PhaseVector(p, PhaseLevel::Quaternary), std::invalid_argument);
  p << std::polar(1.0, std::numbers::pi / 4), std::polar(1.0, 5 * std::numbers::pi / 4);
  EXPECT_NO_THROW(PhaseVector(p, PhaseLevel::Quaternary));
  p << 1.1, 1.0;
  EXPECT_THROW(PhaseVector(p, PhaseLevel::Continuous), std::invalid_argument);
}

TEST(Scene, MovingTheUserKeepsTheRay) {
  const Scene s = build_scene({});
  const Scene t = s.with_ut_distance(80.0);
  EXPECT_NEAR((t.ut_position - t.ris_center).norm(), 80.0, 1e-12);
  EXPECT_NEAR((t.ut_position.normalized() - s.ut_position.normalized()).norm(), 0.0, 1e-15);
  EXPECT_THROW(s.with_ut_distance(-1.0), std::invalid_argument);
}
