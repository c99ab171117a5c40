#include "bgrid/log_odds.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "bgrid/rng.hpp"
#include "bgrid/sensor.hpp"

namespace bgrid {
namespace {

const GridSpec kGrid = GridSpec::make(2.0, 2.0, 0.1, -1.0, -1.0);

IsmParams reference_params() { return IsmParams{}; }  // 0.1 / 0.1 / 0.45 / 0.55

TEST(IsmValue, PiecewiseBreakpoints) {
  const IsmParams p = reference_params();
  const double z = 0.5;
  EXPECT_DOUBLE_EQ(ism_value(z, z, p, 1.0), 0.5);             // ramp midpoint
  EXPECT_DOUBLE_EQ(ism_value(z - 0.2, z, p, 1.0), p.q_l);     // before the ramp
  EXPECT_DOUBLE_EQ(ism_value(z + 0.5, z, p, 1.0), 0.5);       // beyond the informed zone
  EXPECT_DOUBLE_EQ(ism_value(z + 0.1, z, p, 1.0), p.q_h);     // on the plateau
  EXPECT_NEAR(ism_value(z + 0.025, z, p, 1.0), 0.525, 1e-12); // inside the ramp
}

TEST(IsmValue, RampIsLinear) {
  IsmParams p = reference_params();
  p.r_ramp = 0.3;
  const double z = 0.4;
  const double lo = z - 0.15, hi = z + 0.15;
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double d = lo + s * (hi - lo);
    EXPECT_NEAR(ism_value(d, z, p, 1.0), p.q_l + s * (p.q_h - p.q_l), 1e-12);
  }
}

TEST(IsmParams, Validation) {
  IsmParams p = reference_params();
  p.q_l = 0.6;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = reference_params();
  p.r_ramp = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(LogOddsMap, MeanVarianceFromLogOdds) {
  LogOddsMap map = LogOddsMap::prior(kGrid);
  EXPECT_DOUBLE_EQ(map.occupancy_mean(0), 0.5);
  EXPECT_DOUBLE_EQ(map.occupancy_variance(0), 0.25);

  map.logodds[1] = std::log(9.0);
  EXPECT_NEAR(map.occupancy_mean(1), 0.9, 1e-12);
  EXPECT_NEAR(map.occupancy_variance(1), 0.09, 1e-12);

  map.logodds[2] = LogOddsMap::kMaxLogOdds;
  EXPECT_NEAR(map.occupancy_mean(2), 1.0, 1e-12);
  EXPECT_NEAR(map.occupancy_variance(2), 0.0, 1e-12);
}

TEST(ApplyIsm, SingleUpdateMatchesLogitArithmetic) {
  const SensorSpec sensor;
  const IsmParams p = reference_params();
  LogOddsMap map = LogOddsMap::prior(kGrid);
  const PixelCone cone = trace_ray(kGrid, Pose::make(0.0, 0.0, M_PI / 2), 7, sensor);
  ASSERT_FALSE(cone.empty());

  // Reading far beyond the first voxel: it falls in the q_l zone.
  apply_ism_measurement(map, cone, 0.9, p, sensor);
  const int g = cone.local_to_global(1);
  EXPECT_NEAR(map.logodds[g], std::log(0.45 / 0.55), 1e-12);

  // The voxel on the q_h plateau just past the reading accumulates
  // log(q_h / (1 - q_h)) per identical update; the one at d = z sits on the
  // ramp midpoint and never moves.
  LogOddsMap repeat = LogOddsMap::prior(kGrid);
  const double z = cone.center_range[2];
  ASSERT_GT(cone.size(), 4);
  for (int k = 1; k <= 3; ++k) {
    apply_ism_measurement(repeat, cone, z, p, sensor);
    EXPECT_NEAR(repeat.logodds[cone.local_to_global(4)], k * std::log(0.55 / 0.45), 1e-9);
    EXPECT_NEAR(repeat.logodds[cone.local_to_global(3)], 0.0, 1e-9);
  }
}

TEST(ApplyIsm, NeutralCurveNeverChangesTheMap) {
  const SensorSpec sensor;
  IsmParams p = reference_params();
  p.q_l = 0.5;
  p.q_h = 0.5;
  LogOddsMap map = LogOddsMap::prior(kGrid);
  Rng rng(4);
  const GroundTruthMap truth = GroundTruthMap::free_map(kGrid);
  logodds_update(map, simulate_scan(truth, Pose::make(0, 0, 1.0), sensor, rng), p, sensor);
  for (double l : map.logodds) EXPECT_DOUBLE_EQ(l, 0.0);
}

TEST(ApplyIsm, ScansAreAdditiveBeforeClamping) {
  const SensorSpec sensor;
  const IsmParams p = reference_params();
  const GroundTruthMap truth = GroundTruthMap::free_map(kGrid);

  Rng rng(14);
  std::vector<Scan> scans;
  for (int k = 0; k < 6; ++k) {
    scans.push_back(simulate_scan(truth, Pose::make(0, 0, 0.4 * k), sensor, rng));
  }

  LogOddsMap once = LogOddsMap::prior(kGrid);
  for (const Scan& s : scans) logodds_update(once, s, p, sensor);

  LogOddsMap split_a = LogOddsMap::prior(kGrid);
  for (int k = 0; k < 3; ++k) logodds_update(split_a, scans[k], p, sensor);
  for (int k = 3; k < 6; ++k) logodds_update(split_a, scans[k], p, sensor);

  for (int i = 0; i < kGrid.size(); ++i) {
    EXPECT_NEAR(once.logodds[i], split_a.logodds[i], 1e-12);
  }
}

TEST(ApplyIsm, MirroredCurveNegatesIncrements) {
  const SensorSpec sensor;
  IsmParams p = reference_params();
  IsmParams mirrored = p;
  mirrored.q_l = 1.0 - p.q_h;
  mirrored.q_h = 1.0 - p.q_l;

  const PixelCone cone = trace_ray(kGrid, Pose::make(0.05, 0.0, M_PI / 2), 7, sensor);
  LogOddsMap a = LogOddsMap::prior(kGrid);
  LogOddsMap b = LogOddsMap::prior(kGrid);
  apply_ism_measurement(a, cone, 0.62, p, sensor);
  apply_ism_measurement(b, cone, 0.62, mirrored, sensor);
  for (int i = 0; i < kGrid.size(); ++i) {
    EXPECT_NEAR(a.logodds[i], -b.logodds[i], 1e-12);
  }
}

TEST(ApplyIsm, SaturatesAtClamp) {
  const SensorSpec sensor;
  IsmParams p = reference_params();
  p.q_h = 0.9;
  p.q_l = 0.1;
  LogOddsMap map = LogOddsMap::prior(kGrid);
  const PixelCone cone = trace_ray(kGrid, Pose::make(0.0, 0.0, M_PI / 2), 7, sensor);
  for (int k = 0; k < 100; ++k) apply_ism_measurement(map, cone, 0.15, p, sensor);
  const int g = cone.local_to_global(1);
  EXPECT_LE(std::abs(map.logodds[g]), LogOddsMap::kMaxLogOdds);
}

TEST(SweepConfigs, ThirtySixLexicographicModels) {
  const auto configs = ism_sweep_configs();
  ASSERT_EQ(configs.size(), 36u);
  EXPECT_DOUBLE_EQ(configs[0].q_h - 0.5, 0.05);
  EXPECT_DOUBLE_EQ(configs[0].r_ramp, 0.05);
  EXPECT_DOUBLE_EQ(configs[0].r_top, 0.05);

  int with_wide_offset = 0;
  for (const IsmParams& p : configs) {
    EXPECT_NEAR(p.q_h - 0.5, 0.5 - p.q_l, 1e-15);  // symmetric offsets
    p.validate();
    with_wide_offset += (std::abs(p.q_h - 0.9) < 1e-15 && std::abs(p.q_l - 0.1) < 1e-15);
  }
  EXPECT_EQ(with_wide_offset, 12);

  // Lexicographic: q offset outermost, r_top innermost.
  EXPECT_DOUBLE_EQ(configs[1].r_top, 0.1);
  EXPECT_DOUBLE_EQ(configs[3].r_ramp, 0.1);
  EXPECT_DOUBLE_EQ(configs[12].q_h, 0.7);
}

}  // namespace
}  // namespace bgrid
