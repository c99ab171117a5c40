#include "bgrid/scenario.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "test_util.hpp"

namespace bgrid {
namespace {

using bgrid::testing::fresh_dir;
using bgrid::testing::read_file;

ScenarioConfig quick_config() {
  ScenarioConfig cfg;
  cfg.sim.duration_s = 3.0;
  cfg.sim.seed = 11;
  cfg.world.seed = 12;
  return cfg;
}

TEST(Config, DefaultsMatchReferenceScenario) {
  const ScenarioConfig cfg;
  EXPECT_EQ(cfg.grid.size(), 400);
  EXPECT_EQ(cfg.sensor.pixels, 15);
  EXPECT_NEAR(cfg.sensor.fov, 28.0 * M_PI / 180.0, 1e-12);
  EXPECT_DOUBLE_EQ(cfg.sensor.noise_var, 0.04);
  EXPECT_EQ(cfg.scan_count(), 500);
  EXPECT_NEAR(cfg.start_pose().theta, M_PI / 2, 1e-12);
}

TEST(Config, ParsesOverridesAndRejectsUnknownKeys) {
  const ScenarioConfig cfg = load_config(R"({
    "grid": {"extent_x": 1.0, "extent_y": 1.0, "voxel_size": 0.5},
    "mapper": {"kind": "ism", "bins": 51},
    "sim": {"duration_s": 10, "seed": 42}
  })");
  EXPECT_EQ(cfg.grid.size(), 4);
  EXPECT_EQ(cfg.mapper.kind, MapperKind::kLogOdds);
  EXPECT_EQ(cfg.mapper.bins, 51);
  EXPECT_EQ(cfg.sim.seed, 42u);
  // Grid centered on the origin.
  EXPECT_DOUBLE_EQ(cfg.grid.origin_x, -0.5);

  try {
    load_config(R"({"sensor": {"fovdeg": 28}})");
    FAIL() << "unknown key accepted";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("sensor.fovdeg"), std::string::npos);
  }
  EXPECT_THROW(load_config(R"({"mapper": {"kind": "other"}})"), std::invalid_argument);
  EXPECT_THROW(load_config(R"({"grid": {"voxel_size": -1}})"), std::invalid_argument);
  EXPECT_THROW(load_config("not json"), std::invalid_argument);
  EXPECT_THROW(load_config(R"({"simulate": {}})"), std::invalid_argument);
}

TEST(GenerateWorld, DeterministicWithFreeDisk) {
  const GridSpec spec = GridSpec::make(2.0, 2.0, 0.1, -1.0, -1.0);
  const GroundTruthMap a = generate_world(spec, 33, 0.3);
  const GroundTruthMap b = generate_world(spec, 33, 0.3);
  EXPECT_EQ(a.occupancy, b.occupancy);
  a.validate();

  int occupied = 0;
  for (int i = 0; i < spec.size(); ++i) {
    const Point c = voxel_center(spec, i);
    if (std::hypot(c.x, c.y) <= 0.3) {
      EXPECT_EQ(a.occupancy[i], 0.0);
    } else {
      occupied += a.occupancy[i] == 1.0;
    }
  }
  // Roughly half the voxels outside the free disk are occupied (3-sigma
  // binomial band around 0.5 of ~372 voxels).
  EXPECT_NEAR(occupied / 372.0, 0.5, 3 * 0.5 / std::sqrt(372.0));

  const GroundTruthMap everywhere_free = generate_world(spec, 33, 2.0);
  for (double v : everywhere_free.occupancy) EXPECT_EQ(v, 0.0);
}

TEST(GenerateWorld, SeedChangesTheMap) {
  const GridSpec spec = GridSpec::make(2.0, 2.0, 0.1, -1.0, -1.0);
  EXPECT_NE(generate_world(spec, 1, 0.3).occupancy, generate_world(spec, 2, 0.3).occupancy);
}

TEST(ScanSequence, LengthAndRotation) {
  ScenarioConfig cfg = quick_config();
  const GroundTruthMap truth = generate_world(cfg.grid, cfg.world.seed, cfg.world.free_radius);
  const auto scans = simulate_scan_sequence(truth, cfg);
  ASSERT_EQ(static_cast<int>(scans.size()), cfg.scan_count());
  ASSERT_EQ(static_cast<int>(scans[0].size()), cfg.sensor.pixels);

  const double omega = cfg.robot.omega_deg_per_s * M_PI / 180.0;
  const double dt = 1.0 / cfg.sensor.rate;
  EXPECT_NEAR(scans[1][0].pose.theta - scans[0][0].pose.theta, omega * dt, 1e-12);
}

TEST(RunScenario, ZeroDurationKeepsThePrior) {
  ScenarioConfig cfg = quick_config();
  cfg.sim.duration_s = 0.0;
  const RunRecord rec = run_scenario(cfg);
  EXPECT_EQ(rec.errors.size(), 0u);
  // Uniform prior against a binary truth: half a unit of error per voxel.
  EXPECT_NEAR(rec.final_error, cfg.grid.size() / 2.0, 1e-6);
}

TEST(RunScenario, RecordIsReproducible) {
  const ScenarioConfig cfg = quick_config();
  const RunRecord a = run_scenario(cfg);
  const RunRecord b = run_scenario(cfg);
  EXPECT_EQ(a.final_error, b.final_error);
  EXPECT_EQ(a.errors.total_abs_error, b.errors.total_abs_error);
  EXPECT_EQ(a.final_means, b.final_means);
  EXPECT_EQ(a.rng_algorithm, "mt19937_64/boxmuller");
}

TEST(RunScenario, WritesArtifacts) {
  const auto dir = fresh_dir("scenario_artifacts");
  ScenarioConfig cfg = quick_config();
  cfg.sim.duration_s = 1.0;
  run_scenario(cfg, dir.string());
  EXPECT_TRUE(std::filesystem::exists(dir / "error_series.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "map_final.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "map_final.pgm"));
  EXPECT_TRUE(std::filesystem::exists(dir / "run.json"));

  const std::string series = read_file(dir / "error_series.csv");
  EXPECT_EQ(series.substr(0, 8), "t,error\n");
  EXPECT_EQ(series.find('\r'), std::string::npos);  // LF only

  const std::string pgm = read_file(dir / "map_final.pgm");
  EXPECT_EQ(pgm.substr(0, 3), "P5\n");
  // Header plus one byte per voxel.
  EXPECT_EQ(pgm.size(), std::string("P5\n20 20\n255\n").size() + 400);
}

TEST(IsmSweep, ThirtySevenRowsSharingOneScanStream) {
  ScenarioConfig cfg = quick_config();
  cfg.sim.duration_s = 1.0;
  const auto dir = fresh_dir("ism_sweep");
  const auto rows = run_ism_sweep(cfg, dir.string(), 2);
  ASSERT_EQ(rows.size(), 37u);
  EXPECT_EQ(rows.back().config_id, "crm");
  EXPECT_FALSE(rows.back().ism.has_value());
  for (std::size_t i = 0; i < 36; ++i) {
    EXPECT_TRUE(rows[i].ism.has_value());
  }
  const std::string bars = read_file(dir / "bars.csv");
  EXPECT_EQ(static_cast<int>(std::count(bars.begin(), bars.end(), '\n')), 38);  // header + 37
}

TEST(NoiseSweep, TwelvePairedRuns) {
  ScenarioConfig cfg = quick_config();
  cfg.sim.duration_s = 1.0;
  const auto dir = fresh_dir("noise_sweep");
  const auto rows = run_noise_sweep(cfg, dir.string(), 2);
  ASSERT_EQ(rows.size(), 12u);
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    EXPECT_DOUBLE_EQ(rows[i].noise_var, rows[i + 1].noise_var);
    EXPECT_EQ(rows[i].kind, MapperKind::kDensity);
    EXPECT_EQ(rows[i + 1].kind, MapperKind::kLogOdds);
    EXPECT_EQ(rows[i].errors.size(), rows[i + 1].errors.size());
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "noise_sweep.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "error_series_v0_crm.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "error_series_v5_ism.csv"));
}

TEST(MonteCarlo, RowsCarryDerivedSeeds) {
  ScenarioConfig cfg = quick_config();
  cfg.sim.duration_s = 0.5;
  const auto dir = fresh_dir("montecarlo");
  const auto rows = run_montecarlo(cfg, 4, dir.string(), 2);
  ASSERT_EQ(rows.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(rows[i].map_index, i);
    EXPECT_EQ(rows[i].world_seed, cfg.world.seed + static_cast<std::uint64_t>(i));
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "montecarlo.csv"));
}

TEST(MonteCarlo, OutputIndependentOfJobCount) {
  ScenarioConfig cfg = quick_config();
  cfg.sim.duration_s = 0.5;
  const auto serial_dir = fresh_dir("mc_serial");
  const auto parallel_dir = fresh_dir("mc_parallel");
  run_montecarlo(cfg, 4, serial_dir.string(), 1);
  run_montecarlo(cfg, 4, parallel_dir.string(), 4);
  EXPECT_EQ(read_file(serial_dir / "montecarlo.csv"), read_file(parallel_dir / "montecarlo.csv"));
}

TEST(RunPlan, ProducesArtifactsAndRespectsGoal) {
  ScenarioConfig cfg = quick_config();
  cfg.sim.duration_s = 2.0;
  const auto dir = fresh_dir("plan");
  const PlanRunResult result = run_plan(cfg, {0.5, 0.5}, 3, dir.string());
  ASSERT_FALSE(result.plan.chosen.waypoints.empty());
  const Pose end = result.plan.chosen.waypoints.back();
  EXPECT_LE(std::hypot(end.x - 0.5, end.y - 0.5), 0.1 + 1e-12);
  EXPECT_TRUE(std::filesystem::exists(dir / "plan.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "candidates.csv"));

  EXPECT_THROW(run_plan(cfg, {5.0, 0.0}, 3, ""), std::invalid_argument);
}

}  // namespace
}  // namespace bgrid
