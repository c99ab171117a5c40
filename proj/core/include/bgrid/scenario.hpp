#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bgrid/belief.hpp"
#include "bgrid/grid.hpp"
#include "bgrid/log_odds.hpp"
#include "bgrid/mapper.hpp"
#include "bgrid/metrics.hpp"
#include "bgrid/planner.hpp"
#include "bgrid/sensor.hpp"

namespace bgrid {

enum class MapperKind { kDensity, kLogOdds };

const char* mapper_kind_name(MapperKind kind);  // "crm" / "ism"

/// One experiment scenario: the rotating-robot simulation everything in the
/// CLI is built on. Loaded from a strict JSON document (unknown keys are
/// errors) or defaulted to the reference setup: 2m x 2m grid of 0.1 m
/// voxels, robot at (0, 0, 90deg) turning at 15 deg/s for 50 s, 1 m / 28deg
/// / 15 px / 10 Hz sensor with range noise variance 0.04.
struct ScenarioConfig {
  GridSpec grid = GridSpec::make(2.0, 2.0, 0.1, -1.0, -1.0);
  SensorSpec sensor;

  struct Robot {
    double x = 0.0;
    double y = 0.0;
    double theta_deg = 90.0;
    double omega_deg_per_s = 15.0;
  } robot;

  struct Sim {
    double duration_s = 50.0;
    std::uint64_t seed = 1;
  } sim;

  struct Mapper {
    MapperKind kind = MapperKind::kDensity;
    int bins = VoxelBelief::kDefaultBins;
    IsmParams ism_params;
  } mapper;

  struct World {
    std::uint64_t seed = 1;
    double free_radius = 0.3;  // meters around the world origin forced free
  } world;

  int scan_count() const { return static_cast<int>(sim.duration_s * sensor.rate); }
  Pose start_pose() const;

  void validate() const;  // throws std::invalid_argument with a field path
};

/// Parses a config document; message carries the offending field path.
ScenarioConfig load_config(const std::string& json_text);
ScenarioConfig load_config_file(const std::string& path);

/// Everything one run produces. Given (config, seed) the record is fully
/// deterministic except for wall_time_s, which never reaches a CSV.
struct RunRecord {
  std::string run_id;
  MapperKind kind = MapperKind::kDensity;
  ErrorSeries errors;
  std::vector<double> final_means;
  std::vector<double> final_variances;
  double final_error = 0.0;
  double inconsistency = 0.0;
  UpdateStats stats;
  std::string rng_algorithm;
  double wall_time_s = 0.0;
};

/// Random world: independent Bernoulli(0.5) per voxel, except voxels whose
/// centers lie within free_radius of the world origin, which are free.
GroundTruthMap generate_world(const GridSpec& spec, std::uint64_t seed, double free_radius);

/// The full deterministic measurement sequence of a scenario: the robot spins
/// in place at omega; one scan per 1/rate step, scan k taken at
/// theta0 + omega * k / rate.
std::vector<Scan> simulate_scan_sequence(const GroundTruthMap& truth,
                                         const ScenarioConfig& cfg);

/// Runs one mapper over a prebuilt scan sequence. Shared scan sequences are
/// what make paired method comparisons measure the mapper alone.
RunRecord run_mapper(const GroundTruthMap& truth, const std::vector<Scan>& scans,
                     const ScenarioConfig& cfg, MapperKind kind);

/// Generates the world and scans from the config seeds and runs the
/// configured mapper. With out_dir nonempty, writes error_series.csv,
/// map_final.csv, map_final.pgm and run.json.
RunRecord run_scenario(const ScenarioConfig& cfg, const std::string& out_dir = "");

struct SweepRow {
  std::string config_id;
  std::optional<IsmParams> ism;  // empty for the density mapper row
  double final_error = 0.0;
  double inconsistency = 0.0;
};

/// The 36 inverse-model configs plus one density-mapper run, all on one
/// world and one scan stream. Writes bars.csv. jobs > 1 runs mappers in
/// parallel; output is independent of the job count.
std::vector<SweepRow> run_ism_sweep(const ScenarioConfig& cfg, const std::string& out_dir,
                                    int jobs = 1);

struct NoiseRow {
  double noise_var = 0.0;
  MapperKind kind = MapperKind::kDensity;
  ErrorSeries errors;
  double final_error = 0.0;
};

/// Both mappers at noise variances {0.1, 0.04, 0.01, 0.0025, 0.0004, 0.0001}
/// on one world, scan streams shared per variance. Writes noise_sweep.csv
/// and per-run error series files.
std::vector<NoiseRow> run_noise_sweep(const ScenarioConfig& cfg, const std::string& out_dir,
                                      int jobs = 1);

struct MonteCarloRow {
  int map_index = 0;
  std::uint64_t world_seed = 0;
  double error_density = 0.0;
  double error_logodds = 0.0;
  double inconsistency_density = 0.0;
  double inconsistency_logodds = 0.0;
};

/// n_maps random worlds (seeds = config seeds + map index), both mappers per
/// world on shared scans. Writes montecarlo.csv.
std::vector<MonteCarloRow> run_montecarlo(const ScenarioConfig& cfg, int n_maps,
                                          const std::string& out_dir, int jobs = 1);

struct PlanRunResult {
  PlanResult plan;
  RunRecord warmup;
};

/// Mapping warm-up per the config, then RRT candidates from the robot pose
/// to goal and cost-based selection. Writes plan.csv and candidates.csv.
/// Throws std::runtime_error when no candidate reaches the goal.
PlanRunResult run_plan(const ScenarioConfig& cfg, const Point& goal, int max_candidates,
                       const std::string& out_dir, const RrtOptions& rrt = {});

/// Writes t,error rows.
void write_error_series_csv(const std::string& path, const ErrorSeries& series);

}  // namespace bgrid
