#include "bgrid/scenario.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "bgrid/csv.hpp"
#include "bgrid/map_io.hpp"

namespace bgrid {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

/// Runs fn(0..n-1) on up to `jobs` threads. Tasks own disjoint output slots,
/// so results are independent of the job count and completion order.
void parallel_for(int jobs, int n, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  const int worker_count = std::min(jobs, n);
  workers.reserve(worker_count);
  for (int w = 0; w < worker_count; ++w) {
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("config: unknown key '" + path + item.key() + "'");
    }
  }
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw std::invalid_argument("config: '" + path + key + "' must be a number");
  }
  return obj[key].get<double>();
}

std::uint64_t get_seed(const json& obj, const std::string& path, const char* key,
                       std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned() && !obj[key].is_number_integer()) {
    throw std::invalid_argument("config: '" + path + key + "' must be an integer");
  }
  return obj[key].get<std::uint64_t>();
}

json config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["grid"] = {{"extent_x", cfg.grid.extent_x},
               {"extent_y", cfg.grid.extent_y},
               {"voxel_size", cfg.grid.voxel_size}};
  j["sensor"] = {{"max_range", cfg.sensor.max_range},
                 {"fov_deg", cfg.sensor.fov / kDegToRad},
                 {"pixels", cfg.sensor.pixels},
                 {"rate_hz", cfg.sensor.rate},
                 {"noise_var", cfg.sensor.noise_var}};
  j["robot"] = {{"x", cfg.robot.x},
                {"y", cfg.robot.y},
                {"theta_deg", cfg.robot.theta_deg},
                {"omega_deg_per_s", cfg.robot.omega_deg_per_s}};
  j["sim"] = {{"duration_s", cfg.sim.duration_s}, {"seed", cfg.sim.seed}};
  j["mapper"] = {{"kind", mapper_kind_name(cfg.mapper.kind)},
                 {"bins", cfg.mapper.bins},
                 {"ism_params",
                  {{"r_ramp", cfg.mapper.ism_params.r_ramp},
                   {"r_top", cfg.mapper.ism_params.r_top},
                   {"q_l", cfg.mapper.ism_params.q_l},
                   {"q_h", cfg.mapper.ism_params.q_h},
                   {"prior_logodds", cfg.mapper.ism_params.prior_logodds}}}};
  j["world"] = {{"seed", cfg.world.seed}, {"free_radius", cfg.world.free_radius}};
  return j;
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

struct DensityRun {
  MapBelief map;
  RunRecord record;
};

struct LogOddsRun {
  LogOddsMap map;
  RunRecord record;
};

RunRecord make_record(MapperKind kind) {
  RunRecord rec;
  rec.kind = kind;
  rec.run_id = mapper_kind_name(kind);
  rec.rng_algorithm = std::string(Rng::algorithm());
  return rec;
}

DensityRun run_density(const GroundTruthMap& truth, const std::vector<Scan>& scans,
                       const ScenarioConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  DensityRun run{MapBelief::uniform_prior(cfg.grid, cfg.mapper.bins),
                 make_record(MapperKind::kDensity)};
  UpdateOptions options;
  options.stats = &run.record.stats;
  for (std::size_t k = 0; k < scans.size(); ++k) {
    update_map(run.map, scans[k], cfg.sensor, options);
    run.record.errors.push(static_cast<double>(k) / cfg.sensor.rate,
                           map_error(run.map.mean_cache, truth));
  }
  run.record.final_means = run.map.means();
  run.record.final_variances = run.map.variances();
  run.record.final_error =
      run.record.errors.size() ? run.record.errors.total_abs_error.back()
                               : map_error(run.record.final_means, truth);
  run.record.inconsistency =
      inconsistency(run.record.final_means, run.record.final_variances, truth);
  run.record.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

LogOddsRun run_logodds(const GroundTruthMap& truth, const std::vector<Scan>& scans,
                       const ScenarioConfig& cfg, const IsmParams& params) {
  const auto start = std::chrono::steady_clock::now();
  LogOddsRun run{LogOddsMap::prior(cfg.grid, params.prior_logodds),
                 make_record(MapperKind::kLogOdds)};
  for (std::size_t k = 0; k < scans.size(); ++k) {
    logodds_update(run.map, scans[k], params, cfg.sensor);
    run.record.errors.push(static_cast<double>(k) / cfg.sensor.rate,
                           map_error(run.map.means(), truth));
  }
  run.record.final_means = run.map.means();
  run.record.final_variances = run.map.variances();
  run.record.final_error =
      run.record.errors.size() ? run.record.errors.total_abs_error.back()
                               : map_error(run.record.final_means, truth);
  run.record.inconsistency =
      inconsistency(run.record.final_means, run.record.final_variances, truth);
  run.record.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

void write_run_json(const std::string& path, const RunRecord& rec, const ScenarioConfig& cfg) {
  json j;
  j["run_id"] = rec.run_id;
  j["mapper"] = mapper_kind_name(rec.kind);
  j["rng"] = rec.rng_algorithm;
  j["scans"] = rec.errors.size();
  j["final_error"] = rec.final_error;
  j["inconsistency"] = rec.inconsistency;
  j["stats"] = {{"voxel_updates", rec.stats.voxel_updates},
                {"skipped_pixels", rec.stats.skipped_pixels},
                {"degenerate_voxels", rec.stats.degenerate_voxels},
                {"min_multiplier", rec.stats.min_multiplier},
                {"min_posterior_mass", rec.stats.min_posterior_mass},
                {"max_expected_multiplier_dev", rec.stats.max_expected_multiplier_dev}};
  j["wall_time_s"] = rec.wall_time_s;
  j["config"] = config_to_json(cfg);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

const char* mapper_kind_name(MapperKind kind) {
  return kind == MapperKind::kDensity ? "crm" : "ism";
}

Pose ScenarioConfig::start_pose() const {
  return Pose::make(robot.x, robot.y, robot.theta_deg * kDegToRad);
}

void ScenarioConfig::validate() const {
  sensor.validate();
  mapper.ism_params.validate();
  if (mapper.bins < 2) throw std::invalid_argument("config: 'mapper.bins' must be >= 2");
  if (sim.duration_s < 0) throw std::invalid_argument("config: 'sim.duration_s' must be >= 0");
  if (world.free_radius < 0) {
    throw std::invalid_argument("config: 'world.free_radius' must be >= 0");
  }
}

ScenarioConfig load_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
  require_keys(doc, "", {"grid", "sensor", "robot", "sim", "mapper", "world"});

  ScenarioConfig cfg;

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    require_keys(g, "grid.", {"extent_x", "extent_y", "voxel_size"});
    const double ex = get_number(g, "grid.", "extent_x", cfg.grid.extent_x);
    const double ey = get_number(g, "grid.", "extent_y", cfg.grid.extent_y);
    const double vs = get_number(g, "grid.", "voxel_size", cfg.grid.voxel_size);
    // The grid is centered on the world origin.
    cfg.grid = GridSpec::make(ex, ey, vs, -0.5 * ex, -0.5 * ey);
  }

  if (doc.contains("sensor")) {
    const json& s = doc["sensor"];
    require_keys(s, "sensor.", {"max_range", "fov_deg", "pixels", "rate_hz", "noise_var"});
    cfg.sensor.max_range = get_number(s, "sensor.", "max_range", cfg.sensor.max_range);
    cfg.sensor.fov = get_number(s, "sensor.", "fov_deg", cfg.sensor.fov / kDegToRad) * kDegToRad;
    cfg.sensor.pixels =
        static_cast<int>(get_number(s, "sensor.", "pixels", cfg.sensor.pixels));
    cfg.sensor.rate = get_number(s, "sensor.", "rate_hz", cfg.sensor.rate);
    cfg.sensor.noise_var = get_number(s, "sensor.", "noise_var", cfg.sensor.noise_var);
  }

  if (doc.contains("robot")) {
    const json& r = doc["robot"];
    require_keys(r, "robot.", {"x", "y", "theta_deg", "omega_deg_per_s"});
    cfg.robot.x = get_number(r, "robot.", "x", cfg.robot.x);
    cfg.robot.y = get_number(r, "robot.", "y", cfg.robot.y);
    cfg.robot.theta_deg = get_number(r, "robot.", "theta_deg", cfg.robot.theta_deg);
    cfg.robot.omega_deg_per_s =
        get_number(r, "robot.", "omega_deg_per_s", cfg.robot.omega_deg_per_s);
  }

  if (doc.contains("sim")) {
    const json& s = doc["sim"];
    require_keys(s, "sim.", {"duration_s", "seed"});
    cfg.sim.duration_s = get_number(s, "sim.", "duration_s", cfg.sim.duration_s);
    cfg.sim.seed = get_seed(s, "sim.", "seed", cfg.sim.seed);
  }

  if (doc.contains("mapper")) {
    const json& m = doc["mapper"];
    require_keys(m, "mapper.", {"kind", "bins", "ism_params"});
    if (m.contains("kind")) {
      const std::string kind = m["kind"].get<std::string>();
      if (kind == "crm") {
        cfg.mapper.kind = MapperKind::kDensity;
      } else if (kind == "ism") {
        cfg.mapper.kind = MapperKind::kLogOdds;
      } else {
        throw std::invalid_argument("config: 'mapper.kind' must be \"crm\" or \"ism\"");
      }
    }
    cfg.mapper.bins = static_cast<int>(get_number(m, "mapper.", "bins", cfg.mapper.bins));
    if (m.contains("ism_params")) {
      const json& p = m["ism_params"];
      require_keys(p, "mapper.ism_params.",
                   {"r_ramp", "r_top", "q_l", "q_h", "prior_logodds"});
      IsmParams& ip = cfg.mapper.ism_params;
      ip.r_ramp = get_number(p, "mapper.ism_params.", "r_ramp", ip.r_ramp);
      ip.r_top = get_number(p, "mapper.ism_params.", "r_top", ip.r_top);
      ip.q_l = get_number(p, "mapper.ism_params.", "q_l", ip.q_l);
      ip.q_h = get_number(p, "mapper.ism_params.", "q_h", ip.q_h);
      ip.prior_logodds = get_number(p, "mapper.ism_params.", "prior_logodds", ip.prior_logodds);
    }
  }

  if (doc.contains("world")) {
    const json& w = doc["world"];
    require_keys(w, "world.", {"seed", "free_radius"});
    cfg.world.seed = get_seed(w, "world.", "seed", cfg.world.seed);
    cfg.world.free_radius = get_number(w, "world.", "free_radius", cfg.world.free_radius);
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

GroundTruthMap generate_world(const GridSpec& spec, std::uint64_t seed, double free_radius) {
  Rng rng(substream_seed(seed, Stream::kWorld));
  GroundTruthMap truth = GroundTruthMap::free_map(spec);
  for (int i = 0; i < spec.size(); ++i) {
    truth.occupancy[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
  }
  for (int i = 0; i < spec.size(); ++i) {
    const Point c = voxel_center(spec, i);
    if (std::hypot(c.x, c.y) <= free_radius) truth.occupancy[i] = 0.0;
  }
  return truth;
}

std::vector<Scan> simulate_scan_sequence(const GroundTruthMap& truth,
                                         const ScenarioConfig& cfg) {
  Rng rng(substream_seed(cfg.sim.seed, Stream::kScan));
  const Pose start = cfg.start_pose();
  const double omega = cfg.robot.omega_deg_per_s * kDegToRad;

  std::vector<Scan> scans;
  const int n = cfg.scan_count();
  scans.reserve(n);
  for (int k = 0; k < n; ++k) {
    const Pose pose = Pose::make(start.x, start.y, start.theta + omega * k / cfg.sensor.rate);
    scans.push_back(simulate_scan(truth, pose, cfg.sensor, rng));
  }
  return scans;
}

RunRecord run_mapper(const GroundTruthMap& truth, const std::vector<Scan>& scans,
                     const ScenarioConfig& cfg, MapperKind kind) {
  if (kind == MapperKind::kDensity) return run_density(truth, scans, cfg).record;
  return run_logodds(truth, scans, cfg, cfg.mapper.ism_params).record;
}

RunRecord run_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
  const GroundTruthMap truth = generate_world(cfg.grid, cfg.world.seed, cfg.world.free_radius);
  const std::vector<Scan> scans = simulate_scan_sequence(truth, cfg);
  RunRecord rec = run_mapper(truth, scans, cfg, cfg.mapper.kind);

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_error_series_csv(out_dir + "/error_series.csv", rec.errors);
    write_map_csv(out_dir + "/map_final.csv", cfg.grid, rec.final_means, rec.final_variances);
    write_map_pgm(out_dir + "/map_final.pgm", cfg.grid, rec.final_means);
    write_run_json(out_dir + "/run.json", rec, cfg);
  }
  return rec;
}

std::vector<SweepRow> run_ism_sweep(const ScenarioConfig& cfg, const std::string& out_dir,
                                    int jobs) {
  const GroundTruthMap truth = generate_world(cfg.grid, cfg.world.seed, cfg.world.free_radius);
  const std::vector<Scan> scans = simulate_scan_sequence(truth, cfg);
  const std::vector<IsmParams> configs = ism_sweep_configs();

  std::vector<SweepRow> rows(configs.size() + 1);
  parallel_for(jobs, static_cast<int>(rows.size()), [&](int i) {
    if (i < static_cast<int>(configs.size())) {
      ScenarioConfig local = cfg;
      local.mapper.ism_params = configs[i];
      const RunRecord rec = run_mapper(truth, scans, local, MapperKind::kLogOdds);
      char id[16];
      std::snprintf(id, sizeof(id), "ism_%02d", i);
      rows[i] = {id, configs[i], rec.final_error, rec.inconsistency};
    } else {
      const RunRecord rec = run_mapper(truth, scans, cfg, MapperKind::kDensity);
      rows[i] = {"crm", std::nullopt, rec.final_error, rec.inconsistency};
    }
  });

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    CsvWriter csv(out_dir + "/bars.csv", {"config_id", "error", "inconsistency"});
    for (const SweepRow& row : rows) {
      csv.field(row.config_id).field(row.final_error).field(row.inconsistency);
      csv.endrow();
    }
  }
  return rows;
}

std::vector<NoiseRow> run_noise_sweep(const ScenarioConfig& cfg, const std::string& out_dir,
                                      int jobs) {
  static constexpr double kVariances[] = {0.1, 0.04, 0.01, 0.0025, 0.0004, 0.0001};
  const GroundTruthMap truth = generate_world(cfg.grid, cfg.world.seed, cfg.world.free_radius);

  std::vector<NoiseRow> rows(2 * std::size(kVariances));
  parallel_for(jobs, static_cast<int>(std::size(kVariances)), [&](int vi) {
    ScenarioConfig local = cfg;
    local.sensor.noise_var = kVariances[vi];
    // One scan stream per noise level, shared by both mappers.
    const std::vector<Scan> scans = simulate_scan_sequence(truth, local);
    const RunRecord density = run_mapper(truth, scans, local, MapperKind::kDensity);
    const RunRecord logodds = run_mapper(truth, scans, local, MapperKind::kLogOdds);
    rows[2 * vi] = {kVariances[vi], MapperKind::kDensity, density.errors, density.final_error};
    rows[2 * vi + 1] =
        {kVariances[vi], MapperKind::kLogOdds, logodds.errors, logodds.final_error};
  });

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    CsvWriter csv(out_dir + "/noise_sweep.csv", {"noise_var", "method", "final_error"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const NoiseRow& row = rows[i];
      csv.field(row.noise_var).field(mapper_kind_name(row.kind)).field(row.final_error);
      csv.endrow();
      char name[64];
      std::snprintf(name, sizeof(name), "/error_series_v%zu_%s.csv", i / 2,
                    mapper_kind_name(row.kind));
      write_error_series_csv(out_dir + name, row.errors);
    }
  }
  return rows;
}

std::vector<MonteCarloRow> run_montecarlo(const ScenarioConfig& cfg, int n_maps,
                                          const std::string& out_dir, int jobs) {
  if (n_maps < 1) throw std::invalid_argument("montecarlo: n_maps must be >= 1");

  std::vector<MonteCarloRow> rows(n_maps);
  parallel_for(jobs, n_maps, [&](int i) {
    // Per-map seeds are the config seeds plus the map index.
    ScenarioConfig local = cfg;
    local.world.seed = cfg.world.seed + static_cast<std::uint64_t>(i);
    local.sim.seed = cfg.sim.seed + static_cast<std::uint64_t>(i);
    const GroundTruthMap truth =
        generate_world(local.grid, local.world.seed, local.world.free_radius);
    const std::vector<Scan> scans = simulate_scan_sequence(truth, local);
    const RunRecord density = run_mapper(truth, scans, local, MapperKind::kDensity);
    const RunRecord logodds = run_mapper(truth, scans, local, MapperKind::kLogOdds);
    rows[i] = {i, local.world.seed, density.final_error, logodds.final_error,
               density.inconsistency, logodds.inconsistency};
  });

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    CsvWriter csv(out_dir + "/montecarlo.csv",
                  {"map_index", "world_seed", "error_crm", "error_ism", "ic_crm", "ic_ism"});
    for (const MonteCarloRow& row : rows) {
      csv.field(row.map_index)
          .field(static_cast<unsigned long long>(row.world_seed))
          .field(row.error_density)
          .field(row.error_logodds)
          .field(row.inconsistency_density)
          .field(row.inconsistency_logodds);
      csv.endrow();
    }
  }
  return rows;
}

PlanRunResult run_plan(const ScenarioConfig& cfg, const Point& goal, int max_candidates,
                       const std::string& out_dir, const RrtOptions& rrt) {
  if (!voxel_at(cfg.grid, goal.x, goal.y)) {
    throw std::invalid_argument("plan: goal outside the grid");
  }

  const GroundTruthMap truth = generate_world(cfg.grid, cfg.world.seed, cfg.world.free_radius);
  const std::vector<Scan> scans = simulate_scan_sequence(truth, cfg);
  DensityRun warmup = run_density(truth, scans, cfg);

  // Plan from the pose the warm-up rotation ends at.
  const double omega = cfg.robot.omega_deg_per_s * kDegToRad;
  const Pose start = Pose::make(cfg.robot.x, cfg.robot.y,
                                cfg.start_pose().theta + omega * cfg.sim.duration_s);

  Rng rng(substream_seed(cfg.sim.seed, Stream::kPlanner));
  const std::vector<Path> candidates =
      rrt_candidates(start, goal, cfg.grid, rng, max_candidates, rrt);
  if (candidates.empty()) throw std::runtime_error("plan: no candidate path reaches the goal");

  PlanRunResult result{select_path(warmup.map, candidates, cfg.sensor), warmup.record};

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    {
      // Per-step cumulative cost along the chosen path, same threading as
      // path_cost.
      CsvWriter csv(out_dir + "/plan.csv", {"step", "x", "y", "theta", "cumulative_cost"});
      MapBelief rolled = warmup.map;
      double cumulative = 0.0;
      for (std::size_t s = 0; s < result.plan.chosen.waypoints.size(); ++s) {
        const Pose& pose = result.plan.chosen.waypoints[s];
        Scan ml;
        for (int pixel = 0; pixel < cfg.sensor.pixels; ++pixel) {
          ml.push_back({pixel, most_likely_observation(rolled, pose, pixel, cfg.sensor),
                        pose});
        }
        update_map(rolled, ml, cfg.sensor);
        cumulative += one_step_cost(rolled, pose);
        csv.field(static_cast<int>(s)).field(pose.x).field(pose.y).field(pose.theta);
        csv.field(cumulative);
        csv.endrow();
      }
    }
    {
      CsvWriter csv(out_dir + "/candidates.csv",
                    {"candidate_id", "step", "x", "y", "theta", "cost"});
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        for (std::size_t s = 0; s < candidates[c].waypoints.size(); ++s) {
          const Pose& pose = candidates[c].waypoints[s];
          csv.field(static_cast<int>(c)).field(static_cast<int>(s));
          csv.field(pose.x).field(pose.y).field(pose.theta);
          csv.field(result.plan.per_candidate_costs[c]);
          csv.endrow();
        }
      }
    }
  }
  return result;
}

void write_error_series_csv(const std::string& path, const ErrorSeries& series) {
  CsvWriter csv(path, {"t", "error"});
  for (std::size_t i = 0; i < series.size(); ++i) {
    csv.field(series.time[i]).field(series.total_abs_error[i]);
    csv.endrow();
  }
}

}  // namespace bgrid
