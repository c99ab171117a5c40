// bgrid: occupancy mapping experiments over voxel-occupancy densities and the
// classical log-odds baseline. See README.md for the config schema and the
// artifacts each subcommand writes.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bgrid/enumeration.hpp"
#include "bgrid/oracle_study.hpp"
#include "bgrid/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoPlan = 2;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Scenario config JSON (defaults when omitted)");
  cmd->add_option("--out", args.out_dir, "Output directory for artifacts");
  cmd->add_option("--seed", args.seed, "Override both config seeds (sim and world)");
  cmd->add_option("--jobs", args.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
}

bgrid::ScenarioConfig resolve_config(const CommonArgs& args) {
  bgrid::ScenarioConfig cfg =
      args.config_path.empty() ? bgrid::ScenarioConfig{} : bgrid::load_config_file(args.config_path);
  if (args.seed) {
    cfg.sim.seed = *args.seed;
    cfg.world.seed = *args.seed;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occupancy-density grid mapping experiments"};
  app.require_subcommand(1);

  CommonArgs simulate_args, ism_args, noise_args, mc_args, plan_args, oracle_args;

  CLI::App* simulate = app.add_subcommand("simulate", "Run one mapping scenario");
  add_common(simulate, simulate_args);

  CLI::App* sweep_ism =
      app.add_subcommand("sweep-ism", "36 inverse-model configs plus the density mapper");
  add_common(sweep_ism, ism_args);

  CLI::App* sweep_noise =
      app.add_subcommand("sweep-noise", "Both mappers across six noise variances");
  add_common(sweep_noise, noise_args);

  int n_maps = 50;
  CLI::App* montecarlo = app.add_subcommand("montecarlo", "Both mappers over random worlds");
  add_common(montecarlo, mc_args);
  montecarlo->add_option("--maps", n_maps, "Number of random worlds")->check(CLI::PositiveNumber);

  double goal_x = 0.0, goal_y = 0.0;
  int candidates = 10;
  int rrt_iterations = 4000;
  CLI::App* plan = app.add_subcommand("plan", "Map, then pick a low-cost path to a goal");
  add_common(plan, plan_args);
  plan->add_option("--goal-x", goal_x, "Goal x, meters")->required();
  plan->add_option("--goal-y", goal_y, "Goal y, meters")->required();
  plan->add_option("--candidates", candidates, "Candidate paths to generate")
      ->check(CLI::PositiveNumber);
  plan->add_option("--rrt-iterations", rrt_iterations, "Tree growth budget")
      ->check(CLI::PositiveNumber);

  int trials = 200;
  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "Compare both mappers against exact enumeration on single-ray worlds");
  add_common(oracle, oracle_args);
  oracle->add_option("--trials", trials, "Number of seeded worlds")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const auto cfg = resolve_config(simulate_args);
      const auto rec = bgrid::run_scenario(cfg, simulate_args.out_dir);
      std::printf("%s: final_error=%.6g inconsistency=%.6g scans=%zu\n", rec.run_id.c_str(),
                  rec.final_error, rec.inconsistency, rec.errors.size());
    } else if (*sweep_ism) {
      const auto cfg = resolve_config(ism_args);
      const auto rows = bgrid::run_ism_sweep(cfg, ism_args.out_dir, ism_args.jobs);
      for (const auto& row : rows) {
        std::printf("%s: error=%.6g inconsistency=%.6g\n", row.config_id.c_str(),
                    row.final_error, row.inconsistency);
      }
    } else if (*sweep_noise) {
      const auto cfg = resolve_config(noise_args);
      const auto rows = bgrid::run_noise_sweep(cfg, noise_args.out_dir, noise_args.jobs);
      for (const auto& row : rows) {
        std::printf("noise_var=%g %s: final_error=%.6g\n", row.noise_var,
                    bgrid::mapper_kind_name(row.kind), row.final_error);
      }
    } else if (*montecarlo) {
      const auto cfg = resolve_config(mc_args);
      const auto rows = bgrid::run_montecarlo(cfg, n_maps, mc_args.out_dir, mc_args.jobs);
      int error_wins = 0, consistency_wins = 0;
      for (const auto& row : rows) {
        error_wins += row.error_density < row.error_logodds;
        consistency_wins += row.inconsistency_density < row.inconsistency_logodds;
      }
      std::printf("maps=%zu crm_error_wins=%d crm_consistency_wins=%d\n", rows.size(),
                  error_wins, consistency_wins);
    } else if (*plan) {
      const auto cfg = resolve_config(plan_args);
      bgrid::RrtOptions rrt;
      rrt.max_iterations = rrt_iterations;
      try {
        const auto result =
            bgrid::run_plan(cfg, {goal_x, goal_y}, candidates, plan_args.out_dir, rrt);
        std::printf("plan: cost=%.6g waypoints=%zu candidates=%zu\n", result.plan.cost,
                    result.plan.chosen.waypoints.size(),
                    result.plan.per_candidate_costs.size());
      } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNoPlan;
      }
    } else if (*oracle) {
      const auto cfg = resolve_config(oracle_args);
      const auto summary =
          bgrid::run_oracle_study(cfg.sim.seed, trials, oracle_args.out_dir);
      std::printf(
          "trials=%d density_closer=%d (%.1f%%) screening_max_dev=%.3g\n", summary.trials,
          summary.density_closer, 100.0 * summary.density_closer / summary.trials,
          summary.screening_max_deviation);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitOk;
}
