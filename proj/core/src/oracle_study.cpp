#include "bgrid/oracle_study.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "bgrid/csv.hpp"
#include "bgrid/log_odds.hpp"
#include "bgrid/mapper.hpp"
#include "bgrid/rng.hpp"

namespace bgrid {

namespace {

/// A synthetic one-pixel cone covering an n-voxel row world. Only the fields
/// the mappers read (ordering, center ranges, voxel ids) need to be
/// meaningful.
PixelCone row_cone(const SmallWorld& world, double max_range) {
  PixelCone cone;
  cone.ray = {0.0, 0.0, 1.0, 0.0, max_range};
  for (int l = 0; l < world.size(); ++l) {
    cone.voxels.push_back(l);
    cone.entry_distance.push_back(l == 0 ? 0.0 : 0.5 * (world.ranges[l - 1] + world.ranges[l]));
    cone.center_range.push_back(world.ranges[l]);
  }
  return cone;
}

}  // namespace

OracleStudySummary run_oracle_study(std::uint64_t seed, int trials, const std::string& out_dir,
                                    int scans_per_trial) {
  OracleStudySummary summary;
  summary.trials = trials;
  summary.rows.reserve(trials);

  SensorSpec sensor;  // reference sensor: 1 m range, variance 0.04
  IsmParams ism;      // reference curve: 0.1 / 0.1 / 0.45 / 0.55
  const double sigma = std::sqrt(sensor.noise_var);

  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(substream_seed(seed + static_cast<std::uint64_t>(trial), Stream::kOracle));

    SmallWorld world;
    const int n = 2 + static_cast<int>(rng.below(7));  // 2..8 voxels
    const double r0 = rng.uniform(0.1, 0.2);
    for (int l = 0; l < n; ++l) world.ranges.push_back(r0 + 0.1 * l);

    std::vector<bool> occupied(n);
    for (int l = 0; l < n; ++l) occupied[l] = rng.bernoulli(0.5);
    double first_hit = sensor.max_range;
    for (int l = 0; l < n; ++l) {
      if (occupied[l]) {
        first_hit = world.ranges[l];
        break;
      }
    }

    std::vector<double> zs(scans_per_trial);
    for (double& z : zs) {
      z = std::clamp(first_hit + sigma * rng.gaussian(), 1e-6, sensor.max_range);
    }

    const PixelCone cone = row_cone(world, sensor.max_range);
    const GridSpec row = GridSpec::make(0.1 * n, 0.1, 0.1, 0.0, 0.0);

    MapBelief density = MapBelief::uniform_prior(row);
    LogOddsMap logodds = LogOddsMap::prior(row);
    for (double z : zs) {
      apply_measurement(density, cone, z, sensor);
      apply_ism_measurement(logodds, cone, z, ism, sensor);
    }

    const std::vector<double> exact = exact_posterior(world, zs, sensor);
    OracleTrial row_result{n, 0.0, 0.0};
    for (int l = 0; l < n; ++l) {
      row_result.l1_density += std::abs(density.mean(l) - exact[l]);
      row_result.l1_logodds += std::abs(logodds.occupancy_mean(l) - exact[l]);
    }
    summary.density_closer += row_result.l1_density < row_result.l1_logodds;
    summary.rows.push_back(row_result);
  }

  for (int w = 0; w < 10; ++w) {
    Rng rng(substream_seed(seed + 1000 + static_cast<std::uint64_t>(w), Stream::kOracle));
    SmallWorld world;
    const double r0 = rng.uniform(0.1, 0.2);
    for (int l = 0; l < 4; ++l) world.ranges.push_back(r0 + 0.1 * l);
    summary.screening_max_deviation =
        std::max(summary.screening_max_deviation, cause_screening_deviation(world, sensor));
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    CsvWriter csv(out_dir + "/oracle.csv", {"trial", "voxels", "l1_crm", "l1_ism"});
    for (std::size_t i = 0; i < summary.rows.size(); ++i) {
      csv.field(static_cast<int>(i))
          .field(summary.rows[i].voxels)
          .field(summary.rows[i].l1_density)
          .field(summary.rows[i].l1_logodds);
      csv.endrow();
    }
  }
  return summary;
}

}  // namespace bgrid
