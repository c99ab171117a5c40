#pragma once

#include <vector>

#include "bgrid/grid.hpp"
#include "bgrid/ray.hpp"
#include "bgrid/sensor.hpp"

namespace bgrid {

/// Parameters of the piecewise inverse sensor model curve: occupancy
/// probability as a function of a voxel's distance d along the ray, given
/// reading z. q_l before the ramp, a linear ramp of width r_ramp centered on
/// z, q_h for r_top beyond the ramp, 0.5 (no information) after that.
struct IsmParams {
  double r_ramp = 0.1;   // meters
  double r_top = 0.1;    // meters
  double q_l = 0.45;
  double q_h = 0.55;
  double prior_logodds = 0.0;

  void validate() const;
};

/// Classical log-odds occupancy grid.
struct LogOddsMap {
  /// Saturation bound; log-odds are clamped to [-kMaxLogOdds, kMaxLogOdds].
  static constexpr double kMaxLogOdds = 50.0;

  GridSpec spec;
  std::vector<double> logodds;  // size spec.size()

  static LogOddsMap prior(const GridSpec& spec, double prior_logodds = 0.0);

  double occupancy_mean(int i) const;
  /// Bernoulli variance p(1-p) of the stored occupancy probability.
  double occupancy_variance(int i) const;

  std::vector<double> means() const;
  std::vector<double> variances() const;
};

/// The inverse model curve value at distance d for reading z.
double ism_value(double d, double z, const IsmParams& params, double max_range);

double logit(double p);

/// One reading: every cone voxel at its center range d gets
/// l += logit(ism_value(d, z)) - prior_logodds, clamped.
void apply_ism_measurement(LogOddsMap& map, const PixelCone& cone, double z,
                           const IsmParams& params, const SensorSpec& sensor);

/// Folds a full scan into the map.
void logodds_update(LogOddsMap& map, const Scan& scan, const IsmParams& params,
                    const SensorSpec& sensor);

/// The 36-model parameter sweep: q_h - 0.5 = 0.5 - q_l in {0.05, 0.2, 0.4},
/// r_ramp in {0.05, 0.1, 0.3, 1}, r_top in {0.05, 0.1, 0.3}, lexicographic
/// in that key order.
std::vector<IsmParams> ism_sweep_configs();

}  // namespace bgrid
