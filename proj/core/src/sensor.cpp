#include "bgrid/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bgrid {

double CauseDistribution::total() const {
  double t = no_hit_weight;
  for (double w : voxel_weight) t += w;
  return t;
}

double bounce_prob(const MapBelief& map, int global_index) {
  return map.mean(global_index);
}

double reach_prob(const MapBelief& map, const PixelCone& cone, int c_local) {
  if (c_local < 1 || c_local > cone.size()) {
    throw std::out_of_range("reach_prob: local index out of range");
  }
  double p = 1.0;
  for (int l = 1; l < c_local; ++l) p *= 1.0 - map.mean(cone.local_to_global(l));
  return p;
}

CauseDistribution cause_prior(const MapBelief& map, const PixelCone& cone) {
  CauseDistribution dist;
  dist.voxel_weight.resize(cone.size());
  double reach = 1.0;  // running prod (1 - mean) over nearer voxels
  for (int l = 1; l <= cone.size(); ++l) {
    const double m = map.mean(cone.local_to_global(l));
    dist.voxel_weight[l - 1] = m * reach;
    reach *= 1.0 - m;
  }
  dist.no_hit_weight = reach;
  return dist;
}

double gaussian_pdf(double z, double mean, double var) {
  constexpr double kTwoPi = 6.283185307179586476925;
  const double d = z - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(kTwoPi * var);
}

double likelihood_given_cause(double z, const Cause& cause, const SensorSpec& sensor) {
  return gaussian_pdf(z, cause.range, sensor.noise_var);
}

Cause make_cause(const PixelCone& cone, int local_index, const SensorSpec& sensor) {
  if (local_index == Cause::kNoHitLocal) return Cause::no_hit(sensor.max_range);
  return {local_index, cone.local_to_global(local_index), cone.center_range[local_index - 1]};
}

double forward_density(double z, const MapBelief& map, const PixelCone& cone,
                       const SensorSpec& sensor) {
  const CauseDistribution prior = cause_prior(map, cone);
  double density = prior.no_hit_weight * gaussian_pdf(z, sensor.max_range, sensor.noise_var);
  for (int l = 1; l <= cone.size(); ++l) {
    density += prior.voxel_weight[l - 1] *
               gaussian_pdf(z, cone.center_range[l - 1], sensor.noise_var);
  }
  return density;
}

Scan simulate_scan(const GroundTruthMap& truth, const Pose& pose, const SensorSpec& sensor,
                   Rng& rng) {
  Scan scan;
  scan.reserve(sensor.pixels);
  const double sigma = std::sqrt(sensor.noise_var);
  for (int pixel = 0; pixel < sensor.pixels; ++pixel) {
    const PixelCone cone = trace_ray(truth.spec, pose, pixel, sensor);
    double true_range = sensor.max_range;  // no return in the cone
    for (int l = 1; l <= cone.size(); ++l) {
      const double occ = truth.at(cone.local_to_global(l));
      const bool bounced = truth.mode == OccupancyMode::kBinary ? occ >= 0.5
                                                                : rng.bernoulli(occ);
      if (bounced) {
        true_range = cone.center_range[l - 1];
        break;
      }
    }
    const double z =
        std::clamp(true_range + sigma * rng.gaussian(), 1e-6, sensor.max_range);
    scan.push_back({pixel, z, pose});
  }
  return scan;
}

}  // namespace bgrid
