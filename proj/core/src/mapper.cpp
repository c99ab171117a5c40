#include "bgrid/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bgrid {

void UpdateStats::merge(const UpdateStats& other) {
  voxel_updates += other.voxel_updates;
  skipped_pixels += other.skipped_pixels;
  degenerate_voxels += other.degenerate_voxels;
  min_multiplier = std::min(min_multiplier, other.min_multiplier);
  min_posterior_mass = std::min(min_posterior_mass, other.min_posterior_mass);
  max_expected_multiplier_dev =
      std::max(max_expected_multiplier_dev, other.max_expected_multiplier_dev);
}

std::optional<CausePosterior> cause_posterior(const MapBelief& map, const PixelCone& cone,
                                              double z, const SensorSpec& sensor,
                                              const LikelihoodFn& likelihood) {
  const CauseDistribution prior = cause_prior(map, cone);
  CausePosterior post;
  post.weights.voxel_weight.resize(cone.size());

  const auto like = [&](const Cause& c) {
    return likelihood ? likelihood(z, c) : likelihood_given_cause(z, c, sensor);
  };

  double total = prior.no_hit_weight * like(Cause::no_hit(sensor.max_range));
  post.weights.no_hit_weight = total;
  for (int l = 1; l <= cone.size(); ++l) {
    const double w = prior.voxel_weight[l - 1] * like(make_cause(cone, l, sensor));
    post.weights.voxel_weight[l - 1] = w;
    total += w;
  }
  if (!(total > 0.0)) return std::nullopt;  // every mixture term underflowed

  const double inv = 1.0 / total;
  post.weights.no_hit_weight *= inv;
  for (double& w : post.weights.voxel_weight) w *= inv;
  post.normalizer = inv;
  return post;
}

AffineUpdate update_coefficients(const MapBelief& map, const PixelCone& cone, int i_local,
                                 const CausePosterior& posterior, double saturation_eps) {
  const auto& w = posterior.weights.voxel_weight;

  double near = 0.0;  // causes strictly nearer than voxel i
  for (int l = 1; l < i_local; ++l) near += w[l - 1];
  const double self = w[i_local - 1];
  // The no-hit pseudo-cause acts as a cause farther than every voxel: a
  // max-range reading is evidence the ray passed through voxel i.
  double far = posterior.weights.no_hit_weight;
  for (int l = i_local + 1; l <= cone.size(); ++l) far += w[l - 1];

  const double mhat = std::clamp(map.mean(cone.local_to_global(i_local)), saturation_eps,
                                 1.0 - saturation_eps);

  AffineUpdate coeff;
  coeff.a = self / mhat - far / (1.0 - mhat);
  coeff.b = near + far / (1.0 - mhat);
  return coeff;
}

bool update_voxel(VoxelBelief& belief, const AffineUpdate& coeff, UpdateStats* stats) {
  static thread_local std::vector<double> multipliers;
  multipliers.resize(belief.bins());

  double min_mult = std::numeric_limits<double>::infinity();
  for (int j = 0; j < belief.bins(); ++j) {
    const double g = coeff.at(belief.center(j));
    multipliers[j] = g;
    min_mult = std::min(min_mult, g);
  }

  double mass = 0.0;
  for (int j = 0; j < belief.bins(); ++j) {
    mass += belief.mass(j) * std::max(multipliers[j], 0.0);
  }

  if (stats) {
    ++stats->voxel_updates;
    stats->min_multiplier = std::min(stats->min_multiplier, min_mult);
    stats->min_posterior_mass = std::min(stats->min_posterior_mass, mass);
  }
  if (!belief.reweight(multipliers)) {
    if (stats) ++stats->degenerate_voxels;
    return false;
  }
  return true;
}

bool apply_measurement(MapBelief& map, const PixelCone& cone, double z,
                       const SensorSpec& sensor, const UpdateOptions& options) {
  if (cone.empty()) return true;  // nothing to learn from

  const auto posterior = cause_posterior(map, cone, z, sensor, options.likelihood);
  if (!posterior) {
    if (options.stats) ++options.stats->skipped_pixels;
    return false;
  }

  // Coefficients for every voxel are fixed against the pre-reading map;
  // prefix sums make the whole cone O(|cone|).
  const int n = cone.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (int l = 1; l <= n; ++l) {
    prefix[l] = prefix[l - 1] + posterior->weights.voxel_weight[l - 1];
  }
  const double total_voxel_mass = prefix[n];

  for (int l = 1; l <= n; ++l) {
    const int g = cone.local_to_global(l);
    const double self = posterior->weights.voxel_weight[l - 1];
    const double near = prefix[l - 1];
    const double far = total_voxel_mass - prefix[l] + posterior->weights.no_hit_weight;
    const double mhat =
        std::clamp(map.mean(g), options.saturation_eps, 1.0 - options.saturation_eps);

    AffineUpdate coeff;
    coeff.a = self / mhat - far / (1.0 - mhat);
    coeff.b = near + far / (1.0 - mhat);

    if (options.stats) {
      const double dev = std::abs(coeff.a * map.mean(g) + coeff.b - 1.0);
      options.stats->max_expected_multiplier_dev =
          std::max(options.stats->max_expected_multiplier_dev, dev);
    }
    if (update_voxel(map.beliefs[g], coeff, options.stats)) {
      map.refresh_mean(g);
    }
  }
  return true;
}

void update_map(MapBelief& map, const Scan& scan, const SensorSpec& sensor,
                const UpdateOptions& options) {
  for (const Measurement& meas : scan) {
    const PixelCone cone = trace_ray(map.spec, meas.pose, meas.pixel_index, sensor);
    apply_measurement(map, cone, meas.z, sensor, options);
  }
}

}  // namespace bgrid
