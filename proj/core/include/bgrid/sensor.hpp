#pragma once

#include <vector>

#include "bgrid/belief.hpp"
#include "bgrid/grid.hpp"
#include "bgrid/ray.hpp"
#include "bgrid/rng.hpp"
#include "bgrid/sensor_spec.hpp"

namespace bgrid {

/// One range reading. z is in (0, max_range]; a ray with no return is
/// reported at max_range.
struct Measurement {
  int pixel_index = 0;
  double z = 0.0;
  Pose pose;
};

using Scan = std::vector<Measurement>;

/// A hypothesis about which voxel produced a reading. local_index is 1-based
/// along the cone; kNoHitLocal marks the pseudo-cause "nothing in the cone
/// bounced the ray", whose nominal range is the sensor's max range.
struct Cause {
  static constexpr int kNoHitLocal = 0;

  int local_index = kNoHitLocal;
  int global_index = -1;
  double range = 0.0;

  bool is_no_hit() const { return local_index == kNoHitLocal; }

  static Cause no_hit(double max_range) { return {kNoHitLocal, -1, max_range}; }
};

/// Probability over every cone voxel plus the no-hit pseudo-cause.
/// voxel_weight[l-1] belongs to local voxel l; the weights sum to one.
struct CauseDistribution {
  std::vector<double> voxel_weight;
  double no_hit_weight = 1.0;

  double total() const;
};

/// Probability that voxel c bounces the ray: the mean occupancy under the
/// current belief.
double bounce_prob(const MapBelief& map, int global_index);

/// Probability that light from local voxel c_local traverses every nearer
/// cone voxel unobstructed: prod_{l < c_local} (1 - mean_l). Empty product
/// is 1.
double reach_prob(const MapBelief& map, const PixelCone& cone, int c_local);

/// Prior probability of each cause before seeing the reading:
/// weight(c) = mean_c * prod_{l<c}(1 - mean_l), with the remaining
/// prod_all(1 - mean_l) assigned to no-hit. Telescopes to total one.
CauseDistribution cause_prior(const MapBelief& map, const PixelCone& cone);

/// Gaussian density of reading z given variance var and a known cause
/// (mean = the cause's range; no-hit behaves as a cause at max range).
double likelihood_given_cause(double z, const Cause& cause, const SensorSpec& sensor);
double gaussian_pdf(double z, double mean, double var);

/// Range density under a stochastic map: the cause-prior mixture of
/// per-cause Gaussians, including the no-hit component.
double forward_density(double z, const MapBelief& map, const PixelCone& cone,
                       const SensorSpec& sensor);

/// Builds the cause for local voxel l of the cone (range = distance from the
/// camera center to the voxel center), or the no-hit cause for l == 0.
Cause make_cause(const PixelCone& cone, int local_index, const SensorSpec& sensor);

/// Simulates one full scan (all pixels, ascending pixel index) from a pose.
///
/// Binary mode: the return comes from the nearest cone voxel with occupancy
/// one. Continuous mode: each voxel bounces the ray with probability equal
/// to its occupancy, sampled nearest first. The return range is the cause
/// voxel's center range plus Gaussian noise; rays with no cause read
/// max_range plus noise. Samples are clamped into (0, max_range], never
/// redrawn.
Scan simulate_scan(const GroundTruthMap& truth, const Pose& pose, const SensorSpec& sensor,
                   Rng& rng);

}  // namespace bgrid
