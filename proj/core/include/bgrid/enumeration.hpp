#pragma once

#include <vector>

#include "bgrid/sensor_spec.hpp"

namespace bgrid {

/// A single-ray world small enough for exact Bayesian inference by
/// enumerating all 2^n binary maps. Voxel l sits at ranges[l] meters from
/// the camera (strictly increasing); the prior is independent
/// Bernoulli(0.5) per voxel.
struct SmallWorld {
  static constexpr int kMaxVoxels = 12;

  std::vector<double> ranges;

  int size() const { return static_cast<int>(ranges.size()); }
  void validate() const;
};

/// Exact per-voxel posterior occupancy means given readings zs.
///
/// Enumerates every binary map; a map's likelihood is the product over
/// readings of the Gaussian density at the map's first occupied voxel's
/// range (max_range for the empty ray, matching the mapper's no-hit
/// convention). Throws std::invalid_argument above kMaxVoxels.
std::vector<double> exact_posterior(const SmallWorld& world, const std::vector<double>& zs,
                                    const SensorSpec& sensor);

/// Verifies by enumeration that once the cause is fixed, the reading value
/// carries no further information about any voxel:
/// p(m^i | c, z) == p(m^i | c) for every voxel i, cause c, and a grid of z
/// values. Returns the largest deviation found.
double cause_screening_deviation(const SmallWorld& world, const SensorSpec& sensor);

/// Convenience predicate: deviation below tol (default 1e-10).
bool cause_screens_measurement(const SmallWorld& world, const SensorSpec& sensor,
                               double tol = 1e-10);

}  // namespace bgrid
