#pragma once

#include <optional>
#include <vector>

#include "bgrid/grid.hpp"
#include "bgrid/sensor_spec.hpp"

namespace bgrid {

/// A measurement ray: unit direction from a camera center, truncated at
/// max_range meters.
struct Ray {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double dir_x = 1.0;
  double dir_y = 0.0;
  double max_range = 1.0;
};

/// Ordered set of voxels a pixel's ray passes through, nearest first.
///
/// Local indices are 1-based along the ray (matching the mapper's update
/// algebra); voxels[l-1] is the global index of local voxel l. entry_distance
/// is the range at which the ray enters each voxel and is increasing;
/// center_range is the Euclidean distance from the camera center to the
/// voxel center and is what range measurements are modeled against.
struct PixelCone {
  Ray ray;
  std::vector<int> voxels;
  std::vector<double> entry_distance;
  std::vector<double> center_range;

  int size() const { return static_cast<int>(voxels.size()); }
  bool empty() const { return voxels.empty(); }

  /// Global index of the l-th voxel along the ray, l in [1, size()].
  /// Throws std::out_of_range otherwise.
  int local_to_global(int l) const;

  /// Inverse map; nullopt when the voxel is not in this cone.
  std::optional<int> global_to_local(int global_index) const;
};

/// Bearing of a pixel's central ray: theta + fov * (pixel + 0.5) / pixels - fov / 2.
double pixel_bearing(const Pose& pose, int pixel_index, const SensorSpec& sensor);

/// Traces one ray through the grid (2D DDA), truncating at max_range and at
/// the grid boundary. A voxel belongs to the cone iff the ray enters it
/// strictly before max_range. A ray that misses the grid yields an empty
/// cone. When the ray passes exactly through a voxel corner (or runs exactly
/// along a grid line) the voxel on the counterclockwise side of the ray is
/// taken.
PixelCone trace_ray(const GridSpec& spec, const Ray& ray);

/// Convenience overload: builds the ray for pixel_index of the sensor at
/// pose. Throws std::out_of_range for a bad pixel index.
PixelCone trace_ray(const GridSpec& spec, const Pose& pose, int pixel_index,
                    const SensorSpec& sensor);

}  // namespace bgrid
