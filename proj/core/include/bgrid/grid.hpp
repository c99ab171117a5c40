#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace bgrid {

/// 2D world point, meters.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Normalizes an angle to (-pi, pi].
double wrap_angle(double theta);

/// Planar robot/sensor pose. theta is kept normalized to (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  static Pose make(double x, double y, double theta) { return {x, y, wrap_angle(theta)}; }
};

/// Geometry of a regular 2D voxel grid. The grid covers
/// [origin_x, origin_x + extent_x) x [origin_y, origin_y + extent_y) and the
/// extents must be integer multiples of voxel_size. Voxels are indexed
/// row-major with x fastest: i = iy * nx + ix.
struct GridSpec {
  double extent_x = 2.0;
  double extent_y = 2.0;
  double voxel_size = 0.1;
  double origin_x = -1.0;
  double origin_y = -1.0;

  int nx = 0;  // filled by validate()
  int ny = 0;

  static GridSpec make(double extent_x, double extent_y, double voxel_size,
                       double origin_x, double origin_y);

  /// Computes nx/ny; throws std::invalid_argument on non-positive sizes or
  /// extents that are not whole multiples of voxel_size.
  void validate();

  int size() const { return nx * ny; }

  int index(int ix, int iy) const { return iy * nx + ix; }
  bool in_bounds(int ix, int iy) const { return ix >= 0 && ix < nx && iy >= 0 && iy < ny; }
};

/// World coordinates of the center of voxel i. Throws std::out_of_range on a
/// bad index.
Point voxel_center(const GridSpec& spec, int i);

/// Voxel containing a world point, or nullopt when outside the grid.
std::optional<int> voxel_at(const GridSpec& spec, double x, double y);

enum class OccupancyMode {
  kBinary,      // occupancy values in {0, 1}
  kContinuous,  // occupancy values in [0, 1], fraction of the voxel filled
};

/// The simulator's true map: one occupancy value per voxel.
struct GroundTruthMap {
  GridSpec spec;
  OccupancyMode mode = OccupancyMode::kBinary;
  std::vector<double> occupancy;  // size spec.size()

  static GroundTruthMap free_map(const GridSpec& spec, OccupancyMode mode = OccupancyMode::kBinary);

  double at(int i) const { return occupancy.at(i); }

  /// Throws std::invalid_argument when a value violates the declared mode.
  void validate() const;
};

}  // namespace bgrid
