#include "bgrid/grid.hpp"

#include <cmath>
#include <string>

namespace bgrid {

double wrap_angle(double theta) {
  constexpr double kPi = 3.14159265358979323846;
  constexpr double kTwoPi = 2.0 * kPi;
  double t = std::fmod(theta, kTwoPi);
  if (t <= -kPi) t += kTwoPi;
  if (t > kPi) t -= kTwoPi;
  return t;
}

GridSpec GridSpec::make(double extent_x, double extent_y, double voxel_size, double origin_x,
                        double origin_y) {
  GridSpec spec;
  spec.extent_x = extent_x;
  spec.extent_y = extent_y;
  spec.voxel_size = voxel_size;
  spec.origin_x = origin_x;
  spec.origin_y = origin_y;
  spec.validate();
  return spec;
}

void GridSpec::validate() {
  if (extent_x <= 0 || extent_y <= 0 || voxel_size <= 0) {
    throw std::invalid_argument("grid: extents and voxel_size must be positive");
  }
  const auto cells = [&](double extent, const char* name) {
    const double ratio = extent / voxel_size;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
      throw std::invalid_argument(std::string("grid: ") + name +
                                  " is not a whole multiple of voxel_size");
    }
    return static_cast<int>(rounded);
  };
  nx = cells(extent_x, "extent_x");
  ny = cells(extent_y, "extent_y");
}

Point voxel_center(const GridSpec& spec, int i) {
  if (i < 0 || i >= spec.size()) {
    throw std::out_of_range("voxel_center: index " + std::to_string(i) + " out of range");
  }
  const int ix = i % spec.nx;
  const int iy = i / spec.nx;
  return {spec.origin_x + (ix + 0.5) * spec.voxel_size,
          spec.origin_y + (iy + 0.5) * spec.voxel_size};
}

std::optional<int> voxel_at(const GridSpec& spec, double x, double y) {
  const int ix = static_cast<int>(std::floor((x - spec.origin_x) / spec.voxel_size));
  const int iy = static_cast<int>(std::floor((y - spec.origin_y) / spec.voxel_size));
  if (!spec.in_bounds(ix, iy)) return std::nullopt;
  return spec.index(ix, iy);
}

GroundTruthMap GroundTruthMap::free_map(const GridSpec& spec, OccupancyMode mode) {
  GroundTruthMap map;
  map.spec = spec;
  map.mode = mode;
  map.occupancy.assign(spec.size(), 0.0);
  return map;
}

void GroundTruthMap::validate() const {
  if (static_cast<int>(occupancy.size()) != spec.size()) {
    throw std::invalid_argument("truth map: one occupancy value per voxel required");
  }
  for (double v : occupancy) {
    const bool ok = mode == OccupancyMode::kBinary ? (v == 0.0 || v == 1.0)
                                                   : (v >= 0.0 && v <= 1.0);
    if (!ok) throw std::invalid_argument("truth map: occupancy value outside declared mode");
  }
}

}  // namespace bgrid
