#include "bgrid/ray.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bgrid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int sign(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

/// Cell index along one axis for a (grid-units) coordinate u. On an exact
/// boundary the cell ahead of the ray is taken; when the ray runs along the
/// boundary itself, the cell on its counterclockwise side.
int start_cell(double u, double d, double other_d, bool is_x_axis) {
  const double fl = std::floor(u);
  if (u != fl) return static_cast<int>(fl);
  if (d > 0.0) return static_cast<int>(fl);
  if (d < 0.0) return static_cast<int>(fl) - 1;
  // Ray parallel to this boundary. Left of (0, dy) is -x for dy > 0;
  // left of (dx, 0) is +y for dx > 0.
  const bool left_is_low = is_x_axis ? (other_d > 0.0) : (other_d < 0.0);
  return static_cast<int>(fl) - (left_is_low ? 1 : 0);
}

}  // namespace

int PixelCone::local_to_global(int l) const {
  if (l < 1 || l > size()) throw std::out_of_range("cone: local index out of range");
  return voxels[l - 1];
}

std::optional<int> PixelCone::global_to_local(int global_index) const {
  for (int l = 0; l < size(); ++l) {
    if (voxels[l] == global_index) return l + 1;
  }
  return std::nullopt;
}

double pixel_bearing(const Pose& pose, int pixel_index, const SensorSpec& sensor) {
  return pose.theta + sensor.fov * (pixel_index + 0.5) / sensor.pixels - 0.5 * sensor.fov;
}

PixelCone trace_ray(const GridSpec& spec, const Ray& ray) {
  PixelCone cone;
  cone.ray = ray;

  const double h = spec.voxel_size;
  const double dx = ray.dir_x;
  const double dy = ray.dir_y;

  // Clip [0, max_range) against the grid slab on each axis.
  double t_lo = 0.0;
  double t_hi = ray.max_range;
  const auto clip = [&](double o, double d, double lo, double hi) {
    if (d != 0.0) {
      double t1 = (lo - o) / d;
      double t2 = (hi - o) / d;
      if (t1 > t2) std::swap(t1, t2);
      t_lo = std::max(t_lo, t1);
      t_hi = std::min(t_hi, t2);
    } else if (o < lo || o > hi) {
      t_hi = -kInf;
    }
  };
  clip(ray.origin_x, dx, spec.origin_x, spec.origin_x + spec.extent_x);
  clip(ray.origin_y, dy, spec.origin_y, spec.origin_y + spec.extent_y);
  if (t_lo >= t_hi) return cone;

  // Starting cell at the clipped entry point (grid units, boundary noise
  // clamped back onto the grid).
  const double t0 = t_lo;
  double u = std::clamp((ray.origin_x + t0 * dx - spec.origin_x) / h, 0.0,
                        static_cast<double>(spec.nx));
  double v = std::clamp((ray.origin_y + t0 * dy - spec.origin_y) / h, 0.0,
                        static_cast<double>(spec.ny));
  int ix = start_cell(u, dx, dy, true);
  int iy = start_cell(v, dy, dx, false);

  const int step_x = sign(dx);
  const int step_y = sign(dy);
  const double t_delta_x = step_x != 0 ? h / std::abs(dx) : kInf;
  const double t_delta_y = step_y != 0 ? h / std::abs(dy) : kInf;
  double t_max_x = kInf;
  double t_max_y = kInf;
  if (step_x > 0) t_max_x = t0 + ((ix + 1) - u) * h / dx;
  if (step_x < 0) t_max_x = t0 + (u - ix) * h / -dx;
  if (step_y > 0) t_max_y = t0 + ((iy + 1) - v) * h / dy;
  if (step_y < 0) t_max_y = t0 + (v - iy) * h / -dy;

  double t_entry = t0;
  const int max_steps = spec.nx + spec.ny + 4;
  for (int step = 0; step < max_steps; ++step) {
    if (!spec.in_bounds(ix, iy)) break;
    if (t_entry >= ray.max_range) break;

    const int index = spec.index(ix, iy);
    const Point c = voxel_center(spec, index);
    cone.voxels.push_back(index);
    cone.entry_distance.push_back(t_entry);
    cone.center_range.push_back(std::hypot(c.x - ray.origin_x, c.y - ray.origin_y));

    bool advance_x;
    if (t_max_x < t_max_y) {
      advance_x = true;
    } else if (t_max_y < t_max_x) {
      advance_x = false;
    } else {
      // Exact corner crossing: take the counterclockwise side first.
      advance_x = step_x * step_y <= 0;
    }
    if (advance_x) {
      t_entry = t_max_x;
      t_max_x += t_delta_x;
      ix += step_x;
    } else {
      t_entry = t_max_y;
      t_max_y += t_delta_y;
      iy += step_y;
    }
  }
  return cone;
}

PixelCone trace_ray(const GridSpec& spec, const Pose& pose, int pixel_index,
                    const SensorSpec& sensor) {
  if (pixel_index < 0 || pixel_index >= sensor.pixels) {
    throw std::out_of_range("trace_ray: pixel index out of range");
  }
  const double bearing = pixel_bearing(pose, pixel_index, sensor);
  Ray ray;
  ray.origin_x = pose.x;
  ray.origin_y = pose.y;
  ray.dir_x = std::cos(bearing);
  ray.dir_y = std::sin(bearing);
  ray.max_range = sensor.max_range;
  return trace_ray(spec, ray);
}

}  // namespace bgrid
