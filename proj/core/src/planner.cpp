#include "bgrid/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bgrid {

namespace {

/// Exact unicycle step: constant (speed, turn_rate) held for dt seconds.
Pose integrate(const Pose& pose, const Control& u, double dt) {
  Pose next;
  if (std::abs(u.turn_rate) < 1e-12) {
    next.x = pose.x + u.speed * dt * std::cos(pose.theta);
    next.y = pose.y + u.speed * dt * std::sin(pose.theta);
    next.theta = pose.theta;
  } else {
    const double radius = u.speed / u.turn_rate;
    const double theta1 = pose.theta + u.turn_rate * dt;
    next.x = pose.x + radius * (std::sin(theta1) - std::sin(pose.theta));
    next.y = pose.y - radius * (std::cos(theta1) - std::cos(pose.theta));
    next.theta = wrap_angle(theta1);
  }
  return next;
}

Scan most_likely_scan(const MapBelief& map, const Pose& pose, const SensorSpec& sensor,
                      double z_resolution) {
  Scan scan;
  scan.reserve(sensor.pixels);
  for (int pixel = 0; pixel < sensor.pixels; ++pixel) {
    scan.push_back({pixel, most_likely_observation(map, pose, pixel, sensor, z_resolution), pose});
  }
  return scan;
}

}  // namespace

double most_likely_observation(const MapBelief& map, const Pose& pose, int pixel_index,
                               const SensorSpec& sensor, double z_resolution) {
  const PixelCone cone = trace_ray(map.spec, pose, pixel_index, sensor);
  if (cone.empty()) return sensor.max_range;

  const int steps = std::max(1, static_cast<int>(std::round(sensor.max_range / z_resolution)));
  double best_z = sensor.max_range;
  double best_density = -1.0;
  for (int j = 1; j <= steps; ++j) {
    const double z = j * z_resolution;
    const double density = forward_density(z, map, cone, sensor);
    if (density > best_density) {
      best_density = density;
      best_z = z;
    }
  }
  return best_z;
}

std::vector<MapBelief> predict_map_belief(const MapBelief& map, const Path& path,
                                          const SensorSpec& sensor,
                                          const PlannerOptions& options) {
  std::vector<MapBelief> beliefs;
  beliefs.reserve(path.waypoints.size() + 1);
  beliefs.push_back(map);
  for (const Pose& pose : path.waypoints) {
    MapBelief next = beliefs.back();
    update_map(next, most_likely_scan(next, pose, sensor, options.z_resolution), sensor);
    beliefs.push_back(std::move(next));
  }
  return beliefs;
}

double one_step_cost(const MapBelief& map, const Pose& pose, const PlannerOptions& options) {
  const auto voxel = voxel_at(map.spec, pose.x, pose.y);
  if (!voxel) throw std::domain_error("one_step_cost: pose outside the grid");
  const double var = map.variance(*voxel);
  return map.mean(*voxel) + std::pow(var, options.variance_exponent);
}

double path_cost(const MapBelief& map, const Path& path, const SensorSpec& sensor,
                 const PlannerOptions& options) {
  // Same recursion as predict_map_belief but with one working copy: the cost
  // at waypoint n is charged against the belief that already includes the
  // predicted observation at n, which makes the sum exactly additive across
  // path splits.
  MapBelief rolled = map;
  double total = 0.0;
  for (const Pose& pose : path.waypoints) {
    update_map(rolled, most_likely_scan(rolled, pose, sensor, options.z_resolution), sensor);
    total += one_step_cost(rolled, pose, options);
  }
  return total;
}

std::vector<Path> rrt_candidates(const Pose& start, const Point& goal, const GridSpec& spec,
                                 Rng& rng, int max_candidates, const RrtOptions& options) {
  if (max_candidates < 1) throw std::invalid_argument("rrt: max_candidates must be >= 1");

  const auto dist_to_goal = [&](const Pose& p) { return std::hypot(p.x - goal.x, p.y - goal.y); };

  if (dist_to_goal(start) <= options.goal_radius) {
    Path trivial;
    trivial.waypoints.push_back(start);
    return {trivial};
  }

  struct Node {
    Pose pose;
    int parent;
    Control control;  // control that produced this node
  };
  std::vector<Node> nodes{{start, -1, {}}};

  static constexpr double kTurnRates[] = {0.0, 0.4, -0.4, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0};
  const double dt = options.step_length / options.speed;

  std::vector<Path> found;
  for (int iter = 0; iter < options.max_iterations && static_cast<int>(found.size()) < max_candidates;
       ++iter) {
    Point target;
    if (rng.uniform01() < options.goal_bias) {
      target = goal;
    } else {
      target.x = rng.uniform(spec.origin_x, spec.origin_x + spec.extent_x);
      target.y = rng.uniform(spec.origin_y, spec.origin_y + spec.extent_y);
    }

    int nearest = 0;
    double nearest_d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
      const double dx = nodes[i].pose.x - target.x;
      const double dy = nodes[i].pose.y - target.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < nearest_d2) {
        nearest_d2 = d2;
        nearest = i;
      }
    }

    // Steer: among the fixed turn rates, the endpoint closest to the sample.
    Pose best_pose;
    Control best_control;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (double w : kTurnRates) {
      const Control u{options.speed, w};
      const Pose candidate = integrate(nodes[nearest].pose, u, dt);
      if (!voxel_at(spec, candidate.x, candidate.y)) continue;  // stay inside the grid
      const double dx = candidate.x - target.x;
      const double dy = candidate.y - target.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best_pose = candidate;
        best_control = u;
      }
    }
    if (!std::isfinite(best_d2)) continue;

    nodes.push_back({best_pose, nearest, best_control});
    if (dist_to_goal(best_pose) <= options.goal_radius) {
      Path path;
      for (int i = static_cast<int>(nodes.size()) - 1; i >= 0; i = nodes[i].parent) {
        path.waypoints.push_back(nodes[i].pose);
        if (nodes[i].parent >= 0) path.controls.push_back(nodes[i].control);
      }
      std::reverse(path.waypoints.begin(), path.waypoints.end());
      std::reverse(path.controls.begin(), path.controls.end());
      found.push_back(std::move(path));
    }
  }
  return found;
}

PlanResult select_path(const MapBelief& map, const std::vector<Path>& candidates,
                       const SensorSpec& sensor, const PlannerOptions& options) {
  if (candidates.empty()) throw std::invalid_argument("select_path: no candidates");

  PlanResult result;
  result.per_candidate_costs.reserve(candidates.size());
  for (const Path& path : candidates) {
    result.per_candidate_costs.push_back(path_cost(map, path, sensor, options));
  }
  result.chosen_index = 0;
  for (int i = 1; i < static_cast<int>(candidates.size()); ++i) {
    if (result.per_candidate_costs[i] < result.per_candidate_costs[result.chosen_index]) {
      result.chosen_index = i;
    }
  }
  result.chosen = candidates[result.chosen_index];
  result.cost = result.per_candidate_costs[result.chosen_index];
  return result;
}

}  // namespace bgrid
