#pragma once

#include <vector>

#include "bgrid/belief.hpp"
#include "bgrid/mapper.hpp"
#include "bgrid/rng.hpp"
#include "bgrid/sensor.hpp"

namespace bgrid {

/// Constant-speed unicycle control held for one step.
struct Control {
  double speed = 1.0;      // m/s
  double turn_rate = 0.0;  // rad/s
};

/// A candidate trajectory: poses plus the control taken out of each pose.
/// controls.size() == waypoints.size() - 1 (empty for a trivial path).
struct Path {
  std::vector<Pose> waypoints;
  std::vector<Control> controls;
};

struct PlanResult {
  Path chosen;
  double cost = 0.0;
  std::vector<double> per_candidate_costs;
  int chosen_index = -1;
};

struct PlannerOptions {
  /// Exponent applied to the variance term of the one-step cost
  /// (cost = mean + variance^exponent); 0.5 gives mean + stddev.
  double variance_exponent = 1.0;
  /// Resolution of the observation-mode search over (0, max_range].
  double z_resolution = 0.01;
};

struct RrtOptions {
  double step_length = 0.1;    // meters per tree edge
  double goal_bias = 0.1;
  double goal_radius = 0.1;    // meters
  int max_iterations = 4000;
  double speed = 1.0;          // m/s, fixed
};

/// Mode of the range density at the pose/pixel: argmax over a z grid at
/// z_resolution spacing; first maximum wins. Empty cone -> max_range.
double most_likely_observation(const MapBelief& map, const Pose& pose, int pixel_index,
                               const SensorSpec& sensor, double z_resolution = 0.01);

/// Rolls the density map forward along a path, feeding each waypoint's
/// most-likely scan back into the map. Returns size()+1 beliefs: element 0
/// is the input map, element n the belief after the predicted observation
/// at waypoint n-1. The input map is never mutated.
std::vector<MapBelief> predict_map_belief(const MapBelief& map, const Path& path,
                                          const SensorSpec& sensor,
                                          const PlannerOptions& options = {});

/// Occupancy cost of standing at pose: mean + variance^exponent of the voxel
/// containing the pose. Throws std::domain_error when the pose is outside
/// the grid.
double one_step_cost(const MapBelief& map, const Pose& pose,
                     const PlannerOptions& options = {});

/// Sum of one-step costs along the path, each evaluated against the belief
/// predicted up to (and including) that waypoint's observation. Additive
/// under path concatenation with consistent belief threading.
double path_cost(const MapBelief& map, const Path& path, const SensorSpec& sensor,
                 const PlannerOptions& options = {});

/// Kinematic RRT candidate generation: grows a unicycle tree from start with
/// fixed step length and goal bias, and returns up to max_candidates
/// distinct root-to-goal-region paths. Deterministic under the rng seed.
/// Returns an empty list when the goal region is never reached.
std::vector<Path> rrt_candidates(const Pose& start, const Point& goal, const GridSpec& spec,
                                 Rng& rng, int max_candidates, const RrtOptions& options = {});

/// Evaluates every candidate and picks the argmin; ties break to the lowest
/// candidate index. Throws std::invalid_argument on an empty candidate list.
PlanResult select_path(const MapBelief& map, const std::vector<Path>& candidates,
                       const SensorSpec& sensor, const PlannerOptions& options = {});

}  // namespace bgrid
