#include "bgrid/planner.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "test_util.hpp"

namespace bgrid {
namespace {

const GridSpec kGrid = GridSpec::make(2.0, 2.0, 0.1, -1.0, -1.0);

MapBelief uniform_map() { return MapBelief::uniform_prior(kGrid); }

MapBelief constant_map(double m, int bins = VoxelBelief::kDefaultBins) {
  MapBelief map = MapBelief::uniform_prior(kGrid, bins);
  for (int i = 0; i < map.size(); ++i) {
    map.beliefs[i] = VoxelBelief::point_mass(m, bins);
    map.refresh_mean(i);
  }
  return map;
}

Path straight_path(Pose start, int steps, double step_len = 0.1) {
  Path path;
  path.waypoints.push_back(start);
  for (int s = 0; s < steps; ++s) {
    Pose next = path.waypoints.back();
    next.x += step_len * std::cos(next.theta);
    next.y += step_len * std::sin(next.theta);
    path.waypoints.push_back(next);
    path.controls.push_back({1.0, 0.0});
  }
  return path;
}

TEST(MostLikelyObservation, CertainVoxelAtHalfMeter) {
  const SensorSpec sensor;
  // Camera placed so the center ray passes through voxel centers; the only
  // occupied belief sits 0.5 m out.
  const Pose pose = Pose::make(0.05, -0.05, M_PI / 2);
  MapBelief map = constant_map(0.0);
  const auto hit = voxel_at(kGrid, 0.05, 0.45);
  ASSERT_TRUE(hit.has_value());
  map.beliefs[*hit] = VoxelBelief::point_mass(1.0);
  map.refresh_mean(*hit);

  EXPECT_NEAR(most_likely_observation(map, pose, sensor.pixels / 2, sensor), 0.5, 1e-9);
}

TEST(MostLikelyObservation, FreeMapPeaksAtMaxRange) {
  const SensorSpec sensor;
  const MapBelief map = constant_map(0.0);
  EXPECT_DOUBLE_EQ(most_likely_observation(map, Pose::make(0, 0, 1.0), 7, sensor), 1.0);
}

TEST(MostLikelyObservation, EmptyConeReturnsMaxRange) {
  const SensorSpec sensor;
  const MapBelief map = uniform_map();
  // Outside the grid pointing away.
  EXPECT_DOUBLE_EQ(most_likely_observation(map, Pose::make(3.0, 3.0, 0.1), 7, sensor), 1.0);
}

TEST(MostLikelyObservation, ReachDiscountFavorsNearerOfTwoEqualCauses) {
  const SensorSpec sensor;
  const Pose pose = Pose::make(0.05, -0.05, M_PI / 2);
  MapBelief map = constant_map(0.0);
  for (double y : {0.25, 0.65}) {  // causes at 0.3 and 0.7 meters
    const auto v = voxel_at(kGrid, 0.05, y);
    ASSERT_TRUE(v.has_value());
    map.beliefs[*v] = VoxelBelief::point_mass(0.6);
    map.refresh_mean(*v);
  }
  const double zml = most_likely_observation(map, pose, sensor.pixels / 2, sensor);
  EXPECT_NEAR(zml, 0.3, 0.05);
}

TEST(OneStepCost, MeanPlusVariance) {
  const SensorSpec sensor;
  MapBelief map = uniform_map();
  const Pose inside = Pose::make(0.31, 0.14, 0.0);
  // Uniform prior voxel: 0.5 + ~1/12.
  EXPECT_NEAR(one_step_cost(map, inside), 0.5 + 1.0 / 12.0, 1e-4);

  const auto v = voxel_at(kGrid, inside.x, inside.y);
  map.beliefs[*v] = VoxelBelief::point_mass(1.0);
  map.refresh_mean(*v);
  EXPECT_NEAR(one_step_cost(map, inside), 1.0, 5e-3);

  map.beliefs[*v] = VoxelBelief::point_mass(0.0);
  map.refresh_mean(*v);
  EXPECT_NEAR(one_step_cost(map, inside), 0.0, 5e-3);

  EXPECT_THROW(one_step_cost(map, Pose::make(5.0, 0.0, 0.0)), std::domain_error);
}

TEST(OneStepCost, VarianceExponentKnob) {
  MapBelief map = uniform_map();
  const Pose pose = Pose::make(0.0, 0.0, 0.0);
  PlannerOptions options;
  options.variance_exponent = 0.5;
  const auto v = voxel_at(kGrid, pose.x, pose.y);
  const double var = map.variance(*v);
  EXPECT_NEAR(one_step_cost(map, pose, options), 0.5 + std::sqrt(var), 1e-9);
}

TEST(PathCost, EmptyPathCostsNothing) {
  const SensorSpec sensor;
  EXPECT_DOUBLE_EQ(path_cost(uniform_map(), Path{}, sensor), 0.0);
}

TEST(PathCost, AdditiveAcrossSplits) {
  const SensorSpec sensor;
  Rng rng(23);
  const MapBelief map = bgrid::testing::random_map(kGrid, rng);
  const Path path = straight_path(Pose::make(-0.5, -0.5, 0.4), 8);

  Path front, back;
  front.waypoints.assign(path.waypoints.begin(), path.waypoints.begin() + 4);
  back.waypoints.assign(path.waypoints.begin() + 4, path.waypoints.end());

  const double whole = path_cost(map, path, sensor);
  const auto beliefs = predict_map_belief(map, front, sensor);
  const double split =
      path_cost(map, front, sensor) + path_cost(beliefs.back(), back, sensor);
  EXPECT_NEAR(whole, split, 1e-9);
}

TEST(PredictMapBelief, ReturnsRollingBeliefsWithoutMutatingInput) {
  const SensorSpec sensor;
  const MapBelief map = uniform_map();
  const MapBelief before = map;
  const Path path = straight_path(Pose::make(0.0, 0.0, 0.0), 3);

  const auto beliefs = predict_map_belief(map, path, sensor);
  ASSERT_EQ(beliefs.size(), path.waypoints.size() + 1);
  for (int i = 0; i < map.size(); ++i) EXPECT_EQ(map.mean(i), before.mean(i));

  // Element zero is the input; later elements incorporate predicted readings.
  double moved = 0.0;
  for (int i = 0; i < map.size(); ++i) {
    EXPECT_EQ(beliefs[0].mean(i), map.mean(i));
    moved += std::abs(beliefs.back().mean(i) - map.mean(i));
  }
  EXPECT_GT(moved, 0.1);
}

TEST(PredictMapBelief, EmptyPathYieldsSingleton) {
  const SensorSpec sensor;
  const MapBelief map = uniform_map();
  const auto beliefs = predict_map_belief(map, Path{}, sensor);
  ASSERT_EQ(beliefs.size(), 1u);
  for (int i = 0; i < map.size(); ++i) EXPECT_EQ(beliefs[0].mean(i), map.mean(i));
}

TEST(PredictMapBelief, KnownFreeSpaceStaysPut) {
  const SensorSpec sensor;
  const MapBelief map = constant_map(0.0);
  const Path path = straight_path(Pose::make(-0.3, 0.0, 0.0), 4);
  const auto beliefs = predict_map_belief(map, path, sensor);
  for (int i = 0; i < map.size(); ++i) {
    EXPECT_NEAR(beliefs.back().mean(i), map.mean(i), 1e-6);
  }
}

TEST(PredictMapBelief, ObservedVarianceShrinksOnAverage) {
  const SensorSpec sensor;
  const MapBelief map = uniform_map();
  const Path path = straight_path(Pose::make(0.0, 0.0, 0.7), 3);
  const auto beliefs = predict_map_belief(map, path, sensor);

  double before = 0.0, after = 0.0;
  int observed = 0;
  for (int i = 0; i < map.size(); ++i) {
    if (beliefs.back().mean(i) == map.mean(i)) continue;
    before += map.variance(i);
    after += beliefs.back().variance(i);
    ++observed;
  }
  ASSERT_GT(observed, 0);
  EXPECT_LT(after, before);
}

TEST(RrtCandidates, TrivialWhenStartMeetsGoal) {
  Rng rng(1);
  const Pose start = Pose::make(0.2, 0.2, 0.0);
  const auto paths = rrt_candidates(start, {0.2, 0.2}, kGrid, rng, 5);
  ASSERT_EQ(paths.size(), 1u);
  ASSERT_EQ(paths[0].waypoints.size(), 1u);
  EXPECT_TRUE(paths[0].controls.empty());
}

TEST(RrtCandidates, DeterministicUnderSeed) {
  const Point goal{0.7, 0.6};
  const Pose start = Pose::make(-0.5, -0.5, 0.3);
  Rng a(2024), b(2024);
  const auto pa = rrt_candidates(start, goal, kGrid, a, 4);
  const auto pb = rrt_candidates(start, goal, kGrid, b, 4);
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t c = 0; c < pa.size(); ++c) {
    ASSERT_EQ(pa[c].waypoints.size(), pb[c].waypoints.size());
    for (std::size_t s = 0; s < pa[c].waypoints.size(); ++s) {
      EXPECT_EQ(pa[c].waypoints[s].x, pb[c].waypoints[s].x);
      EXPECT_EQ(pa[c].waypoints[s].y, pb[c].waypoints[s].y);
      EXPECT_EQ(pa[c].waypoints[s].theta, pb[c].waypoints[s].theta);
    }
  }
}

TEST(RrtCandidates, ReachesGoalRegionInOpenWorld) {
  Rng rng(5);
  RrtOptions options;
  options.max_iterations = 2000;
  const auto paths =
      rrt_candidates(Pose::make(-0.6, -0.6, 0.0), {0.6, 0.6}, kGrid, rng, 3, options);
  ASSERT_GE(paths.size(), 1u);
  for (const Path& p : paths) {
    EXPECT_LE(std::hypot(p.waypoints.back().x - 0.6, p.waypoints.back().y - 0.6),
              options.goal_radius + 1e-12);
    ASSERT_EQ(p.controls.size(), p.waypoints.size() - 1);
    for (std::size_t s = 1; s < p.waypoints.size(); ++s) {
      const double step = std::hypot(p.waypoints[s].x - p.waypoints[s - 1].x,
                                     p.waypoints[s].y - p.waypoints[s - 1].y);
      EXPECT_LE(step, options.step_length + 1e-9);  // chord never exceeds the arc
    }
  }
}

TEST(SelectPath, SingleCandidateWins) {
  const SensorSpec sensor;
  const MapBelief map = constant_map(0.0);
  const std::vector<Path> candidates = {straight_path(Pose::make(0.0, 0.0, 0.0), 2)};
  const PlanResult result = select_path(map, candidates, sensor);
  EXPECT_EQ(result.chosen_index, 0);
  EXPECT_EQ(result.per_candidate_costs.size(), 1u);
}

TEST(SelectPath, TieBreaksToLowestIndex) {
  const SensorSpec sensor;
  const MapBelief map = constant_map(0.0);
  const Path path = straight_path(Pose::make(0.0, 0.0, 0.0), 2);
  const PlanResult result = select_path(map, {path, path, path}, sensor);
  EXPECT_EQ(result.chosen_index, 0);
}

TEST(SelectPath, AvoidsOccupiedCorridor) {
  const SensorSpec sensor;
  MapBelief map = constant_map(0.0);
  // Occupy the straight corridor along +x from the start.
  for (double x = 0.05; x < 0.6; x += 0.1) {
    const auto v = voxel_at(kGrid, x, 0.05);
    map.beliefs[*v] = VoxelBelief::point_mass(1.0);
    map.refresh_mean(*v);
  }
  const Path through = straight_path(Pose::make(0.05, 0.05, 0.0), 4);
  Path detour = straight_path(Pose::make(0.05, -0.35, 0.0), 4);
  const PlanResult result = select_path(map, {through, detour}, sensor);
  EXPECT_EQ(result.chosen_index, 1);
}

TEST(SelectPath, AddingWorseCandidateNeverChangesChoice) {
  const SensorSpec sensor;
  Rng rng(31);
  const MapBelief map = bgrid::testing::random_map(kGrid, rng);
  const Path a = straight_path(Pose::make(-0.4, 0.0, 0.0), 3);
  const Path b = straight_path(Pose::make(0.0, -0.4, M_PI / 2), 3);
  Path longer = straight_path(Pose::make(-0.4, 0.2, 0.0), 9);

  const PlanResult base = select_path(map, {a, b}, sensor);
  const PlanResult with_worse = select_path(map, {a, b, longer}, sensor);
  ASSERT_GT(with_worse.per_candidate_costs[2], base.cost);
  EXPECT_EQ(with_worse.chosen_index, base.chosen_index);

  // Permuting candidates relabels the argmin but not the chosen path.
  const PlanResult permuted = select_path(map, {b, a}, sensor);
  EXPECT_NEAR(permuted.cost, base.cost, 1e-12);
}

TEST(SelectPath, EmptyCandidateListIsAnError) {
  EXPECT_THROW(select_path(uniform_map(), {}, SensorSpec{}), std::invalid_argument);
}

TEST(SelectPath, ZeroVariancePathBeatsEqualMeanHighVariance) {
  const SensorSpec sensor;
  MapBelief map = constant_map(0.0);

  // Two corridors with mean 0.5 beliefs: one confident, one maximally spread.
  const Pose confident_start = Pose::make(-0.45, 0.45, 0.0);
  const Pose spread_start = Pose::make(-0.45, -0.45, 0.0);
  for (int s = 0; s <= 3; ++s) {
    const auto confident = voxel_at(kGrid, confident_start.x + 0.1 * s, confident_start.y);
    map.beliefs[*confident] = VoxelBelief::point_mass(0.5);
    map.refresh_mean(*confident);

    const auto spread = voxel_at(kGrid, spread_start.x + 0.1 * s, spread_start.y);
    std::vector<double> w(VoxelBelief::kDefaultBins, 0.0);
    w.front() = 0.5;
    w.back() = 0.5;
    map.beliefs[*spread] = VoxelBelief::from_weights(std::move(w));
    map.refresh_mean(*spread);
  }

  // Readings during rollout barely move point-mass vs spread beliefs at
  // equal means, so the variance term decides.
  const PlanResult result =
      select_path(map, {straight_path(confident_start, 3), straight_path(spread_start, 3)},
                  sensor);
  EXPECT_EQ(result.chosen_index, 0);
}

}  // namespace
}  // namespace bgrid
