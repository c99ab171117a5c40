#pragma once

#include <span>
#include <vector>

#include "bgrid/grid.hpp"

namespace bgrid {

/// Discretized pdf over the occupancy value of one voxel.
///
/// The density is a histogram with K equal bins over [0, 1]; bin j carries
/// probability mass at the bin center (j + 0.5) / K. K = 101 by default.
/// Weights are nonnegative and sum to one.
class VoxelBelief {
 public:
  static constexpr int kDefaultBins = 101;

  /// Uniform belief over [0, 1].
  explicit VoxelBelief(int bins = kDefaultBins);

  /// All mass in the bin whose center is nearest to m.
  static VoxelBelief point_mass(double m, int bins = kDefaultBins);

  /// Arbitrary weights; normalizes. Throws std::invalid_argument on fewer
  /// than two bins, a negative weight, or zero total mass.
  static VoxelBelief from_weights(std::vector<double> weights);

  int bins() const { return static_cast<int>(mass_.size()); }
  double center(int j) const { return (j + 0.5) / static_cast<double>(bins()); }
  double mass(int j) const { return mass_[j]; }
  std::span<const double> masses() const { return mass_; }

  double mean() const;
  /// Second central moment, computed against the mean (stable form).
  double variance() const;

  double total_mass() const;

  /// Multiplies bin j by weight w_j and renormalizes. Used by the density
  /// update; wraps the raw storage so the normalization invariant stays in
  /// one place. Returns false (leaving the belief untouched) when the
  /// reweighted mass falls below min_mass.
  bool reweight(std::span<const double> multipliers, double min_mass = 1e-300);

 private:
  std::vector<double> mass_;
};

/// Per-voxel beliefs for the whole grid plus a cache of per-voxel means.
/// The cache is refreshed on every mutation; readers may rely on
/// mean(i) == beliefs[i].mean() to within 1e-12 at all times.
///
/// MapBelief is a value type: snapshot by copying, mutate under a single
/// writer. Cross-run parallelism copies maps, never shares them.
struct MapBelief {
  GridSpec spec;
  std::vector<VoxelBelief> beliefs;
  std::vector<double> mean_cache;

  /// Uniform prior over every voxel; mean 0.5, variance ~= 1/12.
  static MapBelief uniform_prior(const GridSpec& spec, int bins = VoxelBelief::kDefaultBins);

  int size() const { return static_cast<int>(beliefs.size()); }
  double mean(int i) const { return mean_cache[i]; }
  double variance(int i) const { return beliefs[i].variance(); }

  void refresh_mean(int i) { mean_cache[i] = beliefs[i].mean(); }

  std::vector<double> means() const { return mean_cache; }
  std::vector<double> variances() const;
};

}  // namespace bgrid
