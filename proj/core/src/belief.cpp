#include "bgrid/belief.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bgrid {

VoxelBelief::VoxelBelief(int bins) {
  if (bins < 2) throw std::invalid_argument("belief: need at least two bins");
  mass_.assign(bins, 1.0 / bins);
}

VoxelBelief VoxelBelief::point_mass(double m, int bins) {
  if (m < 0.0 || m > 1.0) throw std::invalid_argument("belief: point mass outside [0, 1]");
  VoxelBelief b(bins);
  std::fill(b.mass_.begin(), b.mass_.end(), 0.0);
  const int j = std::clamp(static_cast<int>(m * bins), 0, bins - 1);
  b.mass_[j] = 1.0;
  return b;
}

VoxelBelief VoxelBelief::from_weights(std::vector<double> weights) {
  if (weights.size() < 2) throw std::invalid_argument("belief: need at least two bins");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("belief: negative weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("belief: zero total mass");
  for (double& w : weights) w /= total;
  VoxelBelief b(static_cast<int>(weights.size()));
  b.mass_ = std::move(weights);
  return b;
}

double VoxelBelief::mean() const {
  double m = 0.0;
  for (int j = 0; j < bins(); ++j) m += mass_[j] * center(j);
  return m;
}

double VoxelBelief::variance() const {
  const double m = mean();
  double v = 0.0;
  for (int j = 0; j < bins(); ++j) {
    const double d = center(j) - m;
    v += mass_[j] * d * d;
  }
  return v;
}

double VoxelBelief::total_mass() const {
  double t = 0.0;
  for (double w : mass_) t += w;
  return t;
}

bool VoxelBelief::reweight(std::span<const double> multipliers, double min_mass) {
  double total = 0.0;
  for (int j = 0; j < bins(); ++j) {
    // Multipliers are nonnegative up to rounding; tiny negatives clamp to 0.
    const double w = mass_[j] * std::max(multipliers[j], 0.0);
    total += w;
  }
  if (!(total >= min_mass)) return false;
  const double inv = 1.0 / total;
  for (int j = 0; j < bins(); ++j) {
    mass_[j] = mass_[j] * std::max(multipliers[j], 0.0) * inv;
  }
  return true;
}

MapBelief MapBelief::uniform_prior(const GridSpec& spec, int bins) {
  MapBelief map;
  map.spec = spec;
  map.beliefs.assign(spec.size(), VoxelBelief(bins));
  map.mean_cache.assign(spec.size(), map.beliefs.empty() ? 0.5 : map.beliefs[0].mean());
  return map;
}

std::vector<double> MapBelief::variances() const {
  std::vector<double> out(beliefs.size());
  for (std::size_t i = 0; i < beliefs.size(); ++i) out[i] = beliefs[i].variance();
  return out;
}

}  // namespace bgrid
