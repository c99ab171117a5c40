#include "bgrid/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace bgrid {

double map_error(std::span<const double> means, const GroundTruthMap& truth) {
  if (means.size() != truth.occupancy.size()) {
    throw std::invalid_argument("map_error: estimate and truth sizes differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    total += std::abs(means[i] - truth.occupancy[i]);
  }
  return total;
}

double inconsistency(std::span<const double> means, std::span<const double> variances,
                     const GroundTruthMap& truth, double sigma_multiplier) {
  if (means.size() != truth.occupancy.size() || variances.size() != means.size()) {
    throw std::invalid_argument("inconsistency: estimate and truth sizes differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double err = std::abs(means[i] - truth.occupancy[i]);
    const double band = sigma_multiplier * std::sqrt(variances[i]);
    total += std::max(0.0, err - band);
  }
  return total;
}

}  // namespace bgrid
