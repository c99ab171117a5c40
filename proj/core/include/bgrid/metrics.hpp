#pragma once

#include <span>
#include <vector>

#include "bgrid/grid.hpp"

namespace bgrid {

/// Total absolute map error: sum over voxels of |mean_i - truth_i|.
/// Throws std::invalid_argument on a size mismatch.
double map_error(std::span<const double> means, const GroundTruthMap& truth);

/// Inconsistency measure: sum over voxels of max(0, |error| - k * sigma),
/// i.e. how much estimation error falls outside the reported confidence
/// band. k defaults to 2.
double inconsistency(std::span<const double> means, std::span<const double> variances,
                     const GroundTruthMap& truth, double sigma_multiplier = 2.0);

/// Map error logged once per scan.
struct ErrorSeries {
  std::vector<double> time;  // seconds
  std::vector<double> total_abs_error;

  std::size_t size() const { return time.size(); }
  void push(double t, double err) {
    time.push_back(t);
    total_abs_error.push_back(err);
  }
};

}  // namespace bgrid
