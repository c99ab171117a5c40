#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bgrid/enumeration.hpp"

namespace bgrid {

/// One single-ray comparison: L1 distance of each mapper's posterior means
/// from the exact enumeration posterior.
struct OracleTrial {
  int voxels = 0;
  double l1_density = 0.0;
  double l1_logodds = 0.0;
};

struct OracleStudySummary {
  int trials = 0;
  int density_closer = 0;  // trials where the density mapper is strictly closer
  double screening_max_deviation = 0.0;
  std::vector<OracleTrial> rows;
};

/// Runs `trials` seeded single-ray worlds (2..8 voxels, Bernoulli(0.5)
/// truth, 5 noisy readings each), maps them with both mappers, and measures
/// each against exact enumeration. Also reports the worst cause-screening
/// deviation over ten 4-voxel worlds. Writes oracle.csv when out_dir is
/// nonempty.
OracleStudySummary run_oracle_study(std::uint64_t seed, int trials,
                                    const std::string& out_dir = "", int scans_per_trial = 5);

}  // namespace bgrid
