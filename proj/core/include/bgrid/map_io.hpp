#pragma once

#include <span>
#include <string>

#include "bgrid/grid.hpp"

namespace bgrid {

/// Writes one row per voxel: index, x, y, mean, variance.
void write_map_csv(const std::string& path, const GridSpec& spec,
                   std::span<const double> means, std::span<const double> variances);

/// Binary PGM (P5, maxval 255): mean occupancy scaled to 0..255, row-major
/// with the iy = 0 row first.
void write_map_pgm(const std::string& path, const GridSpec& spec,
                   std::span<const double> means);

}  // namespace bgrid
