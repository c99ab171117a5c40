#include "bgrid/map_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "bgrid/csv.hpp"

namespace bgrid {

void write_map_csv(const std::string& path, const GridSpec& spec,
                   std::span<const double> means, std::span<const double> variances) {
  if (static_cast<int>(means.size()) != spec.size() || variances.size() != means.size()) {
    throw std::invalid_argument("map csv: size mismatch");
  }
  CsvWriter csv(path, {"index", "x", "y", "mean", "variance"});
  for (int i = 0; i < spec.size(); ++i) {
    const Point c = voxel_center(spec, i);
    csv.field(i).field(c.x).field(c.y).field(means[i]).field(variances[i]);
    csv.endrow();
  }
}

void write_map_pgm(const std::string& path, const GridSpec& spec,
                   std::span<const double> means) {
  if (static_cast<int>(means.size()) != spec.size()) {
    throw std::invalid_argument("map pgm: size mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("map pgm: cannot open " + path);
  out << "P5\n" << spec.nx << " " << spec.ny << "\n255\n";
  for (int i = 0; i < spec.size(); ++i) {
    const double scaled = std::clamp(means[i], 0.0, 1.0) * 255.0;
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(scaled))));
  }
}

}  // namespace bgrid
