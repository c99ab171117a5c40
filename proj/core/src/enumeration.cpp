#include "bgrid/enumeration.hpp"

#include <cmath>
#include <stdexcept>

#include "bgrid/sensor.hpp"

namespace bgrid {

namespace {

/// Range of the first occupied voxel of map bits, or max_range when empty.
double first_hit_range(unsigned bits, const SmallWorld& world, double max_range) {
  for (int l = 0; l < world.size(); ++l) {
    if (bits & (1u << l)) return world.ranges[l];
  }
  return max_range;
}

}  // namespace

void SmallWorld::validate() const {
  if (size() < 1 || size() > kMaxVoxels) {
    throw std::invalid_argument("small world: voxel count outside [1, 12]");
  }
  for (int l = 1; l < size(); ++l) {
    if (!(ranges[l] > ranges[l - 1])) {
      throw std::invalid_argument("small world: ranges must be strictly increasing");
    }
  }
  if (ranges[0] <= 0.0) throw std::invalid_argument("small world: ranges must be positive");
}

std::vector<double> exact_posterior(const SmallWorld& world, const std::vector<double>& zs,
                                    const SensorSpec& sensor) {
  world.validate();
  const int n = world.size();
  const unsigned count = 1u << n;

  std::vector<double> occupied_mass(n, 0.0);
  double total_mass = 0.0;
  for (unsigned bits = 0; bits < count; ++bits) {
    const double mu = first_hit_range(bits, world, sensor.max_range);
    double weight = 1.0;  // uniform Bernoulli(0.5) prior is a common factor
    for (double z : zs) weight *= gaussian_pdf(z, mu, sensor.noise_var);
    total_mass += weight;
    for (int l = 0; l < n; ++l) {
      if (bits & (1u << l)) occupied_mass[l] += weight;
    }
  }

  std::vector<double> means(n);
  for (int l = 0; l < n; ++l) means[l] = occupied_mass[l] / total_mass;
  return means;
}

double cause_screening_deviation(const SmallWorld& world, const SensorSpec& sensor) {
  world.validate();
  if (world.size() > 8) {
    throw std::invalid_argument("cause screening check: limited to 8 voxels");
  }
  const int n = world.size();
  const unsigned count = 1u << n;

  // cause id c: 0..n-1 = voxel c is the first hit; n = nothing hit.
  const auto cause_of = [&](unsigned bits) {
    for (int l = 0; l < n; ++l) {
      if (bits & (1u << l)) return l;
    }
    return n;
  };
  const auto cause_range = [&](int c) {
    return c < n ? world.ranges[c] : sensor.max_range;
  };

  double worst = 0.0;
  for (int c = 0; c <= n; ++c) {
    // Reading-free posterior p(o^i = 1 | c) over maps whose cause is c.
    std::vector<double> base(n, 0.0);
    double base_total = 0.0;
    for (unsigned bits = 0; bits < count; ++bits) {
      if (cause_of(bits) != c) continue;
      base_total += 1.0;
      for (int l = 0; l < n; ++l) {
        if (bits & (1u << l)) base[l] += 1.0;
      }
    }
    if (base_total == 0.0) continue;

    for (int zi = 0; zi <= 20; ++zi) {
      const double z = sensor.max_range * (zi + 0.5) / 21.0;
      std::vector<double> with_z(n, 0.0);
      double with_z_total = 0.0;
      for (unsigned bits = 0; bits < count; ++bits) {
        if (cause_of(bits) != c) continue;
        const double like = gaussian_pdf(z, cause_range(cause_of(bits)), sensor.noise_var);
        with_z_total += like;
        for (int l = 0; l < n; ++l) {
          if (bits & (1u << l)) with_z[l] += like;
        }
      }
      for (int l = 0; l < n; ++l) {
        worst = std::max(worst, std::abs(with_z[l] / with_z_total - base[l] / base_total));
      }
    }
  }
  return worst;
}

bool cause_screens_measurement(const SmallWorld& world, const SensorSpec& sensor, double tol) {
  return cause_screening_deviation(world, sensor) < tol;
}

}  // namespace bgrid
