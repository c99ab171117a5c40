#include "bgrid/log_odds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bgrid {

void IsmParams::validate() const {
  if (!(q_l > 0.0 && q_l <= 0.5 && q_h >= 0.5 && q_h < 1.0)) {
    throw std::invalid_argument("ism: need 0 < q_l <= 0.5 <= q_h < 1");
  }
  if (r_ramp <= 0.0 || r_top <= 0.0) {
    throw std::invalid_argument("ism: r_ramp and r_top must be positive");
  }
}

LogOddsMap LogOddsMap::prior(const GridSpec& spec, double prior_logodds) {
  LogOddsMap map;
  map.spec = spec;
  map.logodds.assign(spec.size(), prior_logodds);
  return map;
}

double LogOddsMap::occupancy_mean(int i) const {
  return 1.0 / (1.0 + std::exp(-logodds.at(i)));
}

double LogOddsMap::occupancy_variance(int i) const {
  const double p = occupancy_mean(i);
  return p * (1.0 - p);
}

std::vector<double> LogOddsMap::means() const {
  std::vector<double> out(logodds.size());
  for (std::size_t i = 0; i < logodds.size(); ++i) out[i] = occupancy_mean(static_cast<int>(i));
  return out;
}

std::vector<double> LogOddsMap::variances() const {
  std::vector<double> out(logodds.size());
  for (std::size_t i = 0; i < logodds.size(); ++i) {
    out[i] = occupancy_variance(static_cast<int>(i));
  }
  return out;
}

double ism_value(double d, double z, const IsmParams& params, double /*max_range*/) {
  const double ramp_lo = z - 0.5 * params.r_ramp;
  const double ramp_hi = z + 0.5 * params.r_ramp;
  if (d < ramp_lo) return params.q_l;
  if (d <= ramp_hi) {
    return params.q_l + (params.q_h - params.q_l) * (d - ramp_lo) / params.r_ramp;
  }
  if (d <= ramp_hi + params.r_top) return params.q_h;
  return 0.5;  // no information past the informed zone
}

double logit(double p) { return std::log(p / (1.0 - p)); }

void apply_ism_measurement(LogOddsMap& map, const PixelCone& cone, double z,
                           const IsmParams& params, const SensorSpec& sensor) {
  for (int l = 1; l <= cone.size(); ++l) {
    const int g = cone.local_to_global(l);
    const double q = ism_value(cone.center_range[l - 1], z, params, sensor.max_range);
    const double updated = map.logodds[g] + logit(q) - params.prior_logodds;
    map.logodds[g] = std::clamp(updated, -LogOddsMap::kMaxLogOdds, LogOddsMap::kMaxLogOdds);
  }
}

void logodds_update(LogOddsMap& map, const Scan& scan, const IsmParams& params,
                    const SensorSpec& sensor) {
  for (const Measurement& meas : scan) {
    const PixelCone cone = trace_ray(map.spec, meas.pose, meas.pixel_index, sensor);
    apply_ism_measurement(map, cone, meas.z, params, sensor);
  }
}

std::vector<IsmParams> ism_sweep_configs() {
  const double q_offsets[] = {0.05, 0.2, 0.4};
  const double ramps[] = {0.05, 0.1, 0.3, 1.0};
  const double tops[] = {0.05, 0.1, 0.3};
  std::vector<IsmParams> configs;
  configs.reserve(36);
  for (double q : q_offsets) {
    for (double ramp : ramps) {
      for (double top : tops) {
        IsmParams p;
        p.q_l = 0.5 - q;
        p.q_h = 0.5 + q;
        p.r_ramp = ramp;
        p.r_top = top;
        configs.push_back(p);
      }
    }
  }
  return configs;
}

}  // namespace bgrid
