#pragma once

#include <functional>
#include <optional>

#include "bgrid/belief.hpp"
#include "bgrid/sensor.hpp"

namespace bgrid {

/// Posterior over causes after seeing a reading, together with the
/// normalizer eta' = 1 / (range density of the reading).
struct CausePosterior {
  CauseDistribution weights;
  double normalizer = 0.0;
};

/// Per-voxel affine reweighting of the occupancy pdf: the posterior is
/// proportional to (a * m + b) times the prior, evaluated at bin centers.
struct AffineUpdate {
  double a = 0.0;
  double b = 1.0;

  double at(double m) const { return a * m + b; }
};

/// Override point for the per-cause reading likelihood; null means the
/// Gaussian range model. Tests use a constant function to feed the mapper
/// uninformative readings.
using LikelihoodFn = std::function<double(double z, const Cause& cause)>;

/// Counters accumulated across density updates. min_multiplier tracks the
/// most negative affine factor seen at any bin center (theory keeps it
/// >= 0 up to rounding); expected_multiplier_dev tracks |E_prior[a m + b] - 1|.
struct UpdateStats {
  long voxel_updates = 0;
  long skipped_pixels = 0;
  long degenerate_voxels = 0;
  double min_multiplier = 0.0;
  double min_posterior_mass = 1.0;
  double max_expected_multiplier_dev = 0.0;

  void merge(const UpdateStats& other);
};

struct UpdateOptions {
  /// Prior means are clamped into [eps, 1-eps] before dividing.
  double saturation_eps = 1e-6;
  LikelihoodFn likelihood;     // null -> Gaussian range model
  UpdateStats* stats = nullptr;
};

/// Cause posterior given the current map belief and reading z:
/// weight(c) proportional to likelihood(z|c) * cause_prior(c), no-hit
/// included. Returns nullopt when every mixture term underflows to zero
/// (degenerate reading; the caller skips the pixel).
std::optional<CausePosterior> cause_posterior(const MapBelief& map, const PixelCone& cone,
                                              double z, const SensorSpec& sensor,
                                              const LikelihoodFn& likelihood = {});

/// Affine coefficients for voxel i_local given the cause posterior. The
/// multiplier is
///   g(m) = sum_{c<i} w_c + w_i * m / mhat + (sum_{c>i} w_c + w_nohit) * (1-m) / (1-mhat)
/// so a = w_i/mhat - far/(1-mhat) and b = near + far/(1-mhat), where the
/// no-hit cause counts as farther than every voxel. g is nonnegative on
/// [0, 1] and E_prior[g] = 1.
AffineUpdate update_coefficients(const MapBelief& map, const PixelCone& cone, int i_local,
                                 const CausePosterior& posterior,
                                 double saturation_eps = 1e-6);

/// Applies an affine reweighting to one voxel belief and renormalizes.
/// Returns false (belief unchanged) when the posterior mass degenerates.
bool update_voxel(VoxelBelief& belief, const AffineUpdate& coeff, UpdateStats* stats = nullptr);

/// Updates every voxel in the cone of one reading. The cause posterior and
/// all coefficients are computed against the map as it stands on entry, then
/// the per-voxel reweightings are applied. Returns false when the pixel was
/// skipped as degenerate.
bool apply_measurement(MapBelief& map, const PixelCone& cone, double z,
                       const SensorSpec& sensor, const UpdateOptions& options = {});

/// Folds a full scan into the map, pixel by pixel in scan order, each pixel
/// against the map updated by its predecessors. Degenerate pixels are
/// skipped, never fatal.
void update_map(MapBelief& map, const Scan& scan, const SensorSpec& sensor,
                const UpdateOptions& options = {});

}  // namespace bgrid
