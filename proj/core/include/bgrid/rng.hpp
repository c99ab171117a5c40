#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace bgrid {

/// Seeded 64-bit random source used everywhere in the library.
///
/// The generator is mt19937_64 and all derived variates (uniform doubles,
/// Gaussians via Box-Muller) are computed here rather than through
/// std::*_distribution, whose output is implementation-defined. Two builds
/// with the same seed therefore produce identical streams, which is what the
/// byte-for-byte reproducibility contract of the experiment runners rests on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Identity string recorded into run artifacts.
  static constexpr std::string_view algorithm() { return "mt19937_64/boxmuller"; }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo is fine here: n is tiny compared to 2^64 in all
    // call sites, so the bias is far below double resolution.
    return gen_() % n;
  }

  /// Standard normal via Box-Muller. Consumes exactly two uniforms.
  double gaussian() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 gen_;
};

/// splitmix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Substream ids used by the harness. A run with seed s draws its world from
/// substream(s, kWorldStream), its measurement noise from
/// substream(s, kScanStream), and so on. Documented seed arithmetic instead
/// of shared generator state keeps parallel runs deterministic.
enum class Stream : std::uint64_t {
  kWorld = 1,
  kScan = 2,
  kPlanner = 3,
  kOracle = 4,
};

inline std::uint64_t substream_seed(std::uint64_t seed, Stream stream) {
  return splitmix64(seed ^ (0x51ed2701a37full * static_cast<std::uint64_t>(stream)));
}

}  // namespace bgrid
