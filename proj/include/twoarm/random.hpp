#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace twoarm {

/// Seeded stream of N(0,1) draws.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the standard.
/// Uniforms use the top 53 bits of each engine word. Normals come from the
/// Marsaglia polar method, consumed in pairs (the second value of each pair
/// is cached). Both transforms are spelled out here rather than delegated to
/// std::normal_distribution, whose output is implementation-defined, so a
/// given seed yields the same draws on every conforming platform.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double standard() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

  double normal(double mean) { return mean + standard(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer: a bijection on 64-bit words with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace twoarm
