#pragma once

#include <cstdint>
#include <random>

namespace zoomax {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

// std::mt19937_64 is fully specified by the standard; the distributions are
// not, so uniform draws are built from the raw 64-bit output.
class Rng {
public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  bool coin() { return (engine_() >> 63) != 0; }

private:
  std::mt19937_64 engine_;
};

}  // namespace zoomax
