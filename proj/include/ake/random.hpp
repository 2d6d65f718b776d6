#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ake {

/// Recorded in output metadata so runs can be reproduced.
inline constexpr std::string_view kPrngName = "mt19937_64/splitmix64-substreams";

/// Named substreams. Each purpose draws from its own engine so that, e.g.,
/// changing the noise level never shifts the angle draws.
enum class Stream : std::uint64_t {
  AlphaInit = 1,
  CircleAngle = 100,   // + class index
  CircleNoise = 200,   // + class index
  RollT = 300,
  RollY = 301,
  RollNoise = 302,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// mt19937_64 engine with hand-written distributions; the standard
/// distribution objects are implementation-defined and not portable.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream))) {}
  Rng(std::uint64_t seed, Stream stream, std::uint64_t offset = 0)
      : Rng(seed, static_cast<std::uint64_t>(stream) + offset) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via the Marsaglia polar method.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ake
