#pragma once

#include <cstdint>
#include <random>

namespace gwldp {

// Finalizing mixer from the splitmix64 generator.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/**
 * Deterministic random stream.
 *
 * A stream is identified by (seed, stream_id). Batch operations give each
 * sample its own stream id, so results are identical no matter how samples
 * are distributed over worker threads. Uniform doubles are produced by an
 * explicit bit mapping; nothing implementation-defined is involved.
 */
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : engine_(mix64(mix64(seed) ^ mix64(stream_id ^ 0x5851f42d4c957f2dULL))) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n) {
    // Rejection against the largest multiple of n; unbiased.
    const std::uint64_t limit = n * ((~0ULL) / n);
    for (;;) {
      const std::uint64_t x = engine_();
      if (x < limit) return x % n;
    }
  }

  // Index into a probability vector by inverse CDF; the trailing entry absorbs
  // rounding slack.
  template <typename Vec>
  int pick(const Vec& probs) {
    double u = uniform();
    const int last = static_cast<int>(probs.size()) - 1;
    for (int i = 0; i < last; ++i) {
      if (u < probs[static_cast<std::size_t>(i)]) return i;
      u -= probs[static_cast<std::size_t>(i)];
    }
    return last;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gwldp
