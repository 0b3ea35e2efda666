#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace commute {

// splitmix64 step; used only to whiten/derive seeds.
inline uint64_t splitmix64_next(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// PCG32 (XSH RR). Self-contained so simulation output is reproducible across
// platforms and standard libraries; std::normal_distribution et al. are
// implementation-defined and would break byte-identical replays.
class RngStream {
 public:
  explicit RngStream(uint64_t seed, uint64_t stream = 0) {
    state_ = 0;
    inc_ = (stream << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  uint32_t next_u32() {
    uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
    uint32_t rot = static_cast<uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  // Uniform double in [0, 1).
  double next_double() { return next_u32() * 0x1p-32; }

  // Uniform integer in [0, bound); bound > 0. Multiply-shift mapping keeps the
  // draw count fixed (one u32 per call), which replication pairing relies on.
  uint32_t uniform_int(uint32_t bound) {
    return static_cast<uint32_t>((static_cast<uint64_t>(next_u32()) * bound) >> 32);
  }

  double uniform(double a, double b) { return a + next_double() * (b - a); }

  bool bernoulli(double p) { return next_double() < p; }

  // Box-Muller without caching the second value: exactly two u32 draws per
  // call regardless of parameters.
  double normal(double mean, double sd) {
    double u1 = (static_cast<double>(next_u32()) + 1.0) * 0x1p-32;  // (0, 1]
    double u2 = next_double();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + sd * z;
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = uniform_int(static_cast<uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
  uint64_t inc_;
};

// Named per-replication concerns. Each concern gets its own stream so that,
// e.g., extra network draws never perturb traffic draws.
enum class StreamConcern : uint64_t {
  Population = 0,
  Network = 1,
  Traffic = 2,
  Decisions = 3,
};

// Child seed for (master seed, replication, concern). Scenario identity is
// deliberately absent: paired scenarios share child streams (common random
// numbers).
inline uint64_t child_seed(uint64_t master, uint64_t replication, StreamConcern concern) {
  uint64_t s = master;
  (void)splitmix64_next(s);
  s ^= 0xA0761D6478BD642FULL * (replication + 1);
  (void)splitmix64_next(s);
  s ^= 0xE7037ED1A0B428DBULL * (static_cast<uint64_t>(concern) + 1);
  return splitmix64_next(s);
}

inline RngStream make_stream(uint64_t master, uint64_t replication, StreamConcern concern) {
  return RngStream(child_seed(master, replication, concern),
                   static_cast<uint64_t>(concern) + 1);
}

}  // namespace commute
