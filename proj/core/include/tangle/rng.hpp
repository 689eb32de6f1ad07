#pragma once

#include <cstdint>

namespace tangle {

// splitmix64: platform-stable stream (std distributions are not portable).
struct SplitMix {
  uint64_t state;

  explicit SplitMix(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, n), n > 0
  uint64_t below(uint64_t n) { return next() % n; }

  // uniform integer in [lo, hi] inclusive
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  // uniform double in [0,1)
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Decorrelated per-trial stream: hash(seed, trial) so trials are order- and
// thread-independent.
inline uint64_t substream(uint64_t seed, uint64_t idx) {
  SplitMix m(seed ^ (0x9e3779b97f4a7c15ull * (idx + 1)));
  return m.next();
}

}  // namespace tangle
