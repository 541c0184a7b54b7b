#pragma once

// Counter-based 64-bit generator ("splitmix64-counter-v1" in configs and
// manifests). Outputs depend only on (seed, counter), so trial streams can be
// partitioned across threads without shared state and runs replay bit-exactly
// on any platform.

#include <cstdint>

namespace hmtr {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent substream seed for (seed, tag); used for per-trial and
// per-trace streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ (mix64(tag) + 0x9e3779b97f4a7c15ULL));
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t at(std::uint64_t counter) const {
    return mix64(seed_ + counter * 0x9e3779b97f4a7c15ULL);
  }
  double u01_at(std::uint64_t counter) const {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
  }

  // Stateful convenience walking the counter.
  std::uint64_t next() { return at(counter_++); }
  double u01() { return u01_at(counter_++); }
  // Uniform integer in [0, bound) by rejection-free 128-bit scaling.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

inline const char* kRngName = "splitmix64-counter-v1";

}  // namespace hmtr
