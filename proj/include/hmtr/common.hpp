#pragma once

// Shared basics: error type, dimension limits, small integer helpers.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmtr {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

// Size caps. The defaults are generous for a desk-scale lab; callers that
// need more pass their own Limits.
struct Limits {
  int max_dim = 8;
  int max_side = 64;
};

inline const Limits& default_limits() {
  static Limits lim;
  return lim;
}

using Index = std::vector<int>;

inline std::size_t flat_size(const std::vector<int>& dims) {
  std::size_t s = 1;
  for (int n : dims) s *= static_cast<std::size_t>(n);
  return s;
}

// Binomial coefficients in unsigned 64-bit; saturates at UINT64_MAX on
// overflow (callers only compare against caps, never do arithmetic past
// saturation).
std::uint64_t binomial(int n, int k);

// Saturating multiply for cap checks.
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b);

// Integer power of a double-ish base with pow0(0,0) == 1.
template <typename T>
T pow_nonneg(T base, int e) {
  T acc(1);
  for (int i = 0; i < e; ++i) acc = acc * base;
  return acc;
}

}  // namespace hmtr
