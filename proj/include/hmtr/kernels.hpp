#pragma once

// OpenMP map-reduce kernels with a fixed reduction shape: inputs are cut into
// fixed-size chunks, each chunk is summed serially, and the chunk sums are
// folded pairwise. Results are bit-identical for any thread count. Serial
// reference counterparts live in hmtr/reference.hpp.

#include <complex>
#include <cstdint>
#include <vector>

namespace hmtr {

inline constexpr std::uint64_t kReduceChunk = 4096;

// Pairwise fold of a partials buffer (in place); fixed tree, left-to-right
// pairing at every level.
template <typename T>
T pairwise_fold(std::vector<T>& parts) {
  if (parts.empty()) return T{};
  std::size_t len = parts.size();
  while (len > 1) {
    std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i)
      parts[i] = parts[2 * i] + parts[2 * i + 1];
    if (len % 2) {
      parts[half] = parts[len - 1];
      len = half + 1;
    } else {
      len = half;
    }
  }
  return parts[0];
}

// Sum of value_at(i) for i in [0, count); chunked + pairwise-folded.
template <typename T, typename F>
T tree_map_sum(std::uint64_t count, F&& value_at) {
  if (count == 0) return T{};
  const std::uint64_t nchunks = (count + kReduceChunk - 1) / kReduceChunk;
  std::vector<T> parts(nchunks);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kReduceChunk;
    const std::uint64_t hi = std::min(count, lo + kReduceChunk);
    T acc{};
    for (std::uint64_t i = lo; i < hi; ++i) acc = acc + value_at(i);
    parts[c] = acc;
  }
  return pairwise_fold(parts);
}

// Integer count of predicate hits; order-independent.
template <typename F>
std::uint64_t parallel_count(std::uint64_t count, F&& hit) {
  std::int64_t total = 0;
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
    total += hit(static_cast<std::uint64_t>(i)) ? 1 : 0;
  return static_cast<std::uint64_t>(total);
}

struct ScanHit {
  double value = 0.0;
  std::uint64_t index = 0;
};

// Argmax of value_at over [0, count), ties to the smallest index; the
// (value, index) order makes the result independent of evaluation order.
template <typename F>
ScanHit parallel_scan_max(std::uint64_t count, F&& value_at) {
  const std::uint64_t nchunks = (count + kReduceChunk - 1) / kReduceChunk;
  std::vector<ScanHit> parts(nchunks);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kReduceChunk;
    const std::uint64_t hi = std::min(count, lo + kReduceChunk);
    ScanHit best{-1.0, lo};
    for (std::uint64_t i = lo; i < hi; ++i) {
      double v = value_at(i);
      if (v > best.value) best = {v, i};
    }
    parts[c] = best;
  }
  ScanHit best{-1.0, 0};
  for (const ScanHit& h : parts)
    if (h.value > best.value) best = h;
  return best;
}

}  // namespace hmtr
