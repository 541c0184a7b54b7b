#pragma once

// Internals shared by the double and rational oracle paths: axis plans for a
// scatter position and pattern matching against bitmask-encoded traces.

#include <bit>
#include <cstdint>
#include <vector>

#include "hmtr/hypermatrix.hpp"
#include "hmtr/positions.hpp"

namespace hmtr::detail {

// Where each axis of a scatter position reads from (tuple slot or scalar).
struct AxisPlan {
  bool is_row = false;
  int slot = 0;
};

inline std::vector<AxisPlan> plan_axes(const ScatterPosition& j, int d) {
  std::vector<AxisPlan> plan(d);
  int t = 0, s = 0;
  for (int a = 0; a < d; ++a) {
    if (j.is_row_axis(a))
      plan[a] = {true, t++};
    else
      plan[a] = {false, s++};
  }
  return plan;
}

inline std::vector<Index> pattern_cells(const Pattern& w) {
  std::vector<Index> cells(w.size());
  for (std::size_t f = 0; f < w.size(); ++f) cells[f] = w.cell(f);
  return cells;
}

// c-th (0-based) set bit of mask, or -1 when fewer bits are set.
inline int nth_set_bit(std::uint64_t mask, int c) {
  while (c-- > 0) mask &= mask - 1;
  return mask ? std::countr_zero(mask) : -1;
}

// Match of W at j against the trace whose kept slices are the set bits of
// masks[a] per axis. Every pattern cell must land on kept slices: the
// zero padding beyond the trace never matches (the generating identity
// counts surviving-cell matches only).
inline bool match_masks(const Hypermatrix& x, const std::uint64_t* masks,
                        const Pattern& w, const std::vector<AxisPlan>& plan,
                        const ScatterPosition& j,
                        const std::vector<Index>& cells) {
  const int d = x.dim();
  Index src(d, 0);
  for (std::size_t f = 0; f < cells.size(); ++f) {
    const Index& cell = cells[f];
    for (int a = 0; a < d; ++a) {
      const int coord = plan[a].is_row
                            ? j.rows[plan[a].slot][cell[plan[a].slot]]
                            : j.points[plan[a].slot];
      const int bit = nth_set_bit(masks[a], coord);
      if (bit < 0) return false;
      src[a] = bit;
    }
    if (x.at(src) != w.flat_at(f)) return false;
  }
  return true;
}

// Match of W at j directly against the source (no channel, no padding).
inline bool source_match(const Hypermatrix& x, const Pattern& w,
                         const std::vector<AxisPlan>& plan,
                         const ScatterPosition& j,
                         const std::vector<Index>& cells) {
  const int d = x.dim();
  Index src(d, 0);
  for (std::size_t f = 0; f < cells.size(); ++f) {
    const Index& cell = cells[f];
    for (int a = 0; a < d; ++a)
      src[a] = plan[a].is_row ? j.rows[plan[a].slot][cell[plan[a].slot]]
                              : j.points[plan[a].slot];
    if (x.at(src) != w.flat_at(f)) return false;
  }
  return true;
}

}  // namespace hmtr::detail
