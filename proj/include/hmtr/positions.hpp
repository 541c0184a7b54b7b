#pragma once

// Scatter positions (elements of I(n^{x d}, l^{x r})), their enumeration and
// unranking, the matching complex evaluation points, and pattern gathering.

#include <complex>
#include <cstdint>
#include <vector>

#include "hmtr/common.hpp"
#include "hmtr/hypermatrix.hpp"

namespace hmtr {

// r strictly increasing l-tuples plus d-r scalar coordinates. row_axes names
// the axes carrying the tuples (sorted ascending); the canonical layout from
// the enumeration has row_axes = {0, ..., r-1}. points holds the scalar
// coordinates of the remaining axes in ascending axis order.
struct ScatterPosition {
  std::vector<std::vector<int>> rows;
  std::vector<int> points;
  std::vector<int> row_axes;

  int rank() const { return static_cast<int>(rows.size()); }
  int dim() const { return rank() + static_cast<int>(points.size()); }
  void validate(int n, int d, int l) const;
  // Axis-indexed view: tuple axes give their tuple, scalar axes a 1-tuple.
  bool is_row_axis(int axis) const;
};

// Complex evaluation point in C(d, l^{x r}); shape mirrors a canonical
// ScatterPosition.
struct ComplexPoint {
  std::vector<std::vector<std::complex<double>>> rows;
  std::vector<std::complex<double>> points;

  int rank() const { return static_cast<int>(rows.size()); }
  int dim() const { return rank() + static_cast<int>(points.size()); }
};

// The position collection for fixed (n, d, l, row_axes), enumerated in
// lexicographic order (axis 0 most significant; tuples in combination
// lexicographic order). Supports O(d + l) random access by rank so chunks
// can be partitioned across threads.
class PositionSpace {
 public:
  PositionSpace(int n, int d, int l, std::vector<int> row_axes);
  static PositionSpace canonical(int n, int d, int l, int r);

  int n() const { return n_; }
  int d() const { return d_; }
  int l() const { return l_; }
  int r() const { return static_cast<int>(row_axes_.size()); }
  const std::vector<int>& row_axes() const { return row_axes_; }

  // Saturates at UINT64_MAX; callers check against their caps.
  std::uint64_t count() const { return count_; }
  ScatterPosition unrank(std::uint64_t idx) const;

 private:
  int n_, d_, l_;
  std::vector<int> row_axes_;
  std::uint64_t combos_;  // C(n, l)
  std::uint64_t count_;
};

// Number of scatter positions: C(n,l)^r * n^(d-r), saturating.
std::uint64_t count_positions(int n, int d, int l, int r);

// Lexicographic rank <-> combination (strictly increasing l-tuple in [n]).
std::vector<int> unrank_combination(int n, int l, std::uint64_t rank);

// Lexicographic successor of a combination; false (and reset to the first
// combination) when exhausted.
bool next_combination(std::vector<int>& t, int n);

// In-order enumeration without ranks: the first position of a space and the
// lexicographic successor (false and wrap on exhaustion).
ScatterPosition first_position(const PositionSpace& space);
bool advance_position(const PositionSpace& space, ScatterPosition& k);

// Entries of X at the Cartesian product of the position's tuples and fixed
// scalars, as an l^{x r} pattern (tuple axes ordered by row_axes).
Pattern gather(const Hypermatrix& x, const ScatterPosition& k);

// The scatter position of the contiguous block corner + [l]^r (canonical
// axes); gather() at it coincides with extract_block().
ScatterPosition contiguous_position(const Index& corner, int l, int d);

}  // namespace hmtr
