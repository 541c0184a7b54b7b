#pragma once

// Dense hypermatrix storage and the position-free core operations: signed
// differences, block extraction, periodicity and sparsity tests, axis
// transforms, and the HMX v1 text format.
//
// Conventions: positions are 0-based, axis 0 is the slowest-varying axis of
// the row-major flat layout, and all sides are equal (n^. shapes only).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hmtr/common.hpp"

namespace hmtr {

// Shared shape/indexing logic for the n^{x d} grids. d == 0 is the scalar
// grid (one entry); it appears as the terminal element of reduction chains.
struct Grid {
  int d = 0;
  int n = 0;

  Grid() = default;
  Grid(int d_, int n_, const Limits& lim = default_limits());

  std::size_t size() const;
  std::vector<int> dims() const { return std::vector<int>(d, n); }
  std::size_t flat(const Index& k) const;
  Index unflat(std::size_t f) const;
  bool contains(const Index& k) const;
  bool operator==(const Grid&) const = default;
};

class Hypermatrix {
 public:
  Hypermatrix() = default;
  Hypermatrix(int d, int n, const Limits& lim = default_limits())
      : grid_(d, n, lim), entries_(grid_.size(), 0) {}
  Hypermatrix(Grid g, std::vector<std::uint8_t> entries);

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.d; }
  int side() const { return grid_.n; }
  std::size_t size() const { return entries_.size(); }

  std::uint8_t at(const Index& k) const { return entries_[grid_.flat(k)]; }
  void set(const Index& k, std::uint8_t v);
  std::uint8_t flat_at(std::size_t f) const { return entries_[f]; }
  void flat_set(std::size_t f, std::uint8_t v);
  const std::vector<std::uint8_t>& entries() const { return entries_; }

  bool operator==(const Hypermatrix&) const = default;

 private:
  Grid grid_;
  std::vector<std::uint8_t> entries_;
};

class SignedHypermatrix {
 public:
  SignedHypermatrix() = default;
  SignedHypermatrix(int d, int n, const Limits& lim = default_limits())
      : grid_(d, n, lim), entries_(grid_.size(), 0) {}
  SignedHypermatrix(Grid g, std::vector<std::int8_t> entries);

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.d; }
  int side() const { return grid_.n; }
  std::size_t size() const { return entries_.size(); }

  std::int8_t at(const Index& k) const { return entries_[grid_.flat(k)]; }
  void set(const Index& k, std::int8_t v);
  std::int8_t flat_at(std::size_t f) const { return entries_[f]; }
  void flat_set(std::size_t f, std::int8_t v);
  const std::vector<std::int8_t>& entries() const { return entries_; }

  bool is_zero() const;
  std::vector<Index> support() const;
  // Binary positive/negative parts; pos - neg == *this.
  Hypermatrix positive_part() const;
  Hypermatrix negative_part() const;

  bool operator==(const SignedHypermatrix&) const = default;

 private:
  Grid grid_;
  std::vector<std::int8_t> entries_;
};

// Pattern W in {0,1}^{l^{x r}}. r == 0 is a scalar pattern (single entry);
// the canonical match pattern for that case is the scalar 1.
class Pattern {
 public:
  Pattern() = default;
  Pattern(int rank, int side, std::vector<std::uint8_t> entries);
  static Pattern scalar_one();

  int rank() const { return rank_; }
  int side() const { return side_; }
  std::size_t size() const { return entries_.size(); }
  std::uint8_t at(const Index& c) const;
  std::uint8_t flat_at(std::size_t f) const { return entries_[f]; }
  void flat_set(std::size_t f, std::uint8_t v) { entries_[f] = v; }
  const std::vector<std::uint8_t>& entries() const { return entries_; }

  // One pattern cell per flat slot, unflattened on demand.
  Index cell(std::size_t f) const;

  bool operator==(const Pattern&) const = default;

 private:
  int rank_ = 0;
  int side_ = 1;
  std::vector<std::uint8_t> entries_{1};
};

// Axis permutation plus per-axis reversal. Result axis a reads source axis
// perm[a], index-reversed when reversed[a] is set.
struct AxisTransform {
  std::vector<int> perm;
  std::vector<std::uint8_t> reversed;

  static AxisTransform identity(int d);
  int dim() const { return static_cast<int>(perm.size()); }
  bool is_identity() const;
  AxisTransform inverse() const;
  void validate() const;
};

Hypermatrix apply(const AxisTransform& t, const Hypermatrix& x);
SignedHypermatrix apply(const AxisTransform& t, const SignedHypermatrix& x);

// Elementwise X - Y; shapes must match.
SignedHypermatrix diff(const Hypermatrix& x, const Hypermatrix& y);

// Contiguous l^{x r} block of an r-dimensional source with the given first
// corner. corner + l must stay within bounds on every axis.
Pattern extract_block(const Hypermatrix& x, const Index& corner, int l);

// Smallest nonzero period t of W in [-s, s]^r, where coordinate values are
// ordered 0 < 1 < -1 < 2 < -2 < ... and tuples compare lexicographically;
// absent when W is s-aperiodic. Requires 1 <= s < l.
std::optional<std::vector<int>> find_period(const Pattern& w, int s);

// Largest s such that every pair of distinct equal-sign nonzero positions
// differs by at least s in some coordinate; n when each sign class has at
// most one element. A must be nonzero.
int sparsity_index(const SignedHypermatrix& a);

// The stricter single-axis variant (one coordinate j working for all pairs):
// max over axes j of the minimal |k_j - k'_j| over equal-sign pairs.
int sparsity_index_uniform_axis(const SignedHypermatrix& a);

// (+1 positions, -1 positions), each in row-major scan order.
std::pair<std::vector<Index>, std::vector<Index>> support_split(
    const SignedHypermatrix& a);

// HMX v1 text format: header line "d n1 ... nd", then the entries in
// row-major order, one slowest-axis "row" of the last axis per line.
// serialize() output is canonical; parse(serialize(x)) == x and
// serialize(parse(s)) == s for canonical s.
std::string serialize_hmx(const Hypermatrix& x);
std::string serialize_hmx(const SignedHypermatrix& x);
Hypermatrix parse_hmx(const std::string& text,
                      const Limits& lim = default_limits());
SignedHypermatrix parse_hmx_signed(const std::string& text,
                                   const Limits& lim = default_limits());

}  // namespace hmtr
