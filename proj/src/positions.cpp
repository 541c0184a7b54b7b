#include "hmtr/positions.hpp"

#include <algorithm>

namespace hmtr {

void ScatterPosition::validate(int n, int d, int l) const {
  require(dim() == d, "position rank mismatch");
  require(static_cast<int>(row_axes.size()) == rank(),
          "row_axes size mismatch");
  require(std::is_sorted(row_axes.begin(), row_axes.end()) &&
              std::adjacent_find(row_axes.begin(), row_axes.end()) ==
                  row_axes.end(),
          "row_axes must be strictly ascending");
  for (int a : row_axes) require(a >= 0 && a < d, "row axis out of range");
  for (const auto& t : rows) {
    require(static_cast<int>(t.size()) == l, "tuple length mismatch");
    for (std::size_t i = 0; i < t.size(); ++i) {
      require(t[i] >= 0 && t[i] < n, "tuple index out of range");
      if (i) require(t[i] > t[i - 1], "tuple must be strictly increasing");
    }
  }
  for (int p : points) require(p >= 0 && p < n, "point index out of range");
}

bool ScatterPosition::is_row_axis(int axis) const {
  return std::binary_search(row_axes.begin(), row_axes.end(), axis);
}

PositionSpace::PositionSpace(int n, int d, int l, std::vector<int> row_axes)
    : n_(n), d_(d), l_(l), row_axes_(std::move(row_axes)) {
  require(d_ >= 0, "negative dimension");
  require(static_cast<int>(row_axes_.size()) <= d_, "too many row axes");
  require(row_axes_.empty() || (l_ >= 1 && l_ <= n_),
          "tuple length must satisfy 1 <= l <= n");
  require(std::is_sorted(row_axes_.begin(), row_axes_.end()) &&
              std::adjacent_find(row_axes_.begin(), row_axes_.end()) ==
                  row_axes_.end(),
          "row_axes must be strictly ascending");
  for (int a : row_axes_) require(a >= 0 && a < d_, "row axis out of range");
  combos_ = binomial(n_, l_);
  count_ = 1;
  for (int a = 0; a < d_; ++a)
    count_ = sat_mul(count_, std::binary_search(row_axes_.begin(),
                                                row_axes_.end(), a)
                                 ? combos_
                                 : static_cast<std::uint64_t>(n_));
}

PositionSpace PositionSpace::canonical(int n, int d, int l, int r) {
  require(r >= 0 && r <= d, "rank must satisfy 0 <= r <= d");
  std::vector<int> axes(r);
  for (int i = 0; i < r; ++i) axes[i] = i;
  return PositionSpace(n, d, l, std::move(axes));
}

ScatterPosition PositionSpace::unrank(std::uint64_t idx) const {
  require(idx < count_, "position rank out of range");
  // Mixed-radix digits, axis 0 most significant.
  std::vector<std::uint64_t> digit(d_);
  for (int a = d_ - 1; a >= 0; --a) {
    std::uint64_t radix = std::binary_search(row_axes_.begin(),
                                             row_axes_.end(), a)
                              ? combos_
                              : static_cast<std::uint64_t>(n_);
    digit[a] = idx % radix;
    idx /= radix;
  }
  ScatterPosition k;
  k.row_axes = row_axes_;
  for (int a = 0; a < d_; ++a) {
    if (std::binary_search(row_axes_.begin(), row_axes_.end(), a))
      k.rows.push_back(unrank_combination(n_, l_, digit[a]));
    else
      k.points.push_back(static_cast<int>(digit[a]));
  }
  return k;
}

std::uint64_t count_positions(int n, int d, int l, int r) {
  require(r >= 0 && r <= d, "rank must satisfy 0 <= r <= d");
  require(r == 0 || (l >= 1 && l <= n), "tuple length must satisfy 1 <= l <= n");
  std::uint64_t c = 1;
  for (int i = 0; i < r; ++i) c = sat_mul(c, binomial(n, l));
  for (int i = 0; i < d - r; ++i)
    c = sat_mul(c, static_cast<std::uint64_t>(n));
  return c;
}

std::vector<int> unrank_combination(int n, int l, std::uint64_t rank) {
  std::vector<int> t(l);
  int c = 0;
  for (int i = 0; i < l; ++i) {
    while (true) {
      std::uint64_t block = binomial(n - 1 - c, l - 1 - i);
      if (rank < block) break;
      rank -= block;
      ++c;
    }
    t[i] = c++;
  }
  return t;
}

bool next_combination(std::vector<int>& t, int n) {
  const int l = static_cast<int>(t.size());
  int i = l - 1;
  while (i >= 0 && t[i] == n - l + i) --i;
  if (i < 0) {
    for (int j = 0; j < l; ++j) t[j] = j;
    return false;
  }
  ++t[i];
  for (int j = i + 1; j < l; ++j) t[j] = t[j - 1] + 1;
  return true;
}

ScatterPosition first_position(const PositionSpace& space) {
  ScatterPosition k;
  k.row_axes = space.row_axes();
  for (int a = 0; a < space.d(); ++a) {
    if (std::binary_search(k.row_axes.begin(), k.row_axes.end(), a)) {
      std::vector<int> t(space.l());
      for (int j = 0; j < space.l(); ++j) t[j] = j;
      k.rows.push_back(std::move(t));
    } else {
      k.points.push_back(0);
    }
  }
  return k;
}

bool advance_position(const PositionSpace& space, ScatterPosition& k) {
  // Axis d-1 varies fastest; tuple axes step through combinations.
  int ti = k.rank() - 1, si = static_cast<int>(k.points.size()) - 1;
  for (int a = space.d() - 1; a >= 0; --a) {
    if (k.is_row_axis(a)) {
      if (next_combination(k.rows[ti], space.n())) return true;
      --ti;
    } else {
      if (++k.points[si] < space.n()) return true;
      k.points[si] = 0;
      --si;
    }
  }
  return false;
}

Pattern gather(const Hypermatrix& x, const ScatterPosition& k) {
  const int d = x.dim();
  k.validate(x.side(), d, k.rows.empty() ? 1 : static_cast<int>(k.rows[0].size()));
  const int r = k.rank();
  const int l = r == 0 ? 1 : static_cast<int>(k.rows[0].size());
  std::size_t total = 1;
  for (int i = 0; i < r; ++i) total *= static_cast<std::size_t>(l);
  std::vector<std::uint8_t> entries(total);
  Index cell(r, 0), pos(d, 0);
  for (std::size_t f = 0; f < total; ++f) {
    int ti = 0, si = 0;
    for (int a = 0; a < d; ++a) {
      if (k.is_row_axis(a))
        pos[a] = k.rows[ti][cell[ti]], ++ti;
      else
        pos[a] = k.points[si++];
    }
    entries[f] = x.at(pos);
    for (int i = r - 1; i >= 0; --i) {
      if (++cell[i] < l) break;
      cell[i] = 0;
    }
  }
  return Pattern(r, r == 0 ? 1 : l, std::move(entries));
}

ScatterPosition contiguous_position(const Index& corner, int l, int d) {
  const int r = static_cast<int>(corner.size());
  require(r <= d, "corner rank exceeds dimension");
  ScatterPosition k;
  for (int i = 0; i < r; ++i) {
    std::vector<int> t(l);
    for (int j = 0; j < l; ++j) t[j] = corner[i] + j;
    k.rows.push_back(std::move(t));
    k.row_axes.push_back(i);
  }
  return k;
}

}  // namespace hmtr
