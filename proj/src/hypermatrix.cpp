#include "hmtr/hypermatrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace hmtr {

Grid::Grid(int d_, int n_, const Limits& lim) : d(d_), n(n_) {
  require(d >= 0 && d <= lim.max_dim,
          "dimension " + std::to_string(d) + " outside [0, " +
              std::to_string(lim.max_dim) + "]");
  if (d > 0)
    require(n >= 1 && n <= lim.max_side,
            "side " + std::to_string(n) + " outside [1, " +
                std::to_string(lim.max_side) + "]");
}

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

std::size_t Grid::flat(const Index& k) const {
  require(static_cast<int>(k.size()) == d, "index rank mismatch");
  std::size_t f = 0;
  for (int i = 0; i < d; ++i) {
    require(k[i] >= 0 && k[i] < n, "index out of range");
    f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(k[i]);
  }
  return f;
}

Index Grid::unflat(std::size_t f) const {
  Index k(d, 0);
  for (int i = d - 1; i >= 0; --i) {
    k[i] = static_cast<int>(f % static_cast<std::size_t>(n));
    f /= static_cast<std::size_t>(n);
  }
  return k;
}

bool Grid::contains(const Index& k) const {
  if (static_cast<int>(k.size()) != d) return false;
  for (int v : k)
    if (v < 0 || v >= n) return false;
  return true;
}

Hypermatrix::Hypermatrix(Grid g, std::vector<std::uint8_t> entries)
    : grid_(g), entries_(std::move(entries)) {
  require(entries_.size() == grid_.size(), "entry count mismatch");
  for (auto v : entries_) require(v <= 1, "binary entries must be 0 or 1");
}

void Hypermatrix::set(const Index& k, std::uint8_t v) {
  require(v <= 1, "binary entries must be 0 or 1");
  entries_[grid_.flat(k)] = v;
}

void Hypermatrix::flat_set(std::size_t f, std::uint8_t v) {
  require(v <= 1, "binary entries must be 0 or 1");
  entries_[f] = v;
}

SignedHypermatrix::SignedHypermatrix(Grid g, std::vector<std::int8_t> entries)
    : grid_(g), entries_(std::move(entries)) {
  require(entries_.size() == grid_.size(), "entry count mismatch");
  for (auto v : entries_)
    require(v >= -1 && v <= 1, "signed entries must be -1, 0, or 1");
}

void SignedHypermatrix::set(const Index& k, std::int8_t v) {
  require(v >= -1 && v <= 1, "signed entries must be -1, 0, or 1");
  entries_[grid_.flat(k)] = v;
}

void SignedHypermatrix::flat_set(std::size_t f, std::int8_t v) {
  require(v >= -1 && v <= 1, "signed entries must be -1, 0, or 1");
  entries_[f] = v;
}

bool SignedHypermatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](std::int8_t v) { return v == 0; });
}

std::vector<Index> SignedHypermatrix::support() const {
  std::vector<Index> h;
  for (std::size_t f = 0; f < entries_.size(); ++f)
    if (entries_[f] != 0) h.push_back(grid_.unflat(f));
  return h;
}

Hypermatrix SignedHypermatrix::positive_part() const {
  Hypermatrix x(grid_.d, grid_.n);
  for (std::size_t f = 0; f < entries_.size(); ++f)
    if (entries_[f] > 0) x.flat_set(f, 1);
  return x;
}

Hypermatrix SignedHypermatrix::negative_part() const {
  Hypermatrix x(grid_.d, grid_.n);
  for (std::size_t f = 0; f < entries_.size(); ++f)
    if (entries_[f] < 0) x.flat_set(f, 1);
  return x;
}

Pattern::Pattern(int rank, int side, std::vector<std::uint8_t> entries)
    : rank_(rank), side_(side), entries_(std::move(entries)) {
  require(rank_ >= 0, "pattern rank must be nonnegative");
  require(rank_ == 0 || side_ >= 1, "pattern side must be positive");
  std::size_t want = 1;
  for (int i = 0; i < rank_; ++i) want *= static_cast<std::size_t>(side_);
  require(entries_.size() == want, "pattern entry count mismatch");
  for (auto v : entries_) require(v <= 1, "pattern entries must be 0 or 1");
}

Pattern Pattern::scalar_one() { return Pattern(0, 1, {1}); }

std::uint8_t Pattern::at(const Index& c) const {
  require(static_cast<int>(c.size()) == rank_, "pattern index rank mismatch");
  std::size_t f = 0;
  for (int i = 0; i < rank_; ++i) {
    require(c[i] >= 0 && c[i] < side_, "pattern index out of range");
    f = f * static_cast<std::size_t>(side_) + static_cast<std::size_t>(c[i]);
  }
  return entries_[f];
}

Index Pattern::cell(std::size_t f) const {
  Index c(rank_, 0);
  for (int i = rank_ - 1; i >= 0; --i) {
    c[i] = static_cast<int>(f % static_cast<std::size_t>(side_));
    f /= static_cast<std::size_t>(side_);
  }
  return c;
}

AxisTransform AxisTransform::identity(int d) {
  AxisTransform t;
  t.perm.resize(d);
  std::iota(t.perm.begin(), t.perm.end(), 0);
  t.reversed.assign(d, 0);
  return t;
}

bool AxisTransform::is_identity() const {
  for (int a = 0; a < dim(); ++a)
    if (perm[a] != a || reversed[a]) return false;
  return true;
}

void AxisTransform::validate() const {
  require(perm.size() == reversed.size(), "transform field size mismatch");
  std::vector<std::uint8_t> seen(perm.size(), 0);
  for (int p : perm) {
    require(p >= 0 && p < dim() && !seen[p], "perm is not a bijection");
    seen[p] = 1;
  }
}

AxisTransform AxisTransform::inverse() const {
  AxisTransform inv;
  inv.perm.assign(dim(), 0);
  inv.reversed.assign(dim(), 0);
  for (int a = 0; a < dim(); ++a) {
    inv.perm[perm[a]] = a;
    inv.reversed[perm[a]] = reversed[a];
  }
  return inv;
}

namespace {

template <typename M>
M apply_impl(const AxisTransform& t, const M& x) {
  t.validate();
  require(t.dim() == x.dim(), "transform rank mismatch");
  if (t.is_identity()) return x;
  const int d = x.dim(), n = x.side();
  M out(d, n);
  Index k(d, 0), s(d, 0);
  const std::size_t total = x.size();
  for (std::size_t f = 0; f < total; ++f) {
    for (int a = 0; a < d; ++a)
      s[t.perm[a]] = t.reversed[a] ? n - 1 - k[a] : k[a];
    out.set(k, x.at(s));
    for (int a = d - 1; a >= 0; --a) {
      if (++k[a] < n) break;
      k[a] = 0;
    }
  }
  return out;
}

}  // namespace

Hypermatrix apply(const AxisTransform& t, const Hypermatrix& x) {
  return apply_impl(t, x);
}
SignedHypermatrix apply(const AxisTransform& t, const SignedHypermatrix& x) {
  return apply_impl(t, x);
}

SignedHypermatrix diff(const Hypermatrix& x, const Hypermatrix& y) {
  require(x.grid() == y.grid(), "diff: shape mismatch");
  SignedHypermatrix a(x.dim(), x.side());
  for (std::size_t f = 0; f < x.size(); ++f)
    a.flat_set(f, static_cast<std::int8_t>(static_cast<int>(x.flat_at(f)) -
                                           static_cast<int>(y.flat_at(f))));
  return a;
}

Pattern extract_block(const Hypermatrix& x, const Index& corner, int l) {
  const int r = x.dim();
  require(static_cast<int>(corner.size()) == r, "corner rank mismatch");
  require(l >= 1, "block side must be positive");
  for (int i = 0; i < r; ++i)
    require(corner[i] >= 0 && corner[i] + l <= x.side(),
            "block exceeds bounds");
  std::size_t total = 1;
  for (int i = 0; i < r; ++i) total *= static_cast<std::size_t>(l);
  std::vector<std::uint8_t> entries(total);
  Index c(r, 0), k(r, 0);
  for (std::size_t f = 0; f < total; ++f) {
    for (int i = 0; i < r; ++i) k[i] = corner[i] + c[i];
    entries[f] = x.at(k);
    for (int i = r - 1; i >= 0; --i) {
      if (++c[i] < l) break;
      c[i] = 0;
    }
  }
  return Pattern(r, l, std::move(entries));
}

namespace {

// Shift values in the scan order 0, 1, -1, 2, -2, ..., s, -s.
int shift_value(int slot, int) {
  if (slot == 0) return 0;
  int mag = (slot + 1) / 2;
  return (slot % 2 == 1) ? mag : -mag;
}

bool is_period(const Pattern& w, const std::vector<int>& t) {
  const int r = w.rank(), l = w.side();
  Index k(r, 0), kt(r, 0);
  // Iterate k over the overlap region where both k and k+t are in [l]^r.
  std::vector<int> lo(r), hi(r);
  for (int i = 0; i < r; ++i) {
    lo[i] = std::max(0, -t[i]);
    hi[i] = std::min(l, l - t[i]);  // exclusive
    if (lo[i] >= hi[i]) return true;  // vacuous; cannot occur for |t_i| < l
  }
  for (int i = 0; i < r; ++i) k[i] = lo[i];
  while (true) {
    for (int i = 0; i < r; ++i) kt[i] = k[i] + t[i];
    if (w.at(k) != w.at(kt)) return false;
    int i = r - 1;
    for (; i >= 0; --i) {
      if (++k[i] < hi[i]) break;
      k[i] = lo[i];
    }
    if (i < 0) break;
  }
  return true;
}

}  // namespace

std::optional<std::vector<int>> find_period(const Pattern& w, int s) {
  require(s >= 1 && s < w.side(), "period bound must satisfy 1 <= s < l");
  const int r = w.rank();
  if (r == 0) return std::nullopt;
  const int slots = 2 * s + 1;
  std::vector<int> slot(r, 0), t(r, 0);
  while (true) {
    int i = r - 1;
    for (; i >= 0; --i) {
      if (++slot[i] < slots) break;
      slot[i] = 0;
    }
    if (i < 0) return std::nullopt;  // all shifts exhausted
    for (int j = 0; j < r; ++j) t[j] = shift_value(slot[j], s);
    if (is_period(w, t)) return t;
  }
}

namespace {

int sep_max_coord(const Index& a, const Index& b) {
  int m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

int sparsity_index(const SignedHypermatrix& a) {
  require(!a.is_zero(), "sparsity index of the zero hypermatrix");
  auto [h1, h2] = support_split(a);
  int s = a.side();
  for (const auto* cls : {&h1, &h2})
    for (std::size_t i = 0; i < cls->size(); ++i)
      for (std::size_t j = i + 1; j < cls->size(); ++j)
        s = std::min(s, sep_max_coord((*cls)[i], (*cls)[j]));
  return s;
}

int sparsity_index_uniform_axis(const SignedHypermatrix& a) {
  require(!a.is_zero(), "sparsity index of the zero hypermatrix");
  auto [h1, h2] = support_split(a);
  const int d = a.dim();
  int best = 0;
  for (int axis = 0; axis < d; ++axis) {
    int s = a.side();
    for (const auto* cls : {&h1, &h2})
      for (std::size_t i = 0; i < cls->size(); ++i)
        for (std::size_t j = i + 1; j < cls->size(); ++j)
          s = std::min(s, std::abs((*cls)[i][axis] - (*cls)[j][axis]));
    best = std::max(best, s);
  }
  return best;
}

std::pair<std::vector<Index>, std::vector<Index>> support_split(
    const SignedHypermatrix& a) {
  std::vector<Index> h1, h2;
  for (std::size_t f = 0; f < a.size(); ++f) {
    if (a.flat_at(f) > 0) h1.push_back(a.grid().unflat(f));
    if (a.flat_at(f) < 0) h2.push_back(a.grid().unflat(f));
  }
  return {std::move(h1), std::move(h2)};
}

namespace {

template <typename M, typename Cell>
std::string serialize_impl(const M& x, Cell cell) {
  require(x.dim() >= 1, "HMX requires dimension >= 1");
  std::ostringstream os;
  os << x.dim();
  for (int i = 0; i < x.dim(); ++i) os << ' ' << x.side();
  os << '\n';
  const std::size_t row = static_cast<std::size_t>(x.side());
  for (std::size_t f = 0; f < x.size(); ++f) {
    os << cell(f);
    os << (((f + 1) % row == 0) ? '\n' : ' ');
  }
  return os.str();
}

struct HmxHeader {
  int d = 0;
  int n = 0;
};

HmxHeader parse_header(std::istringstream& is, const Limits& lim) {
  HmxHeader h;
  require(static_cast<bool>(is >> h.d), "HMX: missing dimension");
  require(h.d >= 1 && h.d <= lim.max_dim, "HMX: dimension out of range");
  for (int i = 0; i < h.d; ++i) {
    int ni = 0;
    require(static_cast<bool>(is >> ni), "HMX: missing side length");
    require(ni >= 1 && ni <= lim.max_side, "HMX: side out of range");
    if (i == 0)
      h.n = ni;
    else
      require(ni == h.n, "HMX: sides must be uniform");
  }
  return h;
}

}  // namespace

std::string serialize_hmx(const Hypermatrix& x) {
  return serialize_impl(x, [&](std::size_t f) {
    return static_cast<int>(x.flat_at(f));
  });
}

std::string serialize_hmx(const SignedHypermatrix& x) {
  return serialize_impl(x, [&](std::size_t f) {
    return static_cast<int>(x.flat_at(f));
  });
}

Hypermatrix parse_hmx(const std::string& text, const Limits& lim) {
  std::istringstream is(text);
  HmxHeader h = parse_header(is, lim);
  Hypermatrix x(h.d, h.n, lim);
  for (std::size_t f = 0; f < x.size(); ++f) {
    int v = 0;
    require(static_cast<bool>(is >> v), "HMX: missing entries");
    require(v == 0 || v == 1, "HMX: binary entry out of range");
    x.flat_set(f, static_cast<std::uint8_t>(v));
  }
  int extra;
  require(!(is >> extra), "HMX: trailing entries");
  return x;
}

SignedHypermatrix parse_hmx_signed(const std::string& text,
                                   const Limits& lim) {
  std::istringstream is(text);
  HmxHeader h = parse_header(is, lim);
  SignedHypermatrix x(h.d, h.n, lim);
  for (std::size_t f = 0; f < x.size(); ++f) {
    int v = 0;
    require(static_cast<bool>(is >> v), "HMX: missing entries");
    require(v >= -1 && v <= 1, "HMX: signed entry out of range");
    x.flat_set(f, static_cast<std::int8_t>(v));
  }
  int extra;
  require(!(is >> extra), "HMX: trailing entries");
  return x;
}

}  // namespace hmtr
