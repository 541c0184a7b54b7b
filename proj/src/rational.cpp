#include "hmtr/rational.hpp"

#include <bit>
#include <cmath>

#include "hmtr/detail/match.hpp"

namespace hmtr {

CRat cpow_rat(CRat z, long long e) {
  require(e >= 0, "negative exponent");
  CRat acc(1);
  while (e > 0) {
    if (e & 1) acc = acc * z;
    z = z * z;
    e >>= 1;
  }
  return acc;
}

double to_double(const Rat& r) { return static_cast<double>(r); }

double abs_approx(const CRat& z) {
  return std::hypot(to_double(z.re), to_double(z.im));
}

Rat exact_pattern_prob_rational(const Hypermatrix& x, const Pattern& w,
                                const ScatterPosition& j, const Rat& q,
                                std::uint64_t enum_cap) {
  const int d = x.dim(), n = x.side();
  j.validate(n, d, w.rank() == 0 ? 1 : w.side());
  require(q >= 0 && q <= 1, "deletion probability outside [0, 1]");
  require(d <= 8 && d * n < 63, "oracle: shape too large to enumerate");
  const std::uint64_t combos = 1ull << (d * n);
  require(combos <= enum_cap, "oracle: enumeration cap exceeded");

  const Rat p = 1 - q;
  std::vector<Rat> keep_prob(n + 1);
  for (int m = 0; m <= n; ++m)
    keep_prob[m] = pow_nonneg(p, m) * pow_nonneg(q, n - m);

  const auto plan = detail::plan_axes(j, d);
  const auto cells = detail::pattern_cells(w);
  const std::uint64_t axis_mask = (1ull << n) - 1;

  Rat sum = 0;
  std::uint64_t masks[8];
  for (std::uint64_t g = 0; g < combos; ++g) {
    bool keep = true;
    Rat prob = 1;
    for (int a = 0; a < d; ++a) {
      masks[a] = (g >> (a * n)) & axis_mask;
      prob *= keep_prob[std::popcount(masks[a])];
    }
    keep = detail::match_masks(x, masks, w, plan, j, cells);
    if (keep) sum += prob;
  }
  return sum;
}

namespace {

CRat position_monomial_rat(const RationalPoint& z, const ScatterPosition& k) {
  CRat acc(1);
  for (int i = 0; i < k.rank(); ++i) {
    const auto& row = z.rows[i];
    const auto& t = k.rows[i];
    acc = acc * cpow_rat(row[0], t[0]);
    for (std::size_t h = 1; h < t.size(); ++h)
      acc = acc * cpow_rat(row[h], t[h] - t[h - 1] - 1);
  }
  for (std::size_t s = 0; s < k.points.size(); ++s)
    acc = acc * cpow_rat(z.points[s], k.points[s]);
  return acc;
}

}  // namespace

CRat identity_residual_rational(const Hypermatrix& x, const Hypermatrix* y,
                                const Pattern& w, const RationalPoint& z,
                                const Rat& q, std::uint64_t enum_cap) {
  const int d = x.dim(), n = x.side();
  const int r = w.rank(), l = w.rank() == 0 ? 1 : w.side();
  require(z.rank() == r && z.dim() == d, "evaluation point shape mismatch");
  const Rat p = 1 - q;
  require(p != 0, "identity needs p > 0");

  // w-point from z = p*w + q componentwise.
  RationalPoint wp = z;
  const CRat qc(q, Rat(0));
  auto lift = [&](CRat v) {
    CRat num = v - qc;
    return CRat(num.re / p, num.im / p);
  };
  for (auto& row : wp.rows)
    for (auto& v : row) v = lift(v);
  for (auto& v : wp.points) v = lift(v);

  PositionSpace space = PositionSpace::canonical(n, d, l, r);
  CRat lhs(0);
  ScatterPosition k = first_position(space);
  bool more = space.count() > 0;
  while (more) {
    Rat e = exact_pattern_prob_rational(x, w, k, q, enum_cap);
    if (y) e -= exact_pattern_prob_rational(*y, w, k, q, enum_cap);
    if (e != 0) lhs = lhs + position_monomial_rat(wp, k) * e;
    more = advance_position(space, k);
  }

  // RHS: p^{rl + d - r} * g(z) summed over the same positions.
  const auto plan = detail::plan_axes(first_position(space), d);
  const auto cells = detail::pattern_cells(w);
  CRat g(0);
  k = first_position(space);
  more = space.count() > 0;
  while (more) {
    int c = detail::source_match(x, w, plan, k, cells) ? 1 : 0;
    if (y) c -= detail::source_match(*y, w, plan, k, cells) ? 1 : 0;
    if (c != 0) g = g + position_monomial_rat(z, k) * Rat(c);
    more = advance_position(space, k);
  }
  CRat rhs = g * pow_nonneg(p, r * l + d - r);
  return lhs - rhs;
}

CRat rational_unit_point(CounterRng& rng) {
  // (m, k) coprime, m > k >= 1, not both odd: (m^2-k^2, 2mk, m^2+k^2).
  static const int pairs[][2] = {{2, 1}, {3, 2}, {4, 1}, {4, 3},
                                 {5, 2}, {5, 4}, {6, 1}, {7, 4}};
  const auto& mk = pairs[rng.below(8)];
  const long m = mk[0], k = mk[1];
  Rat c(m * m + k * k);
  Rat a(m * m - k * k), b(2 * m * k);
  if (rng.below(2)) std::swap(a, b);
  if (rng.below(2)) a = -a;
  if (rng.below(2)) b = -b;
  return CRat(a / c, b / c);
}

}  // namespace hmtr
