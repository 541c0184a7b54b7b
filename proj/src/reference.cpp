#include "hmtr/reference.hpp"

#include <bit>
#include <cmath>
#include <functional>

#include "hmtr/rng.hpp"

namespace hmtr::reference {

double sum(std::span<const double> xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc;
}

Cplx csum(std::span<const Cplx> xs) {
  Cplx acc(0.0, 0.0);
  for (const Cplx& x : xs) acc += x;
  return acc;
}

std::pair<double, std::uint64_t> scan_max(
    std::uint64_t count, const std::function<double(std::uint64_t)>& f) {
  double best = -1.0;
  std::uint64_t at = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double v = f(i);
    if (v > best) {
      best = v;
      at = i;
    }
  }
  return {best, at};
}

double arc_scan(std::span<const Cplx> coeffs, long long m0, double L,
                double rho, int density) {
  const double half = M_PI / L;
  // Same power-of-two grid as the parallel kernel, walked serially.
  const std::uint64_t intervals = std::bit_ceil(std::max<std::uint64_t>(
      2, static_cast<std::uint64_t>(std::ceil(density * L))));
  double best = -1.0;
  for (std::uint64_t i = 0; i <= intervals; ++i) {
    const double theta = -half + 2.0 * half * static_cast<double>(i) /
                                     static_cast<double>(intervals);
    const Cplx z = std::polar(rho, theta);
    Cplx acc(0.0, 0.0);
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
    double v = std::abs(acc);
    if (m0 > 0)
      v *= rho > 0.0 ? std::exp(static_cast<double>(m0) * std::log(rho)) : 0.0;
    best = std::max(best, v);
  }
  return best;
}

namespace {

void enum_positions(int n, int d, int l, int r, int axis, ScatterPosition& k,
                    const std::function<void(const ScatterPosition&)>& fn) {
  if (axis == d) {
    fn(k);
    return;
  }
  if (axis < r) {
    std::vector<int> t(l);
    for (int i = 0; i < l; ++i) t[i] = i;
    do {
      k.rows[axis] = t;
      enum_positions(n, d, l, r, axis + 1, k, fn);
    } while (next_combination(t, n));
  } else {
    for (int v = 0; v < n; ++v) {
      k.points[axis - r] = v;
      enum_positions(n, d, l, r, axis + 1, k, fn);
    }
  }
}

}  // namespace

Cplx eval_genfun(const GenfunSource& src, const Pattern& w,
                 const ComplexPoint& z) {
  const int d = src.x->dim(), n = src.x->side();
  const int r = w.rank(), l = w.rank() == 0 ? 1 : w.side();
  ScatterPosition k;
  k.rows.resize(r);
  k.points.resize(d - r);
  k.row_axes.resize(r);
  for (int i = 0; i < r; ++i) k.row_axes[i] = i;
  Cplx acc(0.0, 0.0);
  enum_positions(n, d, l, r, 0, k, [&](const ScatterPosition& pos) {
    int c = gather(*src.x, pos) == w ? 1 : 0;
    if (src.y) c -= gather(*src.y, pos) == w ? 1 : 0;
    if (c == 0) return;
    Cplx mono(1.0, 0.0);
    for (int i = 0; i < r; ++i) mono *= odot_power(z.rows[i], pos.rows[i]);
    for (std::size_t s = 0; s < pos.points.size(); ++s)
      mono *= cpow_int(z.points[s], pos.points[s]);
    acc += static_cast<double>(c) * mono;
  });
  return acc;
}

namespace {

Cplx horner_axis(const SignedHypermatrix& a, std::span<const Cplx> z,
                 Index& k, int axis) {
  const int d = a.dim(), n = a.side();
  Cplx acc(0.0, 0.0);
  for (int v = n - 1; v >= 0; --v) {
    k[axis] = v;
    const Cplx inner = axis + 1 == d
                           ? Cplx(static_cast<double>(a.at(k)), 0.0)
                           : horner_axis(a, z, k, axis + 1);
    acc = acc * z[axis] + inner;
  }
  return acc;
}

}  // namespace

Cplx horner_poly(const SignedHypermatrix& a, std::span<const Cplx> z) {
  if (a.dim() == 0) return Cplx(static_cast<double>(a.flat_at(0)), 0.0);
  Index k(a.dim(), 0);
  return horner_axis(a, z, k, 0);
}

namespace {

void enum_subsets(int n, std::vector<int>& kept, int from,
                  const std::function<void()>& fn) {
  if (from == n) {
    fn();
    return;
  }
  enum_subsets(n, kept, from + 1, fn);  // slice `from` deleted
  kept.push_back(from);
  enum_subsets(n, kept, from + 1, fn);  // slice `from` kept
  kept.pop_back();
}

// Independent surviving-cell match: read the materialized trace entries
// and refuse pattern cells beyond its extent.
bool trace_entries_match(const Trace& t, const Pattern& w,
                         const ScatterPosition& j) {
  const auto shape = t.shape();
  int ti = 0, si = 0;
  std::vector<std::pair<bool, int>> plan(t.d);
  for (int a = 0; a < t.d; ++a)
    plan[a] = j.is_row_axis(a) ? std::make_pair(true, ti++)
                               : std::make_pair(false, si++);
  for (std::size_t f = 0; f < w.size(); ++f) {
    const Index cell = w.cell(f);
    std::size_t flat = 0;
    for (int a = 0; a < t.d; ++a) {
      const int coord = plan[a].first
                            ? j.rows[plan[a].second][cell[plan[a].second]]
                            : j.points[plan[a].second];
      if (coord >= shape[a]) return false;
      flat = flat * static_cast<std::size_t>(shape[a]) +
             static_cast<std::size_t>(coord);
    }
    if (t.entries[flat] != w.flat_at(f)) return false;
  }
  return true;
}

double axis_recursion(const Hypermatrix& x, const Pattern& w,
                      const ScatterPosition& j, ChannelParams pr, int axis,
                      std::vector<std::vector<int>>& retained) {
  const int n = x.side();
  if (axis == x.dim()) {
    Trace t;
    t.d = x.dim();
    t.n = n;
    t.retained = retained;
    Index c(t.d, 0), src(t.d, 0);
    const auto shape = t.shape();
    if (t.cells() > 0) {
      while (true) {
        for (int a = 0; a < t.d; ++a) src[a] = retained[a][c[a]];
        t.entries.push_back(x.at(src));
        int a = t.d - 1;
        for (; a >= 0; --a) {
          if (++c[a] < shape[a]) break;
          c[a] = 0;
        }
        if (a < 0) break;
      }
    }
    return trace_entries_match(t, w, j) ? 1.0 : 0.0;
  }
  double acc = 0.0;
  std::vector<int> kept;
  enum_subsets(n, kept, 0, [&]() {
    retained[axis] = kept;
    const int m = static_cast<int>(kept.size());
    const double prob =
        std::pow(pr.p, m) * std::pow(pr.q, n - m);
    const double sub = axis_recursion(x, w, j, pr, axis + 1, retained);
    acc += prob * sub;
  });
  return acc;
}

}  // namespace

double exact_pattern_prob(const Hypermatrix& x, const Pattern& w,
                          const ScatterPosition& j, ChannelParams pr) {
  std::vector<std::vector<int>> retained(x.dim());
  return axis_recursion(x, w, j, pr, 0, retained);
}

double mc_match_mean(const Hypermatrix& x, const Pattern& w,
                     const ScatterPosition& j, ChannelParams pr,
                     std::uint64_t trials, std::uint64_t seed) {
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Trace t = sample_trace(x, pr, derive_seed(seed, i));
    hits += trace_entries_match(t, w, j) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace hmtr::reference
