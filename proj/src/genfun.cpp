#include "hmtr/genfun.hpp"

#include <algorithm>
#include <cmath>

#include "hmtr/detail/match.hpp"
#include "hmtr/kernels.hpp"

namespace hmtr {

Cplx cpow_int(Cplx z, long long e) {
  require(e >= 0, "negative exponent");
  Cplx acc(1.0, 0.0);
  while (e > 0) {
    if (e & 1) acc *= z;
    z *= z;
    e >>= 1;
  }
  return acc;
}

int genfun_coeff(const GenfunSource& src, const Pattern& w,
                 const ScatterPosition& k) {
  const auto plan = detail::plan_axes(k, src.x->dim());
  const auto cells = detail::pattern_cells(w);
  int c = detail::source_match(*src.x, w, plan, k, cells) ? 1 : 0;
  if (src.y) c -= detail::source_match(*src.y, w, plan, k, cells) ? 1 : 0;
  return c;
}

Cplx odot_power(const std::vector<Cplx>& z, const std::vector<int>& k) {
  require(z.size() == k.size() && !k.empty(), "odot: length mismatch");
  for (std::size_t i = 1; i < k.size(); ++i)
    require(k[i] > k[i - 1], "odot: tuple must be strictly increasing");
  Cplx acc = cpow_int(z[0], k[0]);
  for (std::size_t i = 1; i < k.size(); ++i)
    acc *= cpow_int(z[i], k[i] - k[i - 1] - 1);
  return acc;
}

namespace {

// Monomial of a canonical scatter position: odot-powers on tuple axes, plain
// powers on scalar axes, multiplied in ascending axis order.
Cplx position_monomial(const ComplexPoint& z, const ScatterPosition& k) {
  Cplx acc(1.0, 0.0);
  for (int i = 0; i < k.rank(); ++i) acc *= odot_power(z.rows[i], k.rows[i]);
  for (std::size_t s = 0; s < k.points.size(); ++s)
    acc *= cpow_int(z.points[s], k.points[s]);
  return acc;
}

void check_point_shape(const ComplexPoint& z, int d, int r, int l) {
  require(z.rank() == r && z.dim() == d, "evaluation point shape mismatch");
  for (const auto& row : z.rows)
    require(static_cast<int>(row.size()) == l, "evaluation point tuple size");
}

}  // namespace

Cplx eval_genfun(const GenfunSource& src, const Pattern& w,
                 const ComplexPoint& z, std::uint64_t eval_cap) {
  const Hypermatrix& x = *src.x;
  if (src.y) require(x.grid() == src.y->grid(), "pair shape mismatch");
  const int d = x.dim(), n = x.side();
  const int r = w.rank(), l = w.rank() == 0 ? 1 : w.side();
  require(l <= n, "pattern side exceeds source side");
  check_point_shape(z, d, r, l);
  PositionSpace space = PositionSpace::canonical(n, d, l, r);
  require(space.count() <= eval_cap, "genfun: evaluation cap exceeded");

  const auto plan = detail::plan_axes(first_position(space), d);
  const auto cells = detail::pattern_cells(w);
  const std::uint64_t total = space.count();

  return tree_map_sum<Cplx>(total, [&](std::uint64_t idx) {
    // Chunk boundaries fall on kReduceChunk multiples; unranking only there
    // would be faster but per-index unranking keeps this simple and the
    // position counts are desk-scale.
    ScatterPosition k = space.unrank(idx);
    int c = detail::source_match(x, w, plan, k, cells) ? 1 : 0;
    if (src.y) c -= detail::source_match(*src.y, w, plan, k, cells) ? 1 : 0;
    if (c == 0) return Cplx(0.0, 0.0);
    return static_cast<double>(c) * position_monomial(z, k);
  });
}

Cplx eval_genfun_sliced(const GenfunSource& src, const Pattern& w, int slice,
                        const ComplexPoint& z_first, std::uint64_t eval_cap) {
  const Hypermatrix& x = *src.x;
  const int d = x.dim(), n = x.side();
  require(d >= 1, "sliced evaluation needs dimension >= 1");
  require(slice >= 0 && slice < n, "slice coordinate out of range");
  const int r = w.rank(), l = w.rank() == 0 ? 1 : w.side();
  require(r <= d - 1, "last axis must be scalar");
  check_point_shape(z_first, d - 1, r, l);
  PositionSpace space = PositionSpace::canonical(n, d - 1, l, r);
  require(space.count() <= eval_cap, "genfun: evaluation cap exceeded");

  const auto cells = detail::pattern_cells(w);
  const std::uint64_t total = space.count();
  return tree_map_sum<Cplx>(total, [&](std::uint64_t idx) {
    ScatterPosition k = space.unrank(idx);
    k.points.push_back(slice);
    const auto plan = detail::plan_axes(k, d);
    int c = detail::source_match(x, w, plan, k, cells) ? 1 : 0;
    if (src.y) c -= detail::source_match(*src.y, w, plan, k, cells) ? 1 : 0;
    k.points.pop_back();
    if (c == 0) return Cplx(0.0, 0.0);
    return static_cast<double>(c) * position_monomial(z_first, k);
  });
}

namespace {

// Per-axis assignment for the mixed contiguous/scattered sums in
// decontiguize: axes < split hold block corners, axes >= split hold
// combinations with the l-1 tail coordinates tied to one real value.
struct MixedState {
  std::vector<int> corner;                 // axes < split
  std::vector<std::vector<int>> tuples;    // axes >= split
};

// Signed block/gather match for a mixed position.
int mixed_coeff(const GenfunSource& src, const Pattern& w,
                const std::vector<Index>& cells, const MixedState& st,
                int split, Index& scratch) {
  const int r = src.x->dim();
  auto value_of = [&](const Hypermatrix& m) {
    for (std::size_t f = 0; f < cells.size(); ++f) {
      const Index& cell = cells[f];
      for (int a = 0; a < r; ++a)
        scratch[a] = a < split ? st.corner[a] + cell[a]
                               : st.tuples[a - split][cell[a]];
      if (m.at(scratch) != w.flat_at(f)) return false;
    }
    return true;
  };
  int c = value_of(*src.x) ? 1 : 0;
  if (src.y) c -= value_of(*src.y) ? 1 : 0;
  return c;
}

double pow_real(double t, int e) {
  double acc = 1.0;
  for (int i = 0; i < e; ++i) acc *= t;
  return acc;
}

// Canonical serial evaluation of the mixed partial sum. The term order and
// per-term operation order are fixed so that consecutive de-contiguization
// steps reproduce each other bit for bit at tied value 0.
Cplx eval_mixed(const GenfunSource& src, const Pattern& w,
                const std::vector<Cplx>& z0, const std::vector<double>& tied,
                int split) {
  const int r = src.x->dim(), n = src.x->side();
  const int l = w.rank() == 0 ? 1 : w.side();
  const auto cells = detail::pattern_cells(w);
  MixedState st;
  st.corner.assign(split, 0);
  for (int a = split; a < r; ++a) {
    std::vector<int> t(l);
    for (int j = 0; j < l; ++j) t[j] = j;
    st.tuples.push_back(std::move(t));
  }
  Index scratch(r, 0);
  Cplx sum(0.0, 0.0);
  while (true) {
    const int c = mixed_coeff(src, w, cells, st, split, scratch);
    if (c != 0) {
      Cplx mono(1.0, 0.0);
      for (int a = 0; a < r; ++a) {
        if (a < split) {
          mono *= cpow_int(z0[a], st.corner[a]);
        } else {
          const auto& t = st.tuples[a - split];
          mono *= cpow_int(z0[a], t.front());
          mono *= pow_real(tied[a], t.back() - t.front() - (l - 1));
        }
      }
      sum += static_cast<double>(c) * mono;
    }
    // Odometer, axis r-1 fastest.
    int a = r - 1;
    for (; a >= 0; --a) {
      if (a < split) {
        if (++st.corner[a] <= n - l) break;
        st.corner[a] = 0;
      } else {
        if (next_combination(st.tuples[a - split], n)) break;
      }
    }
    if (a < 0) break;
  }
  return sum;
}

}  // namespace

Cplx eval_contiguous(const GenfunSource& src, const Pattern& w,
                     const std::vector<Cplx>& z) {
  const Hypermatrix& x = *src.x;
  if (src.y) require(x.grid() == src.y->grid(), "pair shape mismatch");
  const int r = x.dim();
  require(w.rank() == r, "contiguous genfun needs a full-rank pattern");
  require(w.side() <= x.side(), "pattern side exceeds source side");
  require(static_cast<int>(z.size()) == r, "needs r scalar variables");
  return eval_mixed(src, w, z, std::vector<double>(r, 0.0), r);
}

double verify_identity(const GenfunSource& src, const Pattern& w,
                       const ComplexPoint& z, ChannelParams pr,
                       std::uint64_t enum_cap, std::uint64_t eval_cap) {
  const Hypermatrix& x = *src.x;
  const int d = x.dim(), n = x.side();
  const int r = w.rank(), l = w.rank() == 0 ? 1 : w.side();
  check_point_shape(z, d, r, l);
  require(pr.p > 0.0, "identity needs p > 0");

  // w-point from z = p*w + q componentwise.
  ComplexPoint wp = z;
  for (auto& row : wp.rows)
    for (auto& v : row) v = (v - pr.q) / pr.p;
  for (auto& v : wp.points) v = (v - pr.q) / pr.p;

  PositionSpace space = PositionSpace::canonical(n, d, l, r);
  const std::uint64_t total = space.count();
  require(total <= eval_cap, "identity: position cap exceeded");

  Cplx lhs = tree_map_sum<Cplx>(total, [&](std::uint64_t idx) {
    ScatterPosition j = space.unrank(idx);
    double e = exact_pattern_prob(x, w, j, pr, enum_cap);
    if (src.y) e -= exact_pattern_prob(*src.y, w, j, pr, enum_cap);
    if (e == 0.0) return Cplx(0.0, 0.0);
    return e * position_monomial(wp, j);
  });

  Cplx rhs = pow_nonneg(Cplx(pr.p, 0.0), r * l + d - r) *
             eval_genfun(src, w, z, eval_cap);
  return std::abs(lhs - rhs);
}

namespace {

// Dense grid over [lo, hi] then golden-section refinement around the best
// grid point; |poly| evaluated by Horner. Deterministic.
double maximize_on_segment(const std::vector<Cplx>& poly, double lo, double hi,
                           int grid_points, double tol) {
  auto val = [&](double t) {
    Cplx acc(0.0, 0.0);
    for (std::size_t i = poly.size(); i-- > 0;) acc = acc * t + poly[i];
    return std::abs(acc);
  };
  require(grid_points >= 2, "segment grid too small");
  double best_t = lo, best_v = -1.0;
  for (int i = 0; i < grid_points; ++i) {
    double t = lo + (hi - lo) * static_cast<double>(i) /
                        static_cast<double>(grid_points - 1);
    double v = val(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  // Golden-section around the winning cell.
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  double a = std::max(lo, best_t - step), b = std::min(hi, best_t + step);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), dpt = a + gr * (b - a);
  double fc = val(c), fd = val(dpt);
  while (b - a > tol * std::max(1.0, std::abs(b) + std::abs(a))) {
    if (fc > fd) {
      b = dpt;
      dpt = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = val(c);
    } else {
      a = c;
      c = dpt;
      fc = fd;
      dpt = a + gr * (b - a);
      fd = val(dpt);
    }
  }
  double mid = 0.5 * (a + b);
  return val(mid) > best_v ? mid : best_t;
}

}  // namespace

DecontiguizeResult decontiguize(const GenfunSource& src, const Pattern& w,
                                const std::vector<Cplx>& z_fixed, double p,
                                int grid_points, double refine_tol,
                                std::uint64_t eval_cap) {
  const Hypermatrix& x = *src.x;
  const int r = x.dim(), n = x.side();
  const int l = w.rank() == 0 ? 1 : w.side();
  require(w.rank() == r && r >= 1, "decontiguize needs a full-rank pattern");
  require(static_cast<int>(z_fixed.size()) == r, "needs r fixed scalars");
  for (const auto& v : z_fixed)
    require(std::abs(std::abs(v) - 1.0) <= 1e-12,
            "fixed scalars must lie on the unit circle");
  require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  require(count_positions(n, r, l, r) <= eval_cap,
          "decontiguize: position cap exceeded");

  std::vector<double> tied(r, 0.0);
  Cplx value = eval_mixed(src, w, z_fixed, tied, r);  // h at the fixed scalars
  const double h_abs = std::abs(value);
  require(h_abs > 0.0, "decontiguize: zero starting value");

  DecontiguizeResult out;
  out.h_value = h_abs;

  const double lo = 1.0 - 2.0 * p, hi = 1.0;
  for (int axis = r - 1; axis >= 0; --axis) {
    if (l == 1) break;  // no free coordinates to unfix
    // The partial sum with this axis's tied variable at 0 keeps exactly the
    // terms of the previous step.
    tied[axis] = 0.0;
    Cplx at_zero = eval_mixed(src, w, z_fixed, tied, axis);
    require(at_zero == value,
            "decontiguize: tied-variable-0 sum does not match previous step");

    // Bin the partial sum into a polynomial in the tied variable for the
    // search, then re-evaluate canonically at the winner.
    std::vector<Cplx> poly(n - l + 1, Cplx(0.0, 0.0));
    {
      std::vector<double> probe = tied;
      const auto cells = detail::pattern_cells(w);
      MixedState st;
      st.corner.assign(axis, 0);
      for (int a = axis; a < r; ++a) {
        std::vector<int> t(l);
        for (int j = 0; j < l; ++j) t[j] = j;
        st.tuples.push_back(std::move(t));
      }
      Index scratch(r, 0);
      while (true) {
        const int c = mixed_coeff(src, w, cells, st, axis, scratch);
        if (c != 0) {
          Cplx mono(1.0, 0.0);
          for (int a = 0; a < r; ++a) {
            if (a < axis) {
              mono *= cpow_int(z_fixed[a], st.corner[a]);
            } else {
              const auto& t = st.tuples[a - axis];
              mono *= cpow_int(z_fixed[a], t.front());
              if (a > axis)
                mono *= pow_real(probe[a], t.back() - t.front() - (l - 1));
            }
          }
          const auto& tcur = st.tuples[0];
          poly[tcur.back() - tcur.front() - (l - 1)] +=
              static_cast<double>(c) * mono;
        }
        int a = r - 1;
        for (; a >= 0; --a) {
          if (a < axis) {
            if (++st.corner[a] <= n - l) break;
            st.corner[a] = 0;
          } else {
            if (next_combination(st.tuples[a - axis], n)) break;
          }
        }
        if (a < 0) break;
      }
    }
    tied[axis] = maximize_on_segment(poly, lo, hi, grid_points, refine_tol);
    value = eval_mixed(src, w, z_fixed, tied, axis);
  }

  out.z.rows.resize(r);
  for (int i = 0; i < r; ++i) {
    out.z.rows[i].assign(l, Cplx(tied[i], 0.0));
    out.z.rows[i][0] = z_fixed[i];
  }
  out.g_value = value;
  out.value = std::abs(value);
  out.tied = tied;
  return out;
}

}  // namespace hmtr
