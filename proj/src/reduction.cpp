#include "hmtr/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hmtr/rng.hpp"

namespace hmtr {

namespace {

template <typename M>
M slice_last_impl(const M& m, int coord) {
  const int d = m.dim(), n = m.side();
  require(d >= 1, "cannot slice a scalar");
  require(coord >= 0 && coord < n, "slice coordinate out of range");
  M out(d - 1, n);
  Index k(d - 1, 0), full(d, 0);
  const std::size_t total = out.size();
  for (std::size_t f = 0; f < total; ++f) {
    for (int a = 0; a < d - 1; ++a) full[a] = k[a];
    full[d - 1] = coord;
    out.set(k, m.at(full));
    for (int a = d - 2; a >= 0; --a) {
      if (++k[a] < n) break;
      k[a] = 0;
    }
  }
  return out;
}

}  // namespace

SignedHypermatrix slice_last(const SignedHypermatrix& m, int coord) {
  return slice_last_impl(m, coord);
}
Hypermatrix slice_last(const Hypermatrix& m, int coord) {
  return slice_last_impl(m, coord);
}

std::vector<int> ReductionResult::lambdas_desc() const {
  std::vector<int> v;
  for (int i = 1; i <= d; ++i) v.push_back(lambdas[i]);
  return v;
}

Hypermatrix ReductionResult::restrict_binary(const Hypermatrix& m,
                                             int target) const {
  require(m.dim() == d && m.side() == n, "restrict: shape mismatch");
  require(target >= 0 && target <= d, "restrict: bad target dimension");
  Hypermatrix cur = m;
  for (int i = d; i > target; --i)
    cur = slice_last(apply(transforms[i], cur), lambdas[i]);
  if (target >= 1) cur = apply(transforms[target], cur);
  return cur;
}

namespace {

// Least boundary distance over nonzero entries.
int margin_thickness(const SignedHypermatrix& a) {
  const int d = a.dim(), n = a.side();
  int lam = n;  // larger than any attainable value
  for (std::size_t f = 0; f < a.size(); ++f) {
    if (a.flat_at(f) == 0) continue;
    const Index k = a.grid().unflat(f);
    int lo = n, hi = -1;
    for (int i = 0; i < d; ++i) {
      lo = std::min(lo, k[i]);
      hi = std::max(hi, k[i]);
    }
    lam = std::min(lam, std::min(lo, n - 1 - hi));
  }
  return lam;
}

}  // namespace

ReductionResult reduce(const SignedHypermatrix& a) {
  require(!a.is_zero(), "reduce: zero hypermatrix");
  const int d = a.dim(), n = a.side();
  ReductionResult rr;
  rr.d = d;
  rr.n = n;
  rr.chain.resize(d + 1);
  rr.lambdas.assign(d + 1, 0);
  rr.transforms.assign(d + 1, AxisTransform{});
  rr.slice_indices.assign(d + 1, 0);
  rr.frame.resize(d + 1);

  SignedHypermatrix cur = a;
  std::vector<AxisBinding> bind(d);
  for (int i = 0; i < d; ++i) bind[i] = {i, false};

  for (int i = d; i >= 1; --i) {
    require(!cur.is_zero(), "reduce: chain element became zero");
    const int lam = margin_thickness(cur);

    // Which (axis, side) realizes the margin; prefer the lowest original
    // axis, low side before high.
    std::vector<std::uint8_t> low_ok(i, 0), high_ok(i, 0);
    for (std::size_t f = 0; f < cur.size(); ++f) {
      if (cur.flat_at(f) == 0) continue;
      const Index k = cur.grid().unflat(f);
      for (int c = 0; c < i; ++c) {
        if (k[c] == lam) low_ok[c] = 1;
        if (k[c] == n - 1 - lam) high_ok[c] = 1;
      }
    }
    int best_axis = -1;
    bool best_high = false;
    for (int c = 0; c < i; ++c) {
      for (int side = 0; side < 2; ++side) {
        if (side == 0 ? !low_ok[c] : !high_ok[c]) continue;
        if (best_axis < 0 ||
            std::make_pair(bind[c].orig_axis, side) <
                std::make_pair(bind[best_axis].orig_axis, best_high ? 1 : 0)) {
          best_axis = c;
          best_high = side == 1;
        }
      }
    }
    require(best_axis >= 0, "reduce: no margin-realizing axis");

    AxisTransform t;
    for (int c = 0; c < i; ++c)
      if (c != best_axis) t.perm.push_back(c);
    t.perm.push_back(best_axis);
    t.reversed.assign(i, 0);
    t.reversed[i - 1] = best_high ? 1 : 0;

    SignedHypermatrix norm = apply(t, cur);
    // Normal form sanity: zero below lambda on the last axis, nonzero at it.
    {
      bool hit = false;
      for (std::size_t f = 0; f < norm.size(); ++f) {
        if (norm.flat_at(f) == 0) continue;
        const int last = norm.grid().unflat(f)[i - 1];
        require(last >= lam, "reduce: margin not clear after normalization");
        if (last == lam) hit = true;
      }
      require(hit, "reduce: no entry on the margin boundary");
    }

    std::vector<AxisBinding> nb(i);
    for (int c = 0; c < i; ++c) {
      nb[c] = bind[t.perm[c]];
      if (t.reversed[c]) nb[c].reversed = !nb[c].reversed;
    }

    rr.chain[i] = norm;
    rr.lambdas[i] = lam;
    rr.transforms[i] = t;
    rr.slice_indices[i] = lam;
    rr.frame[i] = nb;
    rr.sliced.push_back(
        {nb[i - 1].orig_axis, nb[i - 1].reversed ? n - 1 - lam : lam});

    cur = slice_last(norm, lam);
    bind.assign(nb.begin(), nb.end() - 1);
  }
  require(cur.dim() == 0 && cur.flat_at(0) != 0,
          "reduce: terminal element is not a nonzero scalar");
  rr.chain[0] = cur;
  rr.frame[0] = {};

  for (int i = d; i >= 2; --i)
    require(rr.lambdas[i] <= rr.lambdas[i - 1],
            "reduce: lambda sequence must be non-increasing");
  return rr;
}

int classify(const std::vector<int>& lambdas_desc, int l) {
  for (int i = static_cast<int>(lambdas_desc.size()); i >= 1; --i)
    if (lambdas_desc[i - 1] >= l) return i;
  return 0;
}

std::pair<Index, std::vector<int>> find_tangent_point(
    const std::vector<Index>& h) {
  require(!h.empty(), "tangent point of an empty set");
  std::size_t best = 0;
  long long best_sum = 0;
  for (int v : h[0]) best_sum += v;
  for (std::size_t i = 1; i < h.size(); ++i) {
    long long s = 0;
    for (int v : h[i]) s += v;
    if (s < best_sum || (s == best_sum && h[i] < h[best])) {
      best = i;
      best_sum = s;
    }
  }
  return {h[best], std::vector<int>(h[best].size(), 1)};
}

Witness construct_witness(const Hypermatrix& xr, const Hypermatrix& yr,
                          int l) {
  require(xr.grid() == yr.grid(), "witness: shape mismatch");
  require(l >= 1 && l % 2 == 1, "witness: side must be odd");
  const int r = xr.dim(), n = xr.side();
  require(r >= 1, "witness: rank must be >= 1");
  const SignedHypermatrix a = diff(xr, yr);
  require(!a.is_zero(), "witness: X and Y coincide");

  auto [center, direction] = find_tangent_point(a.support());
  const int half = (l - 1) / 2;
  Index corner(r);
  for (int i = 0; i < r; ++i) {
    corner[i] = center[i] - half;
    require(corner[i] >= 0 && corner[i] + l <= n,
            "witness: centered block out of bounds");
  }

  const Pattern w1 = extract_block(xr, corner, l);
  const Pattern w2 = extract_block(yr, corner, l);
  const int s = (l - 1) / 4;
  const bool ap1 = s == 0 || !find_period(w1, s).has_value();
  const bool ap2 = s == 0 || !find_period(w2, s).has_value();

  auto dump = [&]() {
    std::ostringstream os;
    os << "\n--- witness repro dump ---\nl " << l << "\nX:\n"
       << serialize_hmx(xr) << "Y:\n"
       << serialize_hmx(yr);
    return os.str();
  };
  require(ap1 || ap2,
          "witness: both centered blocks are periodic, violating the "
          "construction guarantee" +
              dump());

  Witness wit;
  wit.w = ap1 ? w1 : w2;
  wit.chosen_from = ap1 ? 1 : 2;
  wit.center = center;
  wit.s = s;
  wit.direction = direction;
  wit.aperiodic = true;

  // Contiguous generating-function coefficients of the pair at this W.
  SignedHypermatrix coeffs(r, n);
  Index c(r, 0);
  while (true) {
    bool in_bounds = true;
    for (int i = 0; i < r; ++i)
      if (c[i] + l > n) in_bounds = false;
    if (in_bounds) {
      const int v = (extract_block(xr, c, l) == wit.w ? 1 : 0) -
                    (extract_block(yr, c, l) == wit.w ? 1 : 0);
      coeffs.set(c, static_cast<std::int8_t>(v));
    }
    int i = r - 1;
    for (; i >= 0; --i) {
      if (++c[i] < n) break;
      c[i] = 0;
    }
    if (i < 0) break;
  }
  wit.h_coeffs = coeffs;
  wit.h_nonzero = !coeffs.is_zero();
  wit.h_sparsity = wit.h_nonzero ? sparsity_index(coeffs) : 0;

  require(wit.h_nonzero,
          "witness: contiguous generating function vanished" + dump());
  require(s == 0 || wit.h_sparsity >= s,
          "witness: sparsity certificate failed" + dump());
  return wit;
}

double genfun_recursion_check(const ReductionResult& rr, const Pattern& w,
                              int samples, std::uint64_t seed,
                              std::uint64_t eval_cap) {
  const int r0 = w.rank(), l = w.rank() == 0 ? 1 : w.side();
  require(r0 <= rr.d, "pattern rank exceeds chain dimension");
  double worst = 0.0;
  CounterRng rng(seed);
  for (int i = r0; i <= rr.d - 1; ++i) {
    const SignedSource big(rr.chain[i + 1]);
    const SignedHypermatrix raw = slice_last(rr.chain[i + 1], rr.lambdas[i + 1]);
    const SignedSource small(raw);
    for (int t = 0; t < samples; ++t) {
      ComplexPoint z;
      for (int row = 0; row < r0; ++row) {
        std::vector<Cplx> zr(l);
        for (auto& v : zr) {
          const double th = (rng.u01() * 2.0 - 1.0) * M_PI;
          v = Cplx(std::cos(th), std::sin(th));
        }
        z.rows.push_back(std::move(zr));
      }
      for (int sidx = 0; sidx < i - r0; ++sidx) {
        const double th = (rng.u01() * 2.0 - 1.0) * M_PI;
        z.points.emplace_back(std::cos(th), std::sin(th));
      }
      const Cplx lhs =
          eval_genfun_sliced(big.source(), w, rr.lambdas[i + 1], z, eval_cap);
      const Cplx rhs = eval_genfun(small.source(), w, z, eval_cap);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace hmtr
