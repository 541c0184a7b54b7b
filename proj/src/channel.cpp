#include "hmtr/channel.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "hmtr/detail/match.hpp"
#include "hmtr/kernels.hpp"
#include "hmtr/rng.hpp"

namespace hmtr {

std::vector<int> Trace::shape() const {
  std::vector<int> s;
  s.reserve(retained.size());
  for (const auto& r : retained) s.push_back(static_cast<int>(r.size()));
  return s;
}

std::size_t Trace::cells() const {
  std::size_t c = 1;
  for (const auto& r : retained) c *= r.size();
  return c;
}

namespace {

std::vector<std::vector<int>> sample_retained(int d, int n, ChannelParams pr,
                                              std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<std::vector<int>> kept(d);
  std::uint64_t counter = 0;
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < n; ++i)
      if (!(rng.u01_at(counter++) < pr.q)) kept[a].push_back(i);
  return kept;
}

}  // namespace

std::vector<std::vector<int>> sample_kept(int d, int n, ChannelParams pr,
                                          std::uint64_t seed) {
  return sample_retained(d, n, pr, seed);
}

Trace sample_trace(const Hypermatrix& x, ChannelParams pr,
                   std::uint64_t seed) {
  Trace t;
  t.d = x.dim();
  t.n = x.side();
  t.retained = sample_retained(t.d, t.n, pr, seed);
  t.entries.reserve(t.cells());
  if (t.cells() > 0) {
    Index c(t.d, 0), k(t.d, 0);
    const auto shape = t.shape();
    while (true) {
      for (int a = 0; a < t.d; ++a) k[a] = t.retained[a][c[a]];
      t.entries.push_back(x.at(k));
      int a = t.d - 1;
      for (; a >= 0; --a) {
        if (++c[a] < shape[a]) break;
        c[a] = 0;
      }
      if (a < 0) break;
    }
  }
  return t;
}

Hypermatrix pad(const Trace& t, int d, int n) {
  require(t.d == d, "pad: rank mismatch");
  for (const auto& r : t.retained)
    require(static_cast<int>(r.size()) <= n, "pad: trace exceeds target shape");
  Hypermatrix out(d, n);
  if (t.cells() == 0) return out;
  const auto shape = t.shape();
  Index c(d, 0);
  std::size_t f = 0;
  while (true) {
    out.set(c, t.entries[f++]);
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++c[a] < shape[a]) break;
      c[a] = 0;
    }
    if (a < 0) break;
  }
  return out;
}

std::string serialize_trc(const Trace& t) {
  std::ostringstream os;
  os << "TRC v1\n" << t.d << ' ' << t.n << '\n';
  for (const auto& r : t.retained) {
    os << r.size();
    for (int i : r) os << ' ' << i;
    os << '\n';
  }
  const int last = t.d > 0 ? static_cast<int>(t.retained.back().size()) : 0;
  for (std::size_t f = 0; f < t.entries.size(); ++f) {
    os << static_cast<int>(t.entries[f]);
    os << (((f + 1) % static_cast<std::size_t>(last) == 0) ? '\n' : ' ');
  }
  return os.str();
}

Trace parse_trc(const std::string& text, const Limits& lim) {
  std::istringstream is(text);
  std::string magic, ver;
  require(static_cast<bool>(is >> magic >> ver) && magic == "TRC" &&
              ver == "v1",
          "TRC: bad magic");
  Trace t;
  require(static_cast<bool>(is >> t.d >> t.n), "TRC: missing shape");
  require(t.d >= 1 && t.d <= lim.max_dim, "TRC: dimension out of range");
  require(t.n >= 1 && t.n <= lim.max_side, "TRC: side out of range");
  t.retained.resize(t.d);
  for (auto& r : t.retained) {
    int m = 0;
    require(static_cast<bool>(is >> m) && m >= 0 && m <= t.n,
            "TRC: bad retained count");
    r.resize(m);
    int prev = -1;
    for (int& v : r) {
      require(static_cast<bool>(is >> v), "TRC: missing retained index");
      require(v > prev && v < t.n, "TRC: retained indices must ascend");
      prev = v;
    }
  }
  t.entries.resize(t.cells());
  for (auto& e : t.entries) {
    int v = 0;
    require(static_cast<bool>(is >> v) && (v == 0 || v == 1),
            "TRC: bad entry");
    e = static_cast<std::uint8_t>(v);
  }
  int extra;
  require(!(is >> extra), "TRC: trailing entries");
  return t;
}

bool trace_match(const Hypermatrix& x,
                 const std::vector<std::vector<int>>& retained,
                 const Pattern& w, const ScatterPosition& j) {
  const int d = x.dim();
  require(static_cast<int>(retained.size()) == d, "retained rank mismatch");
  const auto plan = detail::plan_axes(j, d);
  Index src(d, 0);
  for (std::size_t f = 0; f < w.size(); ++f) {
    const Index cell = w.cell(f);
    for (int a = 0; a < d; ++a) {
      const int coord = plan[a].is_row ? j.rows[plan[a].slot][cell[plan[a].slot]]
                                       : j.points[plan[a].slot];
      if (coord >= static_cast<int>(retained[a].size())) return false;
      src[a] = retained[a][coord];
    }
    if (x.at(src) != w.flat_at(f)) return false;
  }
  return true;
}

double exact_pattern_prob(const Hypermatrix& x, const Pattern& w,
                          const ScatterPosition& j, ChannelParams pr,
                          std::uint64_t enum_cap) {
  const int d = x.dim(), n = x.side();
  j.validate(n, d, w.rank() == 0 ? 1 : w.side());
  require(j.rank() == w.rank(), "position/pattern rank mismatch");
  require(d <= 8 && d * n < 63, "oracle: shape too large to enumerate");
  const std::uint64_t combos = 1ull << (d * n);
  require(combos <= enum_cap, "oracle: enumeration cap exceeded");

  // Keep-count probabilities p^m q^{n-m} shared by all axes.
  std::vector<double> keep_prob(n + 1);
  for (int m = 0; m <= n; ++m)
    keep_prob[m] = pow_nonneg(pr.p, m) * pow_nonneg(pr.q, n - m);

  const auto plan = detail::plan_axes(j, d);
  const auto cells = detail::pattern_cells(w);
  const std::uint64_t axis_mask = (n >= 64) ? ~0ull : ((1ull << n) - 1);

  return tree_map_sum<double>(combos, [&](std::uint64_t g) {
    std::uint64_t masks[8];
    double prob = 1.0;
    for (int a = 0; a < d; ++a) {
      masks[a] = (g >> (a * n)) & axis_mask;
      prob *= keep_prob[std::popcount(masks[a])];
    }
    return detail::match_masks(x, masks, w, plan, j, cells) ? prob : 0.0;
  });
}

std::pair<double, double> mc_pattern_prob(const Hypermatrix& x,
                                          const Pattern& w,
                                          const ScatterPosition& j,
                                          ChannelParams pr, std::uint64_t t,
                                          std::uint64_t seed) {
  require(t >= 1, "mc oracle needs at least one trial");
  const int d = x.dim(), n = x.side();
  j.validate(n, d, w.rank() == 0 ? 1 : w.side());
  const std::uint64_t hits = parallel_count(t, [&](std::uint64_t i) {
    const auto kept = sample_retained(d, n, pr, derive_seed(seed, i));
    return trace_match(x, kept, w, j);
  });
  const double m = static_cast<double>(hits) / static_cast<double>(t);
  const double se = std::sqrt(m * (1.0 - m) / static_cast<double>(t));
  return {m, se};
}

}  // namespace hmtr
