#include "hmtr/reconstruct.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "hmtr/rng.hpp"

namespace hmtr {

int l_rule(int n, int d) {
  require(n >= 1 && d >= 1, "bad shape");
  const double nn = static_cast<double>(n);
  double raw;
  if (d == 1)
    raw = 2.0 * std::pow(nn, 0.2);
  else if (d == 2)
    raw = 4.0 * std::pow(nn, 1.0 / 7.0) + 1.0;
  else if (d == 3)
    raw = 4.0 * std::pow(nn, 1.0 / 9.0) + 1.0;
  else
    raw = 4.0 * std::pow(nn, 0.6) + 1.0;
  int l = static_cast<int>(std::ceil(raw));
  if (l % 2 == 0) ++l;
  int cap = (n - 1) / 2;
  if (cap % 2 == 0) --cap;  // largest odd value within the clamp
  if (cap < 1) cap = 1;
  return std::min(l, cap);
}

namespace {

// Map a witness pattern from the chain frame back to original axes: sort the
// axis bindings by original axis, permute the pattern axes accordingly, and
// flip axes that were reversed along the way.
std::pair<Pattern, std::vector<int>> pattern_to_original(
    const Pattern& w, const std::vector<AxisBinding>& bind) {
  const int r = w.rank(), l = w.side();
  std::vector<int> order(r);
  for (int i = 0; i < r; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return bind[a].orig_axis < bind[b].orig_axis;
  });
  std::vector<int> axes(r);
  for (int i = 0; i < r; ++i) axes[i] = bind[order[i]].orig_axis;

  std::size_t total = w.size();
  std::vector<std::uint8_t> entries(total);
  Index cell(r, 0), src(r, 0);
  for (std::size_t f = 0; f < total; ++f) {
    for (int i = 0; i < r; ++i) {
      const int chain_axis = order[i];
      src[chain_axis] = bind[chain_axis].reversed ? l - 1 - cell[i] : cell[i];
    }
    entries[f] = w.at(src);
    for (int i = r - 1; i >= 0; --i) {
      if (++cell[i] < l) break;
      cell[i] = 0;
    }
  }
  return {Pattern(r, l, std::move(entries)), axes};
}

struct GapScan {
  ScatterPosition j;
  double e_x = 0, e_y = 0, gap = -1.0;
};

GapScan best_gap(const Hypermatrix& x, const Hypermatrix& y, const Pattern& w,
                 const PositionSpace& space, ChannelParams pr,
                 const EngineConfig& cfg) {
  GapScan best;
  auto consider = [&](const ScatterPosition& j) {
    const double ex = exact_pattern_prob(x, w, j, pr, cfg.enum_cap);
    const double ey = exact_pattern_prob(y, w, j, pr, cfg.enum_cap);
    const double gap = std::abs(ex - ey);
    if (gap > best.gap) best = {j, ex, ey, gap};
  };
  if (space.count() <= cfg.position_cap) {
    ScatterPosition j = first_position(space);
    bool more = space.count() > 0;
    while (more) {
      consider(j);
      more = advance_position(space, j);
    }
  } else {
    // Seeded rank subsample, ascending and deduplicated.
    CounterRng rng(cfg.search_seed);
    const std::uint64_t want = std::min(cfg.subsample, space.count());
    std::set<std::uint64_t> ranks;
    while (ranks.size() < want) ranks.insert(rng.next() % space.count());
    for (std::uint64_t rank : ranks) consider(space.unrank(rank));
  }
  return best;
}

}  // namespace

Statistic select_statistic(const Hypermatrix& x, const Hypermatrix& y,
                           ChannelParams pr, const EngineConfig& cfg) {
  require(x.grid() == y.grid(), "statistic: shape mismatch");
  const SignedHypermatrix a = diff(x, y);
  require(!a.is_zero(), "statistic: X and Y coincide");
  const int n = x.side(), d = x.dim();

  const ReductionResult rr = reduce(a);
  const int l = cfg.l_fixed > 0 ? cfg.l_fixed : l_rule(n, d);
  const int r = classify(rr.lambdas_desc(), l);

  Statistic st;
  st.lambdas = rr.lambdas_desc();
  for (int i = 1; i <= d; ++i) st.transforms.push_back(rr.transforms[i]);
  st.r = r;
  st.l = r == 0 ? 1 : l;

  Pattern w = Pattern::scalar_one();
  std::vector<int> axes;
  if (r >= 1) {
    const Hypermatrix xr = rr.restrict_binary(x, r);
    const Hypermatrix yr = rr.restrict_binary(y, r);
    const Witness wit = construct_witness(xr, yr, l);
    auto mapped = pattern_to_original(wit.w, rr.frame[r]);
    w = std::move(mapped.first);
    axes = std::move(mapped.second);
  }

  PositionSpace space(n, d, st.l, axes);
  GapScan scan = best_gap(x, y, w, space, pr, cfg);
  if (scan.gap > 0.0) {
    st.w = w;
    st.j = scan.j;
    st.gap = scan.gap;
    st.e_x = scan.e_x;
    st.e_y = scan.e_y;
    return st;
  }

  // Zero gap over the searched set: exhaustive scalar rescan (never
  // subsampled).
  PositionSpace cells(n, d, 1, {});
  EngineConfig full = cfg;
  full.position_cap = ~0ull;
  scan = best_gap(x, y, Pattern::scalar_one(), cells, pr, full);
  require(scan.gap > 0.0,
          "statistic: zero gap at oracle precision contradicts X != Y");
  st.w = Pattern::scalar_one();
  st.j = scan.j;
  st.gap = scan.gap;
  st.e_x = scan.e_x;
  st.e_y = scan.e_y;
  st.r = 0;
  st.l = 1;
  st.fallback = true;
  return st;
}

std::uint64_t hoeffding_budget(double gap, int n, int d, double delta) {
  require(gap > 0.0 && gap <= 1.0, "gap must lie in (0, 1]");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  const double cells = std::pow(static_cast<double>(n), d);
  const double logterm =
      std::log(2.0) * (1.0 + cells) - std::log(delta);  // ln(2 * 2^{n^d} / delta)
  const double t = std::ceil(2.0 * logterm / (gap * gap));
  require(t < 9e18, "budget overflow");
  return static_cast<std::uint64_t>(t);
}

PaddedBatch::PaddedBatch(int n, int d) : n_(n), d_(d) {
  require(d >= 1 && d <= 8 && n >= 1 && n <= 255, "batch shape out of range");
  cells_ = 1;
  for (int i = 0; i < d; ++i) cells_ *= static_cast<std::size_t>(n);
  compact_ = cells_ <= 64;
}

void PaddedBatch::add_trace(const Trace& t) {
  require(t.d == d_ && t.n == n_, "batch shape mismatch");
  ++count_;
  if (!compact_) {
    raw_.push_back(t);
    return;
  }
  std::uint64_t mask = 0, counts = 0;
  for (int a = 0; a < d_; ++a)
    counts |= static_cast<std::uint64_t>(t.retained[a].size()) << (8 * a);
  if (t.cells() > 0) {
    const auto shape = t.shape();
    Index c(d_, 0);
    std::size_t f = 0;
    while (true) {
      if (t.entries[f++]) {
        std::size_t flat = 0;
        for (int a = 0; a < d_; ++a)
          flat = flat * static_cast<std::size_t>(n_) +
                 static_cast<std::size_t>(c[a]);
        mask |= 1ull << flat;
      }
      int a = d_ - 1;
      for (; a >= 0; --a) {
        if (++c[a] < shape[a]) break;
        c[a] = 0;
      }
      if (a < 0) break;
    }
  }
  masks_.push_back(mask);
  counts_.push_back(counts);
  ones_mean_.clear();
  exists_mean_.clear();
}

void PaddedBatch::add_sampled(const Hypermatrix& x,
                              const std::vector<std::vector<int>>& kept) {
  require(x.dim() == d_ && x.side() == n_, "batch shape mismatch");
  if (!compact_) {
    ++count_;
    Trace t;
    t.d = d_;
    t.n = n_;
    t.retained = kept;
    t.entries.reserve(t.cells());
    if (t.cells() > 0) {
      Index c(d_, 0), src(d_, 0);
      const auto shape = t.shape();
      while (true) {
        for (int a = 0; a < d_; ++a) src[a] = kept[a][c[a]];
        t.entries.push_back(x.at(src));
        int a = d_ - 1;
        for (; a >= 0; --a) {
          if (++c[a] < shape[a]) break;
          c[a] = 0;
        }
        if (a < 0) break;
      }
    }
    raw_.push_back(std::move(t));
    return;
  }
  ++count_;
  std::uint64_t mask = 0, counts = 0;
  bool empty = false;
  std::vector<int> shape(d_);
  for (int a = 0; a < d_; ++a) {
    shape[a] = static_cast<int>(kept[a].size());
    counts |= static_cast<std::uint64_t>(shape[a]) << (8 * a);
    if (shape[a] == 0) empty = true;
  }
  if (!empty) {
    Index c(d_, 0), src(d_, 0);
    while (true) {
      std::size_t flat = 0;
      for (int a = 0; a < d_; ++a) {
        src[a] = kept[a][c[a]];
        flat = flat * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(c[a]);
      }
      if (x.at(src)) mask |= 1ull << flat;
      int a = d_ - 1;
      for (; a >= 0; --a) {
        if (++c[a] < shape[a]) break;
        c[a] = 0;
      }
      if (a < 0) break;
    }
  }
  masks_.push_back(mask);
  counts_.push_back(counts);
  ones_mean_.clear();
  exists_mean_.clear();
}

bool PaddedBatch::cell_exists(std::size_t trace, const Index& coords) const {
  const std::uint64_t counts = counts_[trace];
  for (int a = 0; a < d_; ++a)
    if (coords[a] >= static_cast<int>((counts >> (8 * a)) & 0xff))
      return false;
  return true;
}

void PaddedBatch::build_tables() const {
  ones_mean_.assign(cells_, 0.0);
  exists_mean_.assign(cells_, 0.0);
  Index coords(d_, 0);
  for (std::size_t c = 0; c < cells_; ++c) {
    std::size_t rem = c;
    for (int a = d_ - 1; a >= 0; --a) {
      coords[a] = static_cast<int>(rem % static_cast<std::size_t>(n_));
      rem /= static_cast<std::size_t>(n_);
    }
    for (std::size_t t = 0; t < masks_.size(); ++t) {
      if (!cell_exists(t, coords)) continue;
      exists_mean_[c] += 1.0;
      ones_mean_[c] += (masks_[t] >> c) & 1 ? 1.0 : 0.0;
    }
    ones_mean_[c] /= static_cast<double>(masks_.size());
    exists_mean_[c] /= static_cast<double>(masks_.size());
  }
}

double PaddedBatch::match_freq(const Pattern& w,
                               const ScatterPosition& j) const {
  if (count_ == 0) return 0.0;
  // Probe list: flat index, per-axis coordinates, and required value.
  struct Probe {
    std::size_t flat;
    Index coords;
    std::uint8_t want;
  };
  std::vector<Probe> probe;
  probe.reserve(w.size());
  int ti = 0, si = 0;
  std::vector<std::pair<bool, int>> plan(d_);  // (is_row, slot)
  for (int a = 0; a < d_; ++a)
    plan[a] = j.is_row_axis(a) ? std::make_pair(true, ti++)
                               : std::make_pair(false, si++);
  for (std::size_t f = 0; f < w.size(); ++f) {
    const Index cell = w.cell(f);
    Probe p;
    p.coords.resize(d_);
    p.flat = 0;
    for (int a = 0; a < d_; ++a) {
      p.coords[a] = plan[a].first ? j.rows[plan[a].second][cell[plan[a].second]]
                                  : j.points[plan[a].second];
      p.flat = p.flat * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(p.coords[a]);
    }
    p.want = w.flat_at(f);
    probe.push_back(std::move(p));
  }

  if (!compact_) {
    std::uint64_t hits = 0;
    for (const Trace& t : raw_) {
      const auto shape = t.shape();
      bool ok = true;
      for (const auto& p : probe) {
        std::size_t flat = 0;
        for (int a = 0; a < d_ && ok; ++a) {
          if (p.coords[a] >= shape[a])
            ok = false;
          else
            flat = flat * static_cast<std::size_t>(shape[a]) +
                   static_cast<std::size_t>(p.coords[a]);
        }
        if (!ok || t.entries[flat] != p.want) {
          ok = false;
          break;
        }
      }
      hits += ok ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(count_);
  }

  if (probe.size() == 1) {
    if (ones_mean_.empty()) build_tables();
    const auto& p = probe[0];
    return p.want ? ones_mean_[p.flat]
                  : exists_mean_[p.flat] - ones_mean_[p.flat];
  }

  std::uint64_t hits = 0;
  for (std::size_t t = 0; t < masks_.size(); ++t) {
    bool ok = true;
    for (const auto& p : probe) {
      if (!cell_exists(t, p.coords) ||
          ((((masks_[t] >> p.flat) & 1) != 0) != (p.want != 0))) {
        ok = false;
        break;
      }
    }
    hits += ok ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(masks_.size());
}

int pairwise_decide(const PaddedBatch& batch, const Statistic& stat) {
  const double m = batch.match_freq(stat.w, stat.j);
  return std::abs(m - stat.e_x) <= std::abs(m - stat.e_y) ? 0 : 1;
}

namespace {

const Statistic& cached_statistic(const Hypermatrix& a, const Hypermatrix& b,
                                  ChannelParams pr, const EngineConfig& cfg,
                                  StatCache& cache, bool& swapped) {
  swapped = b.entries() < a.entries();
  const Hypermatrix& lo = swapped ? b : a;
  const Hypermatrix& hi = swapped ? a : b;
  const auto key = std::make_pair(lo.entries(), hi.entries());
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, select_statistic(lo, hi, pr, cfg)).first;
  return it->second;
}

}  // namespace

Hypermatrix reconstruct_exhaustive(const std::vector<Trace>& traces, int n,
                                   int d, ChannelParams pr,
                                   const EngineConfig& cfg, StatCache* cache,
                                   const std::vector<Hypermatrix>* candidates) {
  PaddedBatch batch(n, d);
  for (const Trace& t : traces) batch.add_trace(t);
  return reconstruct_from_batch(batch, pr, cfg, cache, candidates);
}

Hypermatrix reconstruct_from_batch(const PaddedBatch& batch, ChannelParams pr,
                                   const EngineConfig& cfg, StatCache* cache,
                                   const std::vector<Hypermatrix>* candidates) {
  const int n = batch.n(), d = batch.d();
  std::vector<Hypermatrix> all;
  if (candidates == nullptr) {
    const double bits = std::pow(static_cast<double>(n), d);
    require(bits <= 62 &&
                (1ull << static_cast<int>(bits)) <= cfg.candidate_cap,
            "candidate cap exceeded without an explicit candidate list");
    const std::uint64_t total = 1ull << static_cast<int>(bits);
    const std::size_t cells = static_cast<std::size_t>(bits);
    all.reserve(total);
    for (std::uint64_t v = 0; v < total; ++v) {
      Hypermatrix x(d, n);
      for (std::size_t f = 0; f < cells; ++f)
        if ((v >> f) & 1) x.flat_set(f, 1);
      all.push_back(std::move(x));
    }
    candidates = &all;
  }
  require(!candidates->empty(), "no candidates");

  StatCache local;
  StatCache& sc = cache ? *cache : local;

  std::vector<std::size_t> alive(candidates->size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  while (alive.size() > 1) {
    std::vector<std::size_t> next;
    next.reserve(alive.size() / 2 + 1);
    for (std::size_t i = 0; i + 1 < alive.size(); i += 2) {
      const Hypermatrix& a = (*candidates)[alive[i]];
      const Hypermatrix& b = (*candidates)[alive[i + 1]];
      bool swapped = false;
      const Statistic& st = cached_statistic(a, b, pr, cfg, sc, swapped);
      int pick = pairwise_decide(batch, st);
      if (swapped) pick = 1 - pick;
      next.push_back(alive[i + (pick == 0 ? 0 : 1)]);
    }
    if (alive.size() % 2) next.push_back(alive.back());
    alive.swap(next);
  }
  return (*candidates)[alive[0]];
}

std::string ExperimentReport::csv() const {
  std::ostringstream os;
  os << "T,trials,successes,rate\n";
  for (const auto& row : rows) {
    os << row.t << ',' << row.trials << ',' << row.successes << ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", row.rate);
    os << buf << '\n';
  }
  return os.str();
}

ExperimentReport trace_complexity_experiment(int n, int d, ChannelParams pr,
                                             double target, int trials,
                                             std::uint64_t seed,
                                             std::uint64_t t_max,
                                             const EngineConfig& cfg) {
  require(trials >= 1, "experiment needs trials");
  require(target > 0.0 && target <= 1.0, "target must lie in (0, 1]");
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentReport rep;
  rep.n = n;
  rep.d = d;
  rep.q = pr.q;
  rep.seed = seed;
  rep.target = target;

  // Ground truths and trace streams are fixed per trial; T schedules share
  // prefixes of the same stream.
  const std::size_t cells = flat_size(std::vector<int>(d, n));
  std::vector<Hypermatrix> truths;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(derive_seed(seed, 0xA11CE000ull + t));
    Hypermatrix x(n > 0 ? d : d, n);
    for (std::size_t f = 0; f < cells; ++f)
      x.flat_set(f, rng.u01() < 0.5 ? 1 : 0);
    truths.push_back(std::move(x));
  }

  StatCache cache;
  for (std::uint64_t t_count = 1; t_count <= t_max; t_count *= 2) {
    int successes = 0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t trial_seed = derive_seed(seed, 0x7247CE00ull + t);
      std::vector<Trace> traces;
      traces.reserve(t_count);
      for (std::uint64_t i = 0; i < t_count; ++i)
        traces.push_back(
            sample_trace(truths[t], pr, derive_seed(trial_seed, i)));
      const Hypermatrix got =
          reconstruct_exhaustive(traces, n, d, pr, cfg, &cache);
      successes += got == truths[t] ? 1 : 0;
    }
    ExperimentRow row;
    row.t = t_count;
    row.trials = trials;
    row.successes = successes;
    row.rate = static_cast<double>(successes) / trials;
    rep.rows.push_back(row);
    if (rep.minimal_t < 0 && row.rate >= target)
      rep.minimal_t = static_cast<std::int64_t>(t_count);
  }

  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace hmtr
