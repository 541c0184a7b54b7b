#include <doctest.h>

#include <cmath>

#include "hmtr/reconstruct.hpp"
#include "hmtr/rng.hpp"

using namespace hmtr;

namespace {

Hypermatrix from_bits(int d, int n, std::uint64_t bits) {
  Hypermatrix x(d, n);
  for (std::size_t f = 0; f < x.size(); ++f)
    if ((bits >> f) & 1) x.flat_set(f, 1);
  return x;
}

std::vector<Trace> sample_many(const Hypermatrix& x, ChannelParams pr,
                               std::uint64_t t, std::uint64_t seed) {
  std::vector<Trace> out;
  out.reserve(t);
  for (std::uint64_t i = 0; i < t; ++i)
    out.push_back(sample_trace(x, pr, derive_seed(seed, i)));
  return out;
}

}  // namespace

TEST_CASE("l_rule pins") {
  CHECK(l_rule(16, 2) == 7);   // 4*16^{1/7}+1 rounded up to odd
  CHECK(l_rule(9, 2) == 3);    // clamped to the largest odd <= floor(8/2)
  CHECK(l_rule(2, 2) == 1);
  CHECK(l_rule(3, 1) == 1);
  CHECK(l_rule(64, 4) == 31);  // clamp dominates the n^{3/5} rule
}

TEST_CASE("select_statistic on tiny pinned cases") {
  const ChannelParams pr = ChannelParams::from_q(0.5);

  // n = 2, d = 2, single differing entry: the exhaustive scan finds a gap.
  Hypermatrix x = from_bits(2, 2, 0b0110), y = from_bits(2, 2, 0b0111);
  Statistic st = select_statistic(x, y, pr);
  CHECK(st.gap > 0.0);
  CHECK(st.l == 1);

  CHECK_THROWS_AS(select_statistic(x, x, pr), Error);

  // d = 1: x = (1,0,0) vs y = (0,0,0) separates at the first cell with the
  // scalar pattern and gap exactly p.
  Hypermatrix x1(1, 3), y1(1, 3);
  x1.set({0}, 1);
  Statistic s1 = select_statistic(x1, y1, pr);
  CHECK(s1.r == 0);
  CHECK(s1.gap == doctest::Approx(pr.p).epsilon(1e-12));
  CHECK(s1.j.points == std::vector<int>{0});
}

TEST_CASE("statistic case split and gap recomputation") {
  const ChannelParams pr = ChannelParams::from_q(0.4);

  // Deep interior difference, d = 1: the witness path engages at r = 1 with
  // the l = 3 rule.
  Hypermatrix x1(1, 9), y1(1, 9);
  x1.set({4}, 1);
  Statistic s1 = select_statistic(x1, y1, pr);
  CHECK(s1.r == 1);
  CHECK(s1.l == 3);
  CHECK(s1.j.row_axes == std::vector<int>{0});
  CHECK(s1.gap == std::abs(exact_pattern_prob(x1, s1.w, s1.j, pr) -
                           exact_pattern_prob(y1, s1.w, s1.j, pr)));
  if (s1.w.rank() == 1) CHECK_FALSE(find_period(s1.w, 1).has_value());

  // Deep interior difference, d = 2 at the clamped rule l = 1: both margins
  // exceed l, so r = 2 with single-cell tuples on both axes.
  Hypermatrix x(2, 5), y(2, 5);
  x.set({2, 2}, 1);
  Statistic st = select_statistic(x, y, pr);
  CHECK(st.r == 2);
  CHECK(st.l == 1);
  CHECK(st.j.row_axes == std::vector<int>{0, 1});
  const double ex = exact_pattern_prob(x, st.w, st.j, pr);
  const double ey = exact_pattern_prob(y, st.w, st.j, pr);
  CHECK(st.gap == std::abs(ex - ey));
  CHECK(st.e_x == ex);
  CHECK(st.e_y == ey);

  // Random pairs: recomputation always matches, whatever the case.
  CounterRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(2));
    Hypermatrix a(2, n), b(2, n);
    for (std::size_t f = 0; f < a.size(); ++f) {
      a.flat_set(f, static_cast<std::uint8_t>(rng.below(2)));
      b.flat_set(f, static_cast<std::uint8_t>(rng.below(2)));
    }
    if (a == b) continue;
    Statistic s = select_statistic(a, b, pr);
    CHECK(s.gap > 0.0);
    CHECK(s.gap == std::abs(exact_pattern_prob(a, s.w, s.j, pr) -
                            exact_pattern_prob(b, s.w, s.j, pr)));
    if (s.r == 0) CHECK(s.w == Pattern::scalar_one());
  }
}

TEST_CASE("statistic search subsample is deterministic") {
  // Force the seeded subsample path with a tiny position cap.
  const ChannelParams pr = ChannelParams::from_q(0.4);
  Hypermatrix x(2, 3), y(2, 3);
  x.set({0, 1}, 1);
  x.set({2, 2}, 1);
  y.set({1, 1}, 1);
  EngineConfig cfg;
  cfg.position_cap = 4;
  cfg.subsample = 4;
  Statistic a = select_statistic(x, y, pr, cfg);
  Statistic b = select_statistic(x, y, pr, cfg);
  CHECK(a.gap == b.gap);
  CHECK(a.j.points == b.j.points);
  CHECK(a.gap > 0.0);
}

TEST_CASE("witness statistics survive reversal and permutation bookkeeping") {
  const ChannelParams pr = ChannelParams::from_q(0.4);

  // d = 1, difference at position 5 of 9: the margin is realized on the
  // high side, so the reduction reverses the axis before the witness is
  // cut; the emitted statistic must still reproduce its gap from the
  // oracle in original coordinates and separate the pair.
  Hypermatrix x1(1, 9), y1(1, 9);
  x1.set({5}, 1);
  Statistic s1 = select_statistic(x1, y1, pr);
  CHECK(s1.r == 1);
  CHECK(s1.l == 3);
  CHECK(s1.gap > 0.0);
  CHECK(s1.gap == std::abs(exact_pattern_prob(x1, s1.w, s1.j, pr) -
                           exact_pattern_prob(y1, s1.w, s1.j, pr)));
  {
    PaddedBatch batch(9, 1);
    const auto budget = hoeffding_budget(s1.gap, 9, 1, 1e-2);
    for (std::uint64_t i = 0; i < budget; ++i)
      batch.add_sampled(x1, sample_kept(1, 9, pr, derive_seed(4040, i)));
    CHECK(pairwise_decide(batch, s1) == 0);
  }

  // d = 2 with the difference at the exact center of a 7x7: both margins
  // reach the l = 3 rule, the full rank-2 witness engages, and the mapped
  // pattern separates the pair from traces.
  Hypermatrix x2(2, 7), y2(2, 7);
  x2.set({3, 3}, 1);
  Statistic s2 = select_statistic(x2, y2, pr);
  CHECK(s2.r == 2);
  CHECK(s2.l == 3);
  CHECK(s2.gap > 0.0);
  CHECK(s2.gap == std::abs(exact_pattern_prob(x2, s2.w, s2.j, pr) -
                           exact_pattern_prob(y2, s2.w, s2.j, pr)));
  {
    PaddedBatch batch(7, 2);
    const auto budget =
        std::min<std::uint64_t>(hoeffding_budget(s2.gap, 7, 2, 1e-2), 60000);
    for (std::uint64_t i = 0; i < budget; ++i)
      batch.add_sampled(x2, sample_kept(2, 7, pr, derive_seed(4141, i)));
    CHECK(pairwise_decide(batch, s2) == 0);
  }
}

TEST_CASE("hoeffding budget") {
  CHECK(hoeffding_budget(1.0, 1, 1, 0.5) == 5);  // ceil(2 ln 8)
  const auto t1 = hoeffding_budget(0.1, 2, 2, 0.01);
  const auto t2 = hoeffding_budget(0.05, 2, 2, 0.01);
  CHECK(t2 >= 4 * t1 - 4);
  CHECK(t2 <= 4 * t1 + 4);
  CHECK(hoeffding_budget(0.1, 2, 2, 1e-6) > hoeffding_budget(0.1, 2, 2, 1e-3));
  CHECK_THROWS_AS(hoeffding_budget(0.0, 2, 2, 0.5), Error);
  CHECK_THROWS_AS(hoeffding_budget(0.5, 2, 2, 1.5), Error);
}

TEST_CASE("pairwise_decide ties and degenerate batches") {
  // Hand-built statistic with the empirical mean exactly between the two
  // expectations: the tie goes to X.
  Statistic st;
  st.w = Pattern::scalar_one();
  st.j.points = {0, 0};
  st.e_x = 0.4;
  st.e_y = 0.6;
  PaddedBatch batch(2, 2);
  Trace t1;
  t1.d = 2;
  t1.n = 2;
  t1.retained = {{0}, {0}};
  t1.entries = {1};
  Trace t0 = t1;
  t0.entries = {0};
  batch.add_trace(t1);
  batch.add_trace(t0);  // empirical mean at cell (0,0) is 1/2
  CHECK(pairwise_decide(batch, st) == 0);

  // Empty batch: the empirical mean is 0, so the nearer expectation wins.
  PaddedBatch empty(2, 2);
  CHECK(pairwise_decide(empty, st) == 0);
  st.e_x = 0.9;
  CHECK(pairwise_decide(empty, st) == 1);
}

TEST_CASE("pairwise_decide meets its Hoeffding guarantee") {
  const ChannelParams pr = ChannelParams::from_q(0.3);
  Hypermatrix x = from_bits(2, 2, 0b1010), y = from_bits(2, 2, 0b0011);
  Statistic st = select_statistic(x, y, pr);
  const auto budget = hoeffding_budget(st.gap, 2, 2, 1e-3);
  int wrong = 0;
  const int reruns = 1000;
  for (int rerun = 0; rerun < reruns; ++rerun) {
    PaddedBatch batch(2, 2);
    for (std::uint64_t i = 0; i < budget; ++i)
      batch.add_trace(sample_trace(x, pr, derive_seed(777 + rerun, i)));
    wrong += pairwise_decide(batch, st) == 0 ? 0 : 1;
  }
  // Error rate <= delta + 3 sigma.
  const double sigma = std::sqrt(1e-3 * (1 - 1e-3) / reruns);
  CHECK(static_cast<double>(wrong) / reruns <= 1e-3 + 3 * sigma);
}

TEST_CASE("exhaustive reconstruction") {
  // q = 0: a single undamaged trace pins the truth exactly.
  const ChannelParams q0 = ChannelParams::from_q(0.0);
  for (std::uint64_t bits = 0; bits < 16; ++bits) {
    Hypermatrix truth = from_bits(2, 2, bits);
    auto traces = sample_many(truth, q0, 1, 50 + bits);
    CHECK(reconstruct_exhaustive(traces, 2, 2, q0) == truth);
  }

  // An explicit singleton candidate list wins regardless of the traces.
  Hypermatrix x = from_bits(2, 2, 0b0110);
  Hypermatrix other = from_bits(2, 2, 0b1001);
  std::vector<Hypermatrix> only{other};
  auto traces = sample_many(x, ChannelParams::from_q(0.5), 8, 99);
  CHECK(reconstruct_exhaustive(traces, 2, 2, ChannelParams::from_q(0.5), {},
                               nullptr, &only) == other);

  // Cap without a candidate list.
  EngineConfig tiny;
  tiny.candidate_cap = 4;
  CHECK_THROWS_AS(
      reconstruct_exhaustive(traces, 2, 2, ChannelParams::from_q(0.5), tiny),
      Error);
}

TEST_CASE("large-shape batches fall back to stored traces") {
  // 81 cells exceeds the bitmask representation; the stored-trace path must
  // reproduce the Monte Carlo oracle's frequencies exactly (same streams).
  const ChannelParams pr = ChannelParams::from_q(0.35);
  Hypermatrix x(2, 9);
  CounterRng rng(99);
  for (std::size_t f = 0; f < x.size(); ++f)
    x.flat_set(f, static_cast<std::uint8_t>(rng.below(2)));
  Pattern w(1, 2, {1, 0});
  ScatterPosition j;
  j.rows = {{1, 4}};
  j.points = {3};
  j.row_axes = {0};
  const std::uint64_t t = 256, seed = 1234;
  PaddedBatch batch(9, 2);
  for (std::uint64_t i = 0; i < t; ++i)
    batch.add_sampled(x, sample_kept(2, 9, pr, derive_seed(seed, i)));
  const auto [mc, se] = mc_pattern_prob(x, w, j, pr, t, seed);
  CHECK(batch.match_freq(w, j) == mc);

  // End-to-end with an explicit candidate pair at the same shape.
  Hypermatrix y = x;
  y.set({4, 4}, y.at({4, 4}) ? 0 : 1);
  std::vector<Hypermatrix> candidates{x, y};
  EngineConfig cfg;
  cfg.l_fixed = 1;
  std::vector<Trace> traces;
  for (std::uint64_t i = 0; i < 400; ++i)
    traces.push_back(sample_trace(x, pr, derive_seed(4321, i)));
  CHECK(reconstruct_exhaustive(traces, 9, 2, pr, cfg, nullptr, &candidates) ==
        x);
}

TEST_CASE("trace complexity experiment") {
  // q = 0: minimal T is 1 and every row is perfect.
  ExperimentReport r0 = trace_complexity_experiment(
      2, 2, ChannelParams::from_q(0.0), 0.99, 8, 123, 4);
  CHECK(r0.minimal_t == 1);
  for (const auto& row : r0.rows) CHECK(row.rate == 1.0);

  // Deterministic given the seed (wall clock excluded from the CSV).
  ExperimentReport a = trace_complexity_experiment(
      2, 2, ChannelParams::from_q(0.3), 0.9, 12, 2024, 32);
  ExperimentReport b = trace_complexity_experiment(
      2, 2, ChannelParams::from_q(0.3), 0.9, 12, 2024, 32);
  CHECK(a.csv() == b.csv());

  // Success rates non-decreasing within 3 sigma of the paired binomials.
  ExperimentReport m = trace_complexity_experiment(
      2, 2, ChannelParams::from_q(0.3), 0.99, 40, 77, 64);
  for (std::size_t i = 1; i < m.rows.size(); ++i) {
    const double prev = m.rows[i - 1].rate, cur = m.rows[i].rate;
    const double sigma = std::sqrt(
        std::max(prev * (1 - prev), cur * (1 - cur)) / m.rows[i].trials);
    CHECK(cur >= prev - 3 * sigma - 1e-12);
  }
}
