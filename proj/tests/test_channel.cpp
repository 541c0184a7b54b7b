#include <doctest.h>

#include <cmath>

#include "hmtr/channel.hpp"
#include "hmtr/reference.hpp"
#include "hmtr/rng.hpp"

using namespace hmtr;

namespace {

Hypermatrix random_hm(int d, int n, std::uint64_t seed) {
  CounterRng rng(seed);
  Hypermatrix x(d, n);
  for (std::size_t f = 0; f < x.size(); ++f)
    x.flat_set(f, static_cast<std::uint8_t>(rng.below(2)));
  return x;
}

Hypermatrix from_bits(std::initializer_list<int> bits) {
  Hypermatrix x(1, static_cast<int>(bits.size()));
  std::size_t f = 0;
  for (int b : bits) x.flat_set(f++, static_cast<std::uint8_t>(b));
  return x;
}

ScatterPosition cell_at(Index k) {
  ScatterPosition j;
  j.points = std::move(k);
  return j;
}

ScatterPosition tuple1(std::vector<int> t) {
  ScatterPosition j;
  j.rows = {std::move(t)};
  j.row_axes = {0};
  return j;
}

}  // namespace

TEST_CASE("sample_trace endpoints and shape") {
  Hypermatrix x = random_hm(2, 4, 5);
  Trace full = sample_trace(x, ChannelParams::from_q(0.0), 1);
  CHECK(full.shape() == std::vector<int>{4, 4});
  CHECK(pad(full, 2, 4) == x);

  Trace empty = sample_trace(x, ChannelParams::from_q(1.0), 1);
  CHECK(empty.cells() == 0);
  CHECK(pad(empty, 2, 4) == Hypermatrix(2, 4));
}

TEST_CASE("sample_trace retained-count statistics") {
  // Retained rows per trace are Binomial(16, 1/2); the mean over 10^4 seeds
  // must sit inside the 3-sigma band around 8.
  Hypermatrix x(2, 16, Limits{8, 64});
  const ChannelParams pr = ChannelParams::from_q(0.5);
  const int trials = 10000;
  double rows = 0;
  for (int t = 0; t < trials; ++t)
    rows += static_cast<double>(
        sample_trace(x, pr, derive_seed(99, t)).retained[0].size());
  rows /= trials;
  const double sigma_mean = std::sqrt(16 * 0.25 / trials);
  CHECK(std::abs(rows - 8.0) <= 3 * sigma_mean);
}

TEST_CASE("pad pinned cases") {
  // x = (1,1) with only the second bit kept pads to (1,0).
  Trace t;
  t.d = 1;
  t.n = 2;
  t.retained = {{1}};
  t.entries = {1};
  Hypermatrix padded = pad(t, 1, 2);
  CHECK(padded.at({0}) == 1);
  CHECK(padded.at({1}) == 0);

  Trace big;
  big.d = 1;
  big.n = 2;
  big.retained = {{0, 1, 2}};
  big.entries = {1, 1, 1};
  CHECK_THROWS_AS(pad(big, 1, 2), Error);
}

TEST_CASE("TRC round trip and seeded determinism") {
  Hypermatrix x = random_hm(2, 5, 6);
  const ChannelParams pr = ChannelParams::from_q(0.4);
  Trace a = sample_trace(x, pr, 42);
  Trace b = sample_trace(x, pr, 42);
  CHECK(serialize_trc(a) == serialize_trc(b));
  Trace c = sample_trace(x, pr, 43);
  CHECK(a == parse_trc(serialize_trc(a)));
  CHECK(serialize_trc(parse_trc(serialize_trc(c))) == serialize_trc(c));

  CHECK_THROWS_AS(parse_trc("TRC v2\n1 2\n0\n"), Error);
  CHECK_THROWS_AS(parse_trc("TRC v1\n1 2\n2 1 0\n0 0\n"), Error);
}

TEST_CASE("exact oracle pinned values") {
  const double q = 0.3, p = 0.7;
  const ChannelParams pr = ChannelParams::from_q(q);

  // Single bit x = (1): the kept trace pads to (1), the deleted one to (0).
  Hypermatrix one = from_bits({1});
  Pattern w1(1, 1, {1});
  CHECK(exact_pattern_prob(one, w1, tuple1({0}), pr) == doctest::Approx(p).epsilon(1e-12));

  // All-zero source never matches a pattern containing a one.
  Hypermatrix zeros(2, 3);
  Pattern wone(1, 2, {1, 0});
  ScatterPosition j;
  j.rows = {{0, 2}};
  j.points = {1};
  j.row_axes = {0};
  CHECK(exact_pattern_prob(zeros, wone, j, pr) == 0.0);

  // x = (1,1): position 0 of the padding is 1 unless both bits are deleted.
  Hypermatrix two = from_bits({1, 1});
  CHECK(exact_pattern_prob(two, w1, tuple1({0}), pr) ==
        doctest::Approx(1.0 - q * q).epsilon(1e-12));

  // Oversized enumeration is refused.
  Hypermatrix big(2, 13, Limits{8, 64});
  CHECK_THROWS_AS(
      exact_pattern_prob(big, Pattern::scalar_one(), cell_at({0, 0}), pr),
      Error);
}

TEST_CASE("retained-subset probabilities sum to one") {
  for (double q : {0.2, 0.5, 0.8})
    for (int n = 1; n <= 6; ++n) {
      const double p = 1 - q;
      double axis = 0.0;
      for (int m = 0; m <= n; ++m)
        axis += static_cast<double>(binomial(n, m)) * std::pow(p, m) *
                std::pow(q, n - m);
      CHECK(axis == doctest::Approx(1.0).epsilon(1e-12));
    }

  // Channel-facing variant: a surviving position shows exactly one of the
  // 2^{l^r} patterns, so the match probabilities sum to the probability
  // that every probed cell survives.
  Hypermatrix x = random_hm(2, 3, 77);
  const ChannelParams pr = ChannelParams::from_q(0.35);
  ScatterPosition j;
  j.rows = {{0, 2}};
  j.points = {1};
  j.row_axes = {0};
  double total = 0.0;
  for (int bits = 0; bits < 4; ++bits) {
    Pattern w(1, 2, {static_cast<std::uint8_t>(bits & 1),
                     static_cast<std::uint8_t>((bits >> 1) & 1)});
    total += exact_pattern_prob(x, w, j, pr);
  }
  // Axis 0 needs at least 3 kept slices (coordinate 2), axis 1 at least 2.
  auto keep_at_least = [&](int m_min) {
    double acc = 0.0;
    for (int m = m_min; m <= 3; ++m)
      acc += static_cast<double>(binomial(3, m)) * std::pow(pr.p, m) *
             std::pow(pr.q, 3 - m);
    return acc;
  };
  CHECK(total ==
        doctest::Approx(keep_at_least(3) * keep_at_least(2)).epsilon(1e-12));
}

TEST_CASE("exact oracle agrees with the recursive reference") {
  CounterRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng.below(2));
    const int n = 2 + static_cast<int>(rng.below(3));
    Hypermatrix x = random_hm(d, n, 1000 + trial);
    const ChannelParams pr = ChannelParams::from_q(0.25 + 0.1 * rng.below(5));
    const int l = 1 + static_cast<int>(rng.below(2));
    const int r = l <= n ? static_cast<int>(rng.below(d + 1)) : 0;
    PositionSpace space = PositionSpace::canonical(n, d, l, r);
    ScatterPosition j = space.unrank(rng.below(space.count()));
    std::size_t cells = 1;
    for (int i = 0; i < r; ++i) cells *= static_cast<std::size_t>(l);
    std::vector<std::uint8_t> we(cells);
    for (auto& v : we) v = static_cast<std::uint8_t>(rng.below(2));
    Pattern w = r == 0 ? Pattern::scalar_one() : Pattern(r, l, we);
    const double fast = exact_pattern_prob(x, w, j, pr);
    const double ref = reference::exact_pattern_prob(x, w, j, pr);
    CHECK(fast == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("oracle approaches the source indicator as q drops") {
  // Monotone climb toward 1 when the source matches W at the contiguous
  // origin position; plain convergence to the indicator either way.
  CounterRng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(2));
    Hypermatrix x = random_hm(2, n, 2000 + trial);
    const int l = 2;
    Index corner{0, 0};
    ScatterPosition j = contiguous_position(corner, l, 2);
    Pattern w = extract_block(x, corner, l);
    const bool mismatch = trial % 2;
    if (mismatch) w.flat_set(0, w.flat_at(0) ? 0 : 1);
    const double ind = mismatch ? 0.0 : 1.0;
    double prev = 0.0;
    for (double q = 0.5; q >= -1e-9; q -= 0.1) {
      const double e =
          exact_pattern_prob(x, w, j, ChannelParams::from_q(std::max(q, 0.0)));
      if (!mismatch) {
        CHECK(e >= prev - 1e-12);
        prev = e;
      }
    }
    CHECK(exact_pattern_prob(x, w, j, ChannelParams::from_q(0.0)) ==
          doctest::Approx(ind).epsilon(1e-15));
  }
}

TEST_CASE("Monte Carlo estimates track the exact oracle") {
  // |mc - exact| <= 4 stderr in at least 99% of 500 randomized cases.
  CounterRng rng(53);
  int failures = 0;
  for (int case_i = 0; case_i < 500; ++case_i) {
    const int d = 1 + static_cast<int>(rng.below(2));
    const int n = 2 + static_cast<int>(rng.below(3));
    Hypermatrix x = random_hm(d, n, 3000 + case_i);
    const ChannelParams pr = ChannelParams::from_q(0.2 + 0.15 * rng.below(5));
    PositionSpace space = PositionSpace::canonical(n, d, 1, 1);
    ScatterPosition j = space.unrank(rng.below(space.count()));
    Pattern w(1, 1, {static_cast<std::uint8_t>(rng.below(2))});
    const double exact = exact_pattern_prob(x, w, j, pr);
    const auto [mc, se] = mc_pattern_prob(x, w, j, pr, 400, 4000 + case_i);
    // Estimated stderr degenerates at empirical 0 or 1; fall back to the
    // binomial deviation of the true mean there.
    const double floor = std::sqrt(exact * (1.0 - exact) / 400.0);
    if (std::abs(mc - exact) > 4.0 * std::max({se, floor, 1e-12})) ++failures;
  }
  CHECK(failures <= 5);
}

TEST_CASE("Monte Carlo endpoints") {
  Hypermatrix x = from_bits({1, 0, 1});
  Pattern w1(1, 1, {1});
  const auto [one_trial, se1] =
      mc_pattern_prob(x, w1, tuple1({0}), ChannelParams::from_q(0.5), 1, 9);
  CHECK((one_trial == 0.0 || one_trial == 1.0));
  CHECK(se1 == 0.0);

  // q = 0 reduces to the indicator of X itself.
  const auto [det, se0] =
      mc_pattern_prob(x, w1, tuple1({0}), ChannelParams::from_q(0.0), 16, 9);
  CHECK(det == 1.0);
  CHECK(se0 == 0.0);

  const double naive = reference::mc_match_mean(
      x, w1, tuple1({0}), ChannelParams::from_q(0.5), 128, 77);
  const auto [fast, se] =
      mc_pattern_prob(x, w1, tuple1({0}), ChannelParams::from_q(0.5), 128, 77);
  CHECK(fast == doctest::Approx(naive).epsilon(1e-15));
}
