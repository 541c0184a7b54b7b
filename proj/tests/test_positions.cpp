#include <doctest.h>

#include <set>

#include "hmtr/positions.hpp"
#include "hmtr/rng.hpp"

using namespace hmtr;

namespace {

std::vector<int> flatten(const ScatterPosition& k) {
  std::vector<int> v;
  for (const auto& t : k.rows) v.insert(v.end(), t.begin(), t.end());
  v.insert(v.end(), k.points.begin(), k.points.end());
  return v;
}

}  // namespace

TEST_CASE("enumeration counts match the closed form") {
  for (int d = 1; d <= 3; ++d)
    for (int n = 1; n <= 6; ++n)
      for (int l = 1; l <= n; ++l)
        for (int r = 0; r <= d; ++r) {
          PositionSpace space = PositionSpace::canonical(n, d, l, r);
          std::uint64_t want = 1;
          for (int i = 0; i < r; ++i) want *= binomial(n, l);
          for (int i = 0; i < d - r; ++i) want *= n;
          CHECK(space.count() == want);
          CHECK(count_positions(n, d, l, r) == want);

          // Walk the enumeration; verify the count and distinctness.
          std::set<std::vector<int>> seen;
          ScatterPosition k = first_position(space);
          bool more = space.count() > 0;
          std::uint64_t walked = 0;
          while (more && walked <= want) {
            seen.insert(flatten(k));
            ++walked;
            more = advance_position(space, k);
          }
          CHECK(walked == want);
          CHECK(seen.size() == want);
        }
}

TEST_CASE("pinned enumerations") {
  PositionSpace s312 = PositionSpace::canonical(3, 1, 2, 1);
  CHECK(s312.count() == 3);
  ScatterPosition k = first_position(s312);
  CHECK(k.rows[0] == std::vector<int>{0, 1});
  REQUIRE(advance_position(s312, k));
  CHECK(k.rows[0] == std::vector<int>{0, 2});
  REQUIRE(advance_position(s312, k));
  CHECK(k.rows[0] == std::vector<int>{1, 2});
  CHECK_FALSE(advance_position(s312, k));

  CHECK(PositionSpace::canonical(4, 2, 3, 0).count() == 16);
  CHECK(PositionSpace::canonical(5, 2, 5, 2).count() == 1);
}

TEST_CASE("unrank agrees with the walk and is lexicographic") {
  CounterRng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + static_cast<int>(rng.below(3));
    const int n = 2 + static_cast<int>(rng.below(4));
    const int l = 1 + static_cast<int>(rng.below(n));
    const int r = static_cast<int>(rng.below(d + 1));
    PositionSpace space = PositionSpace::canonical(n, d, l, r);
    ScatterPosition k = first_position(space);
    std::vector<int> prev;
    for (std::uint64_t idx = 0; idx < space.count(); ++idx) {
      CHECK(flatten(space.unrank(idx)) == flatten(k));
      const auto cur = flatten(k);
      if (idx > 0) CHECK(prev < cur);
      prev = cur;
      advance_position(space, k);
    }
    CHECK_THROWS_AS(space.unrank(space.count()), Error);
  }
}

TEST_CASE("gather matches the worked subscript example") {
  // d = 2, k = ((1,4,5), 2): the gathered column triple.
  Hypermatrix x(2, 6);
  CounterRng rng(17);
  for (std::size_t f = 0; f < x.size(); ++f)
    x.flat_set(f, static_cast<std::uint8_t>(rng.below(2)));
  ScatterPosition k;
  k.rows = {{1, 4, 5}};
  k.points = {2};
  k.row_axes = {0};
  Pattern g = gather(x, k);
  CHECK(g.rank() == 1);
  CHECK(g.side() == 3);
  CHECK(g.entries() ==
        std::vector<std::uint8_t>{x.at({1, 2}), x.at({4, 2}), x.at({5, 2})});

  // r = 0 gathers the single entry.
  ScatterPosition cell;
  cell.points = {3, 2};
  Pattern one = gather(x, cell);
  CHECK(one.rank() == 0);
  CHECK(one.flat_at(0) == x.at({3, 2}));
}

TEST_CASE("gather at a contiguous position equals extract_block") {
  CounterRng rng(23);
  for (int n = 2; n <= 5; ++n)
    for (int d = 1; d <= 2; ++d)
      for (int l = 1; l <= n; ++l) {
        Hypermatrix x(d, n);
        for (std::size_t f = 0; f < x.size(); ++f)
          x.flat_set(f, static_cast<std::uint8_t>(rng.below(2)));
        // Every corner, exhaustively.
        Index corner(d, 0);
        while (true) {
          bool ok = true;
          for (int i = 0; i < d; ++i) ok &= corner[i] + l <= n;
          if (ok)
            CHECK(gather(x, contiguous_position(corner, l, d)) ==
                  extract_block(x, corner, l));
          int i = d - 1;
          for (; i >= 0; --i) {
            if (++corner[i] < n) break;
            corner[i] = 0;
          }
          if (i < 0) break;
        }
      }
}

TEST_CASE("parameter violations are rejected") {
  CHECK_THROWS_AS(PositionSpace::canonical(3, 2, 4, 1), Error);  // l > n
  CHECK_THROWS_AS(PositionSpace::canonical(3, 2, 2, 3), Error);  // r > d
  CHECK_THROWS_AS(count_positions(3, 2, 0, 1), Error);
}

TEST_CASE("position validation rejects bad shapes") {
  ScatterPosition k;
  k.rows = {{2, 1, 4}};
  k.points = {0};
  k.row_axes = {0};
  CHECK_THROWS_AS(k.validate(6, 2, 3), Error);  // not increasing
  k.rows = {{1, 2, 9}};
  CHECK_THROWS_AS(k.validate(6, 2, 3), Error);  // out of range
  k.rows = {{1, 2, 4}};
  CHECK_NOTHROW(k.validate(6, 2, 3));
}
