#include <doctest.h>
#include <omp.h>

#include <cmath>

#include "hmtr/channel.hpp"
#include "hmtr/genfun.hpp"
#include "hmtr/kernels.hpp"
#include "hmtr/reference.hpp"
#include "hmtr/rng.hpp"

using namespace hmtr;

namespace {

template <typename F>
auto with_threads(int n, F&& fn) {
  const int before = omp_get_max_threads();
  omp_set_num_threads(n);
  auto out = fn();
  omp_set_num_threads(before);
  return out;
}

}  // namespace

TEST_CASE("tree sums agree with the serial reference within tolerance") {
  CounterRng rng(1);
  std::vector<double> xs(100001);
  for (auto& v : xs) v = rng.u01() * 2.0 - 1.0;
  const double tree = tree_map_sum<double>(xs.size(),
                                           [&](std::uint64_t i) { return xs[i]; });
  const double naive = reference::sum(xs);
  CHECK(tree == doctest::Approx(naive).epsilon(1e-12));

  std::vector<Cplx> zs(20001);
  CounterRng rng2(7);
  for (auto& v : zs) v = Cplx(rng2.u01() - 0.5, rng2.u01() - 0.5);
  const Cplx ctree =
      tree_map_sum<Cplx>(zs.size(), [&](std::uint64_t i) { return zs[i]; });
  CHECK(std::abs(ctree - reference::csum(zs)) < 1e-10);
}

TEST_CASE("tree sums are bit-identical across thread counts") {
  CounterRng rng(2);
  std::vector<double> xs(50000);
  for (auto& v : xs) v = (rng.u01() - 0.5) * std::exp(10.0 * rng.u01());
  auto run = [&]() {
    return tree_map_sum<double>(xs.size(),
                                [&](std::uint64_t i) { return xs[i]; });
  };
  const double t1 = with_threads(1, run);
  const double t2 = with_threads(2, run);
  const double t4 = with_threads(4, run);
  CHECK(t1 == t2);
  CHECK(t1 == t4);
}

TEST_CASE("scan max matches the reference and is thread-stable") {
  CounterRng rng(3);
  std::vector<double> xs(30000);
  for (auto& v : xs) v = rng.u01();
  xs[17321] = 2.0;
  xs[29000] = 2.0;  // duplicate maximum; smallest index must win
  auto value_at = [&](std::uint64_t i) { return xs[i]; };
  const auto [ref_v, ref_i] = reference::scan_max(xs.size(), value_at);
  auto run = [&]() { return parallel_scan_max(xs.size(), value_at); };
  const ScanHit h1 = with_threads(1, run);
  const ScanHit h4 = with_threads(4, run);
  CHECK(h1.value == ref_v);
  CHECK(h1.index == ref_i);
  CHECK(h1.index == 17321);
  CHECK(h4.value == h1.value);
  CHECK(h4.index == h1.index);
}

TEST_CASE("oracle and genfun evaluations are thread-stable") {
  CounterRng rng(4);
  Hypermatrix x(2, 4), y(2, 4);
  for (std::size_t f = 0; f < x.size(); ++f) {
    x.flat_set(f, static_cast<std::uint8_t>(rng.below(2)));
    y.flat_set(f, static_cast<std::uint8_t>(rng.below(2)));
  }
  Pattern w(1, 2, {1, 0});
  ScatterPosition j;
  j.rows = {{0, 2}};
  j.points = {1};
  j.row_axes = {0};
  const ChannelParams pr = ChannelParams::from_q(0.45);
  auto oracle = [&]() { return exact_pattern_prob(x, w, j, pr); };
  CHECK(with_threads(1, oracle) == with_threads(4, oracle));

  ComplexPoint z;
  z.rows = {{std::polar(1.0, 0.3), std::polar(1.0, -0.9)}};
  z.points = {std::polar(1.0, 1.7)};
  auto src = GenfunSource::pair(x, y);
  auto gf = [&]() { return eval_genfun(src, w, z); };
  CHECK(with_threads(1, gf) == with_threads(4, gf));
}

TEST_CASE("pairwise fold shapes") {
  std::vector<double> one{3.5};
  CHECK(pairwise_fold(one) == 3.5);
  std::vector<double> empty;
  CHECK(pairwise_fold(empty) == 0.0);
  std::vector<double> five{1, 2, 3, 4, 5};
  CHECK(pairwise_fold(five) == 15.0);
}
