// Serial-reference vs OpenMP-kernel timing comparison. Not a test; run it
// by hand to see what the parallel paths buy on a given machine.

#include <omp.h>

#include <cstdio>
#include <functional>

#include "hmtr/channel.hpp"
#include "hmtr/genfun.hpp"
#include "hmtr/kernels.hpp"
#include "hmtr/littlewood.hpp"
#include "hmtr/reference.hpp"
#include "hmtr/rng.hpp"

using namespace hmtr;

namespace {

double time_ms(const std::function<double()>& fn, int reps) {
  double sink = 0.0;
  const double t0 = omp_get_wtime();
  for (int i = 0; i < reps; ++i) sink += fn();
  const double ms = (omp_get_wtime() - t0) * 1000.0 / reps;
  std::printf("%*s", 0, sink == -1.0 ? "!" : "");  // keep the result live
  return ms;
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.3f ms %10.3f ms   x%.2f\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-28s %13s %13s\n", "kernel", "serial", "openmp");

  {
    CounterRng rng(1);
    std::vector<double> xs(4000000);
    for (auto& v : xs) v = rng.u01() - 0.5;
    row("sum 4e6",
        time_ms([&] { return reference::sum(xs); }, 5),
        time_ms(
            [&] {
              return tree_map_sum<double>(
                  xs.size(), [&](std::uint64_t i) { return xs[i]; });
            },
            5));
  }

  {
    CounterRng rng(2);
    std::vector<Cplx> coeffs(4097);
    for (auto& v : coeffs) v = Cplx(rng.below(2) ? 1.0 : -1.0, 0.0);
    row("arc scan deg 4096, L = 8",
        time_ms([&] { return reference::arc_scan(coeffs, 0, 8.0, 1.0, 2048); },
                3),
        time_ms(
            [&] {
              return max_modulus_univariate(coeffs, 0, 8.0, 1.0, 2048).value;
            },
            3));
  }

  {
    CounterRng rng(3);
    Hypermatrix x(2, 10, Limits{8, 64});
    for (std::size_t f = 0; f < x.size(); ++f)
      x.flat_set(f, static_cast<std::uint8_t>(rng.below(2)));
    Pattern w(1, 2, {1, 0});
    ScatterPosition j;
    j.rows = {{0, 5}};
    j.points = {3};
    j.row_axes = {0};
    const ChannelParams pr = ChannelParams::from_q(0.4);
    row("oracle 2^20 combos",
        time_ms([&] { return reference::exact_pattern_prob(x, w, j, pr); }, 2),
        time_ms([&] { return exact_pattern_prob(x, w, j, pr, 1ull << 22); },
                2));
  }

  {
    CounterRng rng(4);
    Hypermatrix x(2, 12, Limits{8, 64});
    for (std::size_t f = 0; f < x.size(); ++f)
      x.flat_set(f, static_cast<std::uint8_t>(rng.below(2)));
    Pattern w(1, 3, {1, 0, 1});
    ScatterPosition j;
    j.rows = {{0, 5, 9}};
    j.points = {3};
    j.row_axes = {0};
    const ChannelParams pr = ChannelParams::from_q(0.4);
    row("mc oracle 2e5 trials",
        time_ms(
            [&] { return reference::mc_match_mean(x, w, j, pr, 200000, 9); },
            2),
        time_ms(
            [&] { return mc_pattern_prob(x, w, j, pr, 200000, 9).first; }, 2));
  }

  return 0;
}
