#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hmtr/config.hpp"
#include "hmtr/pilot.hpp"

using namespace hmtr;

namespace {

std::string temp_path(const char* name) {
  return std::string("config_test_") + name + ".json";
}

}  // namespace

TEST_CASE("config round trip") {
  Config c = default_config();
  c.engine.position_cap = 123;
  c.grids.arc_density = 512;
  const std::string path = temp_path("cfg");
  std::ofstream(path) << config_json(c);
  Config got = load_config(path);
  CHECK(got.engine.position_cap == 123);
  CHECK(got.grids.arc_density == 512);
  CHECK(got.rng == "splitmix64-counter-v1");
  std::remove(path.c_str());

  const std::string bad = temp_path("bad");
  std::ofstream(bad) << "{\"rng\": \"mt19937\"}";
  CHECK_THROWS_AS(load_config(bad), Error);
  std::remove(bad.c_str());
}

TEST_CASE("calibration round trip keeps provenance") {
  Calibration cal;
  cal.provenance = "test pilot";
  cal.littlewood_c = 0.25;
  cal.reconstruct_t_n3 = 4096;
  const std::string path = temp_path("cal");
  save_calibration(cal, path);
  Calibration got = load_calibration(path);
  CHECK(got.provenance == "test pilot");
  CHECK(got.littlewood_c == 0.25);
  CHECK(got.reconstruct_t_n3 == 4096);
  std::remove(path.c_str());
}

TEST_CASE("pilot generators meet their contracts") {
  // Coarse-grid supports are spacing-sparse.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SignedHypermatrix a = pilot::random_sparse_signed(2, 32, 9, seed);
    CHECK(!a.is_zero());
    CHECK(sparsity_index(a) >= 9);
  }
  // Margin pairs differ and keep the difference away from the boundary.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto [x, y] = pilot::random_margin_pair(16, 2, 5, seed);
    const SignedHypermatrix d = diff(x, y);
    CHECK(!d.is_zero());
    for (const Index& k : d.support())
      for (int v : k) {
        CHECK(v >= 5);
        CHECK(v <= 10);
      }
  }
}
