#pragma once

// Run configuration and pilot-calibrated constants. Calibration constants
// are never hard-coded in the library: they live in calib.json with a
// provenance field naming the pilot run that produced them.

#include <string>

#include "hmtr/common.hpp"
#include "hmtr/reconstruct.hpp"

namespace hmtr {

struct GridSettings {
  int arc_density = 2048;      // univariate arc searches
  int interval_points = 4096;  // [1-2p, 1] segment grid
  int torus_density = 192;     // two-axis searches (density^2 points)
  int pipeline_density = 128;  // substitution pipeline inner search
  int disk_density = 512;      // disk extension arcs
  double refine_tol = 1e-6;
};

struct Calibration {
  std::string provenance = "uncalibrated";
  double littlewood_c = 0.0;
  double multivariate_c = 0.0;
  double corollary_c = 0.0;
  double decontiguize_c1 = 0.0;
  double decontiguize_c2 = 0.0;
  double two_axis_c = 0.0;
  double disk_c = 0.0;
  double wnorm_c = 0.0;
  std::uint64_t reconstruct_t_n2 = 0;
  std::uint64_t reconstruct_t_n3 = 0;
};

struct Config {
  Limits limits;
  EngineConfig engine;
  GridSettings grids;
  std::string rng = "splitmix64-counter-v1";
  std::string calib_path = "calib/calib.json";
};

Config default_config();
Config load_config(const std::string& path);
std::string config_json(const Config& c);

Calibration load_calibration(const std::string& path);
void save_calibration(const Calibration& c, const std::string& path);
std::string calibration_json(const Calibration& c);

}  // namespace hmtr
