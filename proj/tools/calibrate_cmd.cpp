// The calibrate subcommand: run the pilot suites and freeze the constants.

#include <filesystem>
#include <iostream>
#include <sstream>

#include "hmtr/config.hpp"
#include "hmtr/pilot.hpp"

int run_calibrate(const std::string& out_path, std::uint64_t seed, double q) {
  using namespace hmtr;
  GridSettings grids;
  Calibration cal = pilot::run_calibration(seed, q, grids, &std::cout);
  std::ostringstream prov;
  prov << "pilot run: hmtr 0.1.0, seed " << seed << ", q " << q
       << ", splitmix64-counter-v1";
  cal.provenance = prov.str();
  if (std::filesystem::path(out_path).has_parent_path())
    std::filesystem::create_directories(
        std::filesystem::path(out_path).parent_path());
  save_calibration(cal, out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}
