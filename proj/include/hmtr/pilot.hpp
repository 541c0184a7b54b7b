#pragma once

// Pilot-suite instance generators and the measurements behind the
// calibration constants. The calibrate command runs these on a pilot seed
// and freezes the constants into calib.json; the acceptance suite re-runs
// the same measurements on disjoint seeds against the frozen floors.

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "hmtr/config.hpp"
#include "hmtr/genfun.hpp"
#include "hmtr/hypermatrix.hpp"
#include "hmtr/littlewood.hpp"

namespace hmtr::pilot {

// Random +-1 coefficient vector of the given degree.
std::vector<Cplx> random_pm1_poly(int degree, std::uint64_t seed);

// Random {0,+-1} array supported on a coarse grid of the given spacing, so
// every equal-sign pair separates by at least `spacing` in some coordinate.
SignedHypermatrix random_sparse_signed(int d, int n, int spacing,
                                       std::uint64_t seed);

// Random binary pair whose difference is confined to [l, n-1-l]^r (the
// centered witness block always fits), difference guaranteed nonzero.
std::pair<Hypermatrix, Hypermatrix> random_margin_pair(int n, int r, int l,
                                                       std::uint64_t seed);

// One cube-case instance: a d = 3 pair differing only in the deep interior,
// its r = 1 witness, the de-contiguized z_1 tuple, |g_1| there, and the
// two-axis search value at the collapsed coefficients.
struct CubeCaseResult {
  double g1 = 0.0;        // |g_1(z_1)|
  double value = 0.0;     // max |g(z_1, z_2, z_3)| found on gamma(L)^2
  double log_m = 0.0;     // log(n^2 C(n, l)), the coefficient-mass scale
  double l_arc = 0.0;
};
CubeCaseResult cube_case(int n, int l, double arc_l, double q,
                         std::uint64_t seed, const GridSettings& grids);

// Measured exponent ratios; each is the quantity the matching floor
// constant must dominate.
double littlewood_ratio(const std::vector<Cplx>& coeffs, double p,
                        const GridSettings& grids);
double multivariate_ratio(const SignedHypermatrix& coeffs, double mu,
                          double arc_l, double delta,
                          const GridSettings& grids);
double corollary_ratio(const SignedHypermatrix& coeffs, double arc_l,
                       const GridSettings& grids);
// Returns (ratio, value, h): the decontiguize run at a seeded instance.
struct DecontigMeasure {
  double value = 0.0;
  double h = 0.0;
  int r = 0;
  int l = 0;
  std::uint64_t choose = 0;  // C(n, l)
};
DecontigMeasure decontiguize_measure(int n, int r, int l, double q,
                                     std::uint64_t seed,
                                     const GridSettings& grids);
double disk_ratio(const std::vector<Cplx>& coeffs, double p,
                  const GridSettings& grids);

// Largest L^2 log ell(w) over a (L, theta) grid on gamma(L); the measured
// constant of the w-norm growth fact.
double wnorm_constant(double p, int l_points, int theta_points);

// Minimal pilot T for the two desk-scale reconstruction suites.
std::uint64_t pilot_reconstruct_t(int n, int d, double q, int trials,
                                  double target, std::uint64_t t_max,
                                  std::uint64_t seed);

// The full pilot run.
Calibration run_calibration(std::uint64_t seed, double q,
                            const GridSettings& grids, std::ostream* log);

}  // namespace hmtr::pilot
