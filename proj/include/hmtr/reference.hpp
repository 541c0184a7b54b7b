#pragma once

// Plain serial reference implementations. These are the obviously-correct
// counterparts of the OpenMP kernels and brute-force evaluators; tests
// compare the fast paths against them and the benchmark target measures the
// gap. Nothing here is used on hot paths.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "hmtr/channel.hpp"
#include "hmtr/genfun.hpp"
#include "hmtr/hypermatrix.hpp"
#include "hmtr/positions.hpp"

namespace hmtr::reference {

double sum(std::span<const double> xs);
Cplx csum(std::span<const Cplx> xs);

// Serial left-to-right argmax (first maximum wins).
std::pair<double, std::uint64_t> scan_max(std::uint64_t count,
                                          const std::function<double(std::uint64_t)>& f);

// Serial arc scan matching max_modulus_univariate's grid.
double arc_scan(std::span<const Cplx> coeffs, long long m0, double L,
                double rho, int density);

// W-generating function by straightforward nested enumeration (recursion
// over axes, no unranking), accumulating left to right.
Cplx eval_genfun(const GenfunSource& src, const Pattern& w,
                 const ComplexPoint& z);

// Plain multivariate generating polynomial sum A_k z^k via per-axis Horner.
Cplx horner_poly(const SignedHypermatrix& a, std::span<const Cplx> z);

// Channel oracle by recursive per-axis subset enumeration over materialized
// padded traces.
double exact_pattern_prob(const Hypermatrix& x, const Pattern& w,
                          const ScatterPosition& j, ChannelParams pr);

// Monte Carlo mean by a plain serial loop.
double mc_match_mean(const Hypermatrix& x, const Pattern& w,
                     const ScatterPosition& j, ChannelParams pr,
                     std::uint64_t trials, std::uint64_t seed);

}  // namespace hmtr::reference
