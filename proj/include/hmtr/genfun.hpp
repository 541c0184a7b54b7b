#pragma once

// W-generating functions: odot-powers, brute-force evaluation over scatter
// positions, contiguous generating functions, numeric verification of the
// W-generating identity, and the axis-by-axis de-contiguization search.

#include <complex>
#include <cstdint>
#include <vector>

#include "hmtr/channel.hpp"
#include "hmtr/common.hpp"
#include "hmtr/hypermatrix.hpp"
#include "hmtr/positions.hpp"

namespace hmtr {

using Cplx = std::complex<double>;

// Integer power by square-and-multiply; exact operation order, e >= 0.
Cplx cpow_int(Cplx z, long long e);

// A generating-function source: binary X alone (coefficients 1_{X_k = W}),
// or a pair (X, Y) giving signed coefficients 1_{X_k=W} - 1_{Y_k=W}. A
// signed hypermatrix A enters as its positive/negative part pair, which for
// the scalar-one pattern reproduces the plain generating function of A.
struct GenfunSource {
  const Hypermatrix* x = nullptr;
  const Hypermatrix* y = nullptr;

  static GenfunSource unsigned_of(const Hypermatrix& x) { return {&x, nullptr}; }
  static GenfunSource pair(const Hypermatrix& x, const Hypermatrix& y) {
    return {&x, &y};
  }
};

// Holds the part pair of a signed source so it can be passed as GenfunSource.
struct SignedSource {
  Hypermatrix pos, neg;
  explicit SignedSource(const SignedHypermatrix& a)
      : pos(a.positive_part()), neg(a.negative_part()) {}
  GenfunSource source() const { return GenfunSource::pair(pos, neg); }
};

// Signed pattern-match coefficient of position k.
int genfun_coeff(const GenfunSource& src, const Pattern& w,
                 const ScatterPosition& k);

// z^{odot k} = z_0^{k_0} prod_i z_i^{k_i - k_{i-1} - 1}; k strictly
// increasing.
Cplx odot_power(const std::vector<Cplx>& z, const std::vector<int>& k);

// Exact sum over I(n^{x d}, l^{x r}); throws when the position count exceeds
// eval_cap.
Cplx eval_genfun(const GenfunSource& src, const Pattern& w,
                 const ComplexPoint& z, std::uint64_t eval_cap = 10000000);

// Partial sum of the (d+1)-dimensional W-generating function over positions
// whose last scalar coordinate is fixed to `slice`, without the z factor of
// that axis. Used by the reduction recursion check.
Cplx eval_genfun_sliced(const GenfunSource& src, const Pattern& w, int slice,
                        const ComplexPoint& z_first,
                        std::uint64_t eval_cap = 10000000);

// W-contiguous generating function of a rank-r source at r scalar variables;
// corners whose block exceeds bounds contribute nothing.
Cplx eval_contiguous(const GenfunSource& src, const Pattern& w,
                     const std::vector<Cplx>& z);

// |LHS - RHS| of the W-generating identity at z (w = (z - q)/p
// componentwise): LHS sums E[1_{trace_j = W}] (differenced over the pair when
// present) against w-monomials via the exact channel oracle; RHS is
// p^{rl + d - r} g(z).
double verify_identity(const GenfunSource& src, const Pattern& w,
                       const ComplexPoint& z, ChannelParams pr,
                       std::uint64_t enum_cap = (1ull << 24),
                       std::uint64_t eval_cap = 10000000);

struct DecontiguizeResult {
  ComplexPoint z;        // z_{i0} as given, z_{ij} = chosen tied value
  Cplx g_value;          // g_r at z
  double value;          // |g_r|
  double h_value;        // |h| at the fixed scalars (the starting value)
  std::vector<double> tied;  // chosen tied value per axis
};

// Removes the contiguity constraint one axis at a time (last axis first),
// tying the l-1 free coordinates of the current axis to one real variable
// and maximizing over [1-2p, 1] by dense grid plus golden-section
// refinement. The partial sum at tied value 0 must reproduce the previous
// step's value exactly; that is asserted at every step.
DecontiguizeResult decontiguize(const GenfunSource& src, const Pattern& w,
                                const std::vector<Cplx>& z_fixed, double p,
                                int grid_points = 4096,
                                double refine_tol = 1e-6,
                                std::uint64_t eval_cap = 10000000);

}  // namespace hmtr
