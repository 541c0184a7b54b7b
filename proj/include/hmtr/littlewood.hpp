#pragma once

// Numeric realization of the polynomial lower-bound devices: arc searches
// under the maximum-modulus arguments, the w-norm facts, primitive lattice
// directions and tangent facets, the lattice substitution pipeline for
// multivariate bounds, and the two-axis / disk searches used by the matrix
// and cube case analyses.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hmtr/common.hpp"
#include "hmtr/genfun.hpp"
#include "hmtr/hypermatrix.hpp"

namespace hmtr {

// gamma(L) = {e^{i theta}: |theta| <= pi/L}, optionally scaled by rho.
struct ArcSpec {
  double L = 1.0;
  double rho = 1.0;
  int density = 2048;  // grid points per unit of L (point count = density*L)

  void validate() const;
};

// rho = 1 - 7/(p L^2), clamped at 0 for tiny L.
double arc_rho(double p, double L);

struct LiftResult {
  Cplx w;
  double ell;  // max(|w|, 1)
};

// w = (z - q)/p.
LiftResult lift_w(Cplx z, double p, double q);

// Product of max(|.|, 1) over all components.
double ell_product(const ComplexPoint& w);

// lift_w plus the guarantee check: for z in rho*gamma(L) with L >= 4/p and
// rho = 1 - 7/(p L^2), |w| <= 1 must hold; throws otherwise.
LiftResult lift_w_on_arc(Cplx z, double p, double q, double L);

struct BoundWitness {
  std::vector<Cplx> point;  // univariate searches: {z}; pipelines: z_1..z_d
  double theta = 0.0;       // winning angle of the innermost arc search
  double value = 0.0;
  double budget = 0.0;  // floor the value is compared against (0 = none)
  double calib = 0.0;   // constant used in the floor
};

// Dense search of |z^{m0} (c_0 + c_1 z + ...)| over rho*gamma(L)
// (ceil(density*L) points uniform in theta, golden-section refinement).
BoundWitness max_modulus_univariate(std::span<const Cplx> coeffs,
                                    long long m0, double L, double rho,
                                    int density = 2048,
                                    double refine_tol = 1e-6);
BoundWitness max_modulus_univariate(std::span<const Cplx> coeffs,
                                    long long m0, const ArcSpec& arc,
                                    double refine_tol = 1e-6);

// The Littlewood special case: L = ceil(m^{1/3}), rho = 1 - 7/(p L^2) for
// m = degree; budget = exp(-calib_c * m^{1/3}).
BoundWitness littlewood_search(std::span<const Cplx> coeffs, double p,
                               double calib_c, int density = 2048,
                               double refine_tol = 1e-6);

// Integer direction vector; the enumerated ones are primitive (component
// gcd 1) with canonical sign (first nonzero positive) and norm at most R.
using LatticeDirection = std::vector<int>;
bool is_primitive_direction(const LatticeDirection& b, double r_cap);

// All primitive canonical directions of norm <= R, axis-first order
// ((1,0,...) precedes (0,1,...)).
std::vector<LatticeDirection> primitive_vectors(double R, int d,
                                                std::uint64_t cap = 4000000);

struct FacetResult {
  LatticeDirection b;            // accepted direction (either sign)
  long long m0 = 0;              // min b.k over the support
  std::vector<Index> contacts;   // argmin points, positive class first
  int positive_contacts = 0;
  int negative_contacts = 0;
};

// First direction from +-N(R), by increasing norm then lexicographic order
// (+b before -b), whose minimal hyperplane touches at most one point per
// sign class; max_total further restricts the total contact count (the
// mu = 0 path needs a single contact). Throws when none is admissible.
FacetResult tangent_facet(const std::vector<Index>& h1,
                          const std::vector<Index>& h2, double R,
                          int max_per_class = 1, int max_total = 2,
                          std::uint64_t cap = 4000000);

// Exponent-accumulated substitution z_i = u^{b_i} (times v on v_axis):
// terms of hbar(u) = sum_k c_k v^{k_{v_axis}} u^{b.k}.
struct SubstitutedPoly {
  std::vector<std::pair<long long, Cplx>> terms;  // ascending exponent
  long long min_exp = 0;  // min b.k over the support (before cancellation)
  Cplx c_min;             // accumulated coefficient at min_exp (C_v)
};

SubstitutedPoly substitute(const SignedHypermatrix& coeffs,
                           const LatticeDirection& b, Cplx v, int v_axis);

// Direct evaluation of sum_k c_k z_1^{k_1}...z_d^{k_d} in support scan order.
Cplx eval_signed_poly(const SignedHypermatrix& coeffs,
                      std::span<const Cplx> z);

struct PipelineConfig {
  int density = 128;
  double refine_tol = 1e-6;
  std::uint64_t lattice_cap = 4000000;
};

// The lattice substitution pipeline for a nonzero n^mu-sparse {0,+-1}
// polynomial: tangent facet at R = ceil(d n^{1-mu}), root-of-unity weight
// v = exp(i pi / (2 n^Delta)) on the axis separating the two contacts,
// univariate arc search at L' = ceil(2 d L n^{1-mu}), then the map back
// z_i = u^{b_i} (v on the weighted axis) with an exact arc-membership check.
// budget = exp(-calib_c * Delta * L * n^{1-mu} * log n).
BoundWitness multivariate_bound(const SignedHypermatrix& coeffs, double mu,
                                double L, double delta, double calib_c,
                                const PipelineConfig& cfg = {});

// The mu = 0 specialization: R = d*n, no v factor, facets restricted to a
// single contact; budget = exp(-calib_c * L * n * log n).
BoundWitness corollary_bound(const SignedHypermatrix& coeffs, double L,
                             double calib_c, const PipelineConfig& cfg = {});

struct TwoAxisResult {
  Cplx z2, z3;
  double value = 0.0;
};

// Dense density^2 search of |g| over gamma(L) x gamma(L) with alternating
// per-axis golden refinement.
TwoAxisResult two_axis_arc_search(
    const std::function<Cplx(Cplx, Cplx)>& g, double L, int density = 192,
    double refine_tol = 1e-6);

struct DiskSearchResult {
  Cplx w;
  double value = 0.0;
};

// Search of |g(p w + q)| over the closed unit w-disk via the arc family
// rho(L) gamma(L), L doubling from 1; w = 0 and w = 1 are always probed
// (w = 0 first, so constants resolve there).
DiskSearchResult disk_extension_search(const std::function<Cplx(Cplx)>& g,
                                       double p, double q, int density = 512,
                                       int max_l = 1024);

}  // namespace hmtr
