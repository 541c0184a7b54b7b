#pragma once

// Dimension reduction A = A^d -> A^{d-1} -> ... -> A^0 = +-1 with its
// lambda sequence, the (lambda_1, ..., lambda_d) classification, tangent
// points, witness construction with certificates, and the generating-function
// recursion check.

#include <cstdint>
#include <utility>
#include <vector>

#include "hmtr/common.hpp"
#include "hmtr/genfun.hpp"
#include "hmtr/hypermatrix.hpp"

namespace hmtr {

// Where an axis of a chain element came from.
struct AxisBinding {
  int orig_axis = 0;
  bool reversed = false;
};

// An axis consumed by slicing, with the slice coordinate mapped back to the
// original orientation.
struct SlicedAxis {
  int orig_axis = 0;
  int orig_index = 0;
};

struct ReductionResult {
  int d = 0;
  int n = 0;
  // chain[i] = A^i in the orientation it is sliced in (post-transform);
  // chain[0] is the terminal +-1 scalar.
  std::vector<SignedHypermatrix> chain;
  // lambdas[i] = lambda_i and transforms[i] = per-step transform, 1-based;
  // slot 0 is unused padding.
  std::vector<int> lambdas;
  std::vector<AxisTransform> transforms;
  std::vector<int> slice_indices;  // coordinate sliced from chain[i] (= lambda_i)
  // frame[i]: original-axis bindings of chain[i]'s axes (size i).
  std::vector<std::vector<AxisBinding>> frame;
  // Axes consumed so far, in slicing order (step d first).
  std::vector<SlicedAxis> sliced;

  int lambda(int i) const { return lambdas[i]; }
  // [lambda_1, ..., lambda_d] (non-increasing).
  std::vector<int> lambdas_desc() const;
  // Apply the recorded transforms and slices to a binary hypermatrix of the
  // original shape, producing its chain-frame restriction of dimension i.
  Hypermatrix restrict_binary(const Hypermatrix& m, int i) const;
};

// Remove the thinnest all-zero margin one dimension at a time. At each step
// the margin thickness lambda_i is the least boundary distance over nonzero
// entries; the realizing axis is permuted last and reversed if the margin
// sits on the high side (ties: lowest original axis first, low side before
// high), then the slice at lambda_i becomes the next element.
ReductionResult reduce(const SignedHypermatrix& a);

// Largest r with lambda_r >= l (0 when lambda_1 < l); lambdas given as
// [lambda_1, ..., lambda_d].
int classify(const std::vector<int>& lambdas_desc, int l);

// Point of H strictly minimal for the all-ones functional with infinitesimal
// lexicographic tie-break, plus the functional's integer part.
std::pair<Index, std::vector<int>> find_tangent_point(
    const std::vector<Index>& h);

struct Witness {
  Pattern w;
  Index center;               // tangent point j
  int s = 0;                  // floor((l-1)/4)
  std::vector<int> direction;  // tangent functional
  int chosen_from = 1;        // 1 = block of Xr, 2 = block of Yr
  // Certificate data: contiguous generating-function coefficients and the
  // checks run on them.
  SignedHypermatrix h_coeffs;
  bool aperiodic = false;
  bool h_nonzero = false;
  int h_sparsity = 0;
};

// Centered l-block witness at the tangent point of supp(Xr - Yr), taking
// whichever of the two blocks is floor((l-1)/4)-aperiodic (the X block when
// both are). Certificate failures throw with a reproduction dump; they
// cannot occur when the margin precondition lambda_r >= l holds.
Witness construct_witness(const Hypermatrix& xr, const Hypermatrix& yr, int l);

// Max over chain levels i in [rank(W), d-1] and sampled points of
// | (coefficient of z_{i+1}^{lambda_{i+1}} in g_{i+1}) - g_i |, where g_i is
// the W-generating function of the slice at lambda_{i+1}. Sources are the
// positive/negative part pairs of the chain elements.
double genfun_recursion_check(const ReductionResult& rr, const Pattern& w,
                              int samples, std::uint64_t seed,
                              std::uint64_t eval_cap = 10000000);

// Slice fixing the last axis at the given coordinate (dimension drops by 1).
SignedHypermatrix slice_last(const SignedHypermatrix& m, int coord);
Hypermatrix slice_last(const Hypermatrix& m, int coord);

}  // namespace hmtr
