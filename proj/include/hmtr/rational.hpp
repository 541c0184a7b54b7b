#pragma once

// Exact-arithmetic twins of the channel oracle and identity check, for
// rational q and rational evaluation points (identity residuals come out
// exactly zero instead of within floating tolerance).

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "hmtr/channel.hpp"
#include "hmtr/hypermatrix.hpp"
#include "hmtr/positions.hpp"
#include "hmtr/rng.hpp"

namespace hmtr {

using Rat = boost::multiprecision::cpp_rational;

struct CRat {
  Rat re = 0, im = 0;

  CRat() = default;
  CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  explicit CRat(int r) : re(r), im(0) {}

  CRat operator+(const CRat& o) const { return {re + o.re, im + o.im}; }
  CRat operator-(const CRat& o) const { return {re - o.re, im - o.im}; }
  CRat operator*(const CRat& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  CRat operator*(const Rat& s) const { return {re * s, im * s}; }
  bool is_zero() const { return re == 0 && im == 0; }
  bool operator==(const CRat&) const = default;
};

CRat cpow_rat(CRat z, long long e);
double to_double(const Rat& r);
double abs_approx(const CRat& z);

// Rational evaluation point mirroring ComplexPoint.
struct RationalPoint {
  std::vector<std::vector<CRat>> rows;
  std::vector<CRat> points;
  int rank() const { return static_cast<int>(rows.size()); }
  int dim() const { return rank() + static_cast<int>(points.size()); }
};

// Exact E[1_{padded trace matches W at j}] with rational deletion
// probability.
Rat exact_pattern_prob_rational(const Hypermatrix& x, const Pattern& w,
                                const ScatterPosition& j, const Rat& q,
                                std::uint64_t enum_cap = (1ull << 24));

// Exact LHS - RHS of the W-generating identity. Zero iff the identity holds
// at this point under this implementation's conventions.
CRat identity_residual_rational(const Hypermatrix& x, const Hypermatrix* y,
                                const Pattern& w, const RationalPoint& z,
                                const Rat& q,
                                std::uint64_t enum_cap = (1ull << 24));

// Pythagorean point on the unit circle (|z| = 1 exactly), seeded choice of
// the generating pair and quadrant.
CRat rational_unit_point(CounterRng& rng);

}  // namespace hmtr
