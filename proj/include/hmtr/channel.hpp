#pragma once

// The slice-deletion channel: trace sampling, zero-padding, the TRC v1 text
// format, and exact / Monte Carlo oracles for pattern-match statistics
// E[1_{trace_j = W}].

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hmtr/common.hpp"
#include "hmtr/hypermatrix.hpp"
#include "hmtr/positions.hpp"

namespace hmtr {

struct ChannelParams {
  double q = 0.5;  // per-slice deletion probability
  double p = 0.5;  // retention probability, p = 1 - q exactly

  static ChannelParams from_q(double q) {
    require(q >= 0.0 && q <= 1.0, "deletion probability outside [0, 1]");
    return ChannelParams{q, 1.0 - q};
  }
};

// A sampled trace: per-axis kept slice indices (ascending) and the restricted
// sub-hypermatrix, row-major over the kept shape.
struct Trace {
  int d = 0;
  int n = 0;  // source side
  std::vector<std::vector<int>> retained;
  std::vector<std::uint8_t> entries;

  std::vector<int> shape() const;
  std::size_t cells() const;
  bool operator==(const Trace&) const = default;
};

// Deletes each of the d*n slices independently with probability q, axes in
// order, indices ascending, one uniform draw per slice (counter-based on
// seed). q in {0, 1} degenerates to the identity / empty channel.
Trace sample_trace(const Hypermatrix& x, ChannelParams pr, std::uint64_t seed);

// Just the kept-slice index lists of the same draw (no entry extraction);
// sample_kept(d, n, pr, seed) agrees with sample_trace(x, pr, seed).retained.
std::vector<std::vector<int>> sample_kept(int d, int n, ChannelParams pr,
                                          std::uint64_t seed);

// Zero-pads the trace to the full d x n shape, trace at the all-low corner.
Hypermatrix pad(const Trace& t, int d, int n);

// TRC v1: magic line, source shape, per-axis retained lists (count then
// indices), then the kept entries one last-axis row per line.
std::string serialize_trc(const Trace& t);
Trace parse_trc(const std::string& text, const Limits& lim = default_limits());

// Whether the trace matches W at scatter position j. Every pattern cell
// must land on a kept slice on every axis; the zero padding beyond the
// trace never matches (this is the reading under which the W-generating
// identity holds, and it coincides with the padded reading whenever the
// probed entry of W is 1).
bool trace_match(const Hypermatrix& x,
                 const std::vector<std::vector<int>>& retained,
                 const Pattern& w, const ScatterPosition& j);

// Exact E[1_{trace of X matches W at j}] by enumerating all 2^{dn}
// retained-subset combinations; the probability of keeping m slices on an
// axis is p^m q^{n-m}. Throws when 2^{dn} exceeds enum_cap.
double exact_pattern_prob(const Hypermatrix& x, const Pattern& w,
                          const ScatterPosition& j, ChannelParams pr,
                          std::uint64_t enum_cap = (1ull << 24));

// Monte Carlo counterpart over T independent traces (per-trial streams
// derived from seed); returns (estimate, stderr) with
// stderr = sqrt(m(1-m)/T).
std::pair<double, double> mc_pattern_prob(const Hypermatrix& x,
                                          const Pattern& w,
                                          const ScatterPosition& j,
                                          ChannelParams pr, std::uint64_t t,
                                          std::uint64_t seed);

}  // namespace hmtr
