#pragma once

// End-to-end reconstruction: statistic selection through the reduction /
// witness case pipeline, the pairwise mean test with Hoeffding budgets,
// exhaustive tournament reconstruction, and trace-complexity experiments.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hmtr/channel.hpp"
#include "hmtr/common.hpp"
#include "hmtr/hypermatrix.hpp"
#include "hmtr/positions.hpp"
#include "hmtr/reduction.hpp"

namespace hmtr {

struct EngineConfig {
  std::uint64_t enum_cap = 1ull << 24;     // channel oracle enumeration cap
  std::uint64_t position_cap = 200000;     // exhaustive j-search cap
  std::uint64_t subsample = 4096;          // j candidates when above the cap
  std::uint64_t candidate_cap = 1ull << 16;
  std::uint64_t search_seed = 0x5eedf00d;  // subsample stream
  int l_fixed = 0;                         // 0 = per-dimension rule
};

// Pattern side from the per-dimension rule (2n^{1/5}, 4n^{1/7}+1,
// 4n^{1/9}+1, 4n^{3/5}+1 for d = 1, 2, 3, >= 4), rounded up to odd and
// clamped to [1, floor((n-1)/2)] (to 1 when that floor vanishes).
int l_rule(int n, int d);

struct Statistic {
  Pattern w;          // pattern in original axis orientation
  ScatterPosition j;  // original coordinates; row_axes names the tuple axes
  double gap = 0.0;
  double e_x = 0.0;   // oracle expectation under the first argument
  double e_y = 0.0;
  int r = 0;
  int l = 1;
  bool fallback = false;           // produced by the l = 1 scalar rescan
  std::vector<int> lambdas;        // [lambda_1, ..., lambda_d]
  std::vector<AxisTransform> transforms;  // reduction provenance
};

// Best pattern statistic for distinguishing X from Y: reduce, classify,
// build the witness (or the scalar-1 pattern when r = 0), map the pattern
// back to original axes through the recorded transforms, then maximize the
// oracle gap |E_X - E_Y| over scatter positions (seeded subsample above the
// cap). Falls back to the l = 1 scalar scan on a zero gap; a zero gap there
// too is an error.
Statistic select_statistic(const Hypermatrix& x, const Hypermatrix& y,
                           ChannelParams pr, const EngineConfig& cfg = {});

// Smallest T making the union-bound Hoeffding failure probability at most
// delta over all 2^{n^d} candidates: ceil(2 ln(2 * 2^{n^d} / delta) / gap^2).
std::uint64_t hoeffding_budget(double gap, int n, int d, double delta);

// A batch of traces with empirical pattern-match frequencies. Up to 64
// cells the traces live as padded value bitmasks plus per-axis kept counts,
// with per-cell tables backing a single-cell fast path; larger shapes fall
// back to stored traces. Matching follows the surviving-cell reading: a
// pattern cell beyond the trace extent never matches.
class PaddedBatch {
 public:
  PaddedBatch(int n, int d);
  void add_trace(const Trace& t);
  // Same trace, described by the source and its kept-slice lists.
  void add_sampled(const Hypermatrix& x,
                   const std::vector<std::vector<int>>& kept);
  std::size_t size() const { return count_; }
  int n() const { return n_; }
  int d() const { return d_; }

  // Empirical frequency of the W-match at j.
  double match_freq(const Pattern& w, const ScatterPosition& j) const;

 private:
  bool cell_exists(std::size_t trace, const Index& coords) const;
  void build_tables() const;

  int n_, d_;
  std::size_t cells_;
  bool compact_;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> masks_;   // bit f = padded value at flat cell f
  std::vector<std::uint64_t> counts_;  // kept count of axis a in byte a
  std::vector<Trace> raw_;             // fallback beyond 64 cells
  mutable std::vector<double> ones_mean_;    // built on first use
  mutable std::vector<double> exists_mean_;
};

// 0 when the empirical frequency is at least as close to E_X as to E_Y
// (ties go to X), 1 otherwise. stat must come from select_statistic(x, y).
int pairwise_decide(const PaddedBatch& batch, const Statistic& stat);

// Statistic cache keyed by the ordered candidate pair.
using StatCache =
    std::map<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>,
             Statistic>;

// Single-elimination tournament over the candidates (all 2^{n^d} binary
// hypermatrices by default) judged by pairwise_decide on the given traces.
Hypermatrix reconstruct_exhaustive(
    const std::vector<Trace>& traces, int n, int d, ChannelParams pr,
    const EngineConfig& cfg = {}, StatCache* cache = nullptr,
    const std::vector<Hypermatrix>* candidates = nullptr);

// Same tournament on an already-assembled batch.
Hypermatrix reconstruct_from_batch(
    const PaddedBatch& batch, ChannelParams pr, const EngineConfig& cfg = {},
    StatCache* cache = nullptr,
    const std::vector<Hypermatrix>* candidates = nullptr);

struct ExperimentRow {
  std::uint64_t t = 0;
  int trials = 0;
  int successes = 0;
  double rate = 0.0;
};

struct ExperimentReport {
  int n = 0, d = 0;
  double q = 0.0;
  std::uint64_t seed = 0;
  double target = 0.0;
  std::vector<ExperimentRow> rows;
  std::int64_t minimal_t = -1;  // smallest scheduled T reaching the target
  double wall_seconds = 0.0;    // not part of the deterministic serialization

  // Deterministic CSV (one row per T); excludes wall-clock.
  std::string csv() const;
};

// Runs reconstruct_exhaustive over a doubling T schedule on `trials` random
// ground truths (common per-trial trace streams, so schedules are nested).
ExperimentReport trace_complexity_experiment(int n, int d, ChannelParams pr,
                                             double target, int trials,
                                             std::uint64_t seed,
                                             std::uint64_t t_max,
                                             const EngineConfig& cfg = {});

}  // namespace hmtr
