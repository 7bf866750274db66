#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ringmix/kernel.hpp"

namespace ringmix {

// Per-trajectory record of the walk run until the net cycle displacement
// beta first reaches L.
struct TrackStats {
  int64_t tau = 0;            // step count at which beta first hits L
  int64_t L = 0;
  int64_t max_backtrack = 0;  // max drawdown of beta below its running max
  std::vector<int64_t> n_g, n_j;  // per-hub decision counts
  std::vector<int64_t> y;     // per-edge net traffic, n_j[lo] - n_j[hi]
  std::vector<int64_t> u;     // per-arc completed forward traversals
  int64_t x0 = 0;
  int64_t endpoint = 0;       // X_tau
  bool b2_held = true;        // max_backtrack < log^2 n
  double b2_threshold = 0;
  int64_t backtrack_events = 0;  // full backward arc traversals
};

// Simulate until beta >= L. Decision bookkeeping: a completion is a forward
// cycle-step arrival at hub j whose previously visited hub is the cyclic
// predecessor prev(j); it bumps u[prev(j)] and attributes J at match(prev(j))
// if the number of matching-edge crossings since the last completion is odd,
// else G at prev(j). A pending odd crossing count at the stopping time
// attributes one final J at the hub where that crossing run started.
TrackStats run_track(const PerturbedCycle& g, const WalkParams& w, int64_t x0,
                     int64_t L, uint64_t seed);

struct DecisionEstimate {
  int64_t trials = 0;
  int64_t g_count = 0, j_count = 0;
  int64_t backtracks = 0;  // classified by a backward hub arrival first
  double p_g = 0, p_j = 0;
  double se = 0;  // standard error of p_g over the decided trials
};

// Start trials at hub `hub`; classify each by the first completed forward arc
// traversal (G/J as in run_track) or by reaching a hub backwards first.
// Interior arc excursions are resolved by exact hitting-probability sampling,
// so wide arcs cost O(hub events), not O(arc length).
DecisionEstimate estimate_decisions(const PerturbedCycle& g, const WalkParams& w,
                                    int hub, int64_t trials, uint64_t seed);

// ((p-q+a)/(p-q+2a), a/(p-q+2a))
std::pair<double, double> pg_closed_form(const WalkParams& w);

// Finite two-line absorption model of the decision: two segments of `arm`
// cells joined by the matching edge, absorbing at the far forward ends.
// Converges to pg_closed_form as arm grows.
std::pair<double, double> absorption_oracle(const WalkParams& w, int arm);

struct GamblerFacts {
  double q_over_p = 0;
  double expected_tau1 = 0;  // 1/(p-q)
  double escape_prob(int b) const;  // (q/p)^b: hit -b before drifting away
};

GamblerFacts gambler_facts(const WalkParams& w);

struct SpreadBucket {
  std::vector<int64_t> y;
  int64_t count = 0;
  double mean_offset = 0;  // X_T relative to x0 + (p-q)T + sum y_i l_i
  double sd_offset = 0;
};

// Fixed-horizon runs bucketed by realized traffic vector y.
std::vector<SpreadBucket> conditional_endpoint_spread(const PerturbedCycle& g,
                                                      const WalkParams& w,
                                                      int64_t T, int64_t trials,
                                                      uint64_t seed);

}  // namespace ringmix
