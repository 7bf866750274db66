#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ringmix/graph.hpp"

namespace ringmix {

// sum_i y_i l_i mod n, in [0, n)
int64_t f_l(const std::vector<int64_t>& y, const std::vector<int64_t>& l,
            int64_t n);

struct MinDist {
  int64_t dist = 0;
  std::vector<int64_t> witness;
};

// min over y in [-m,m]^k \ {0} of the cyclic distance d(f_l(y), 0)
MinDist min_nonzero_distance(const std::vector<int64_t>& l, int64_t n, int64_t m);

bool is_prime(int64_t n);

// exact expectation of the window hit count for prime n:
// ((2m+1)^k - 1) * (2*floor(alpha*s) + 1) / n with s = n / m^k
double expected_window_hits(int64_t n, int k, int64_t m, double alpha);

// {f_l(y) + L mod n : y in the sign box}, deduplicated, sorted. `signs` is a
// k-char pattern of '+'/'-' (coordinate ranges [0,m-1] / [-(m-1),0]) or "all"
// for the full box [-(m-1), m-1]^k.
std::vector<int64_t> xi_set(const PerturbedCycle& g, int64_t L, int64_t m,
                            const std::string& signs = "all");

struct GapStats {
  int64_t min_gap = 0, max_gap = 0;
  double mean_gap = 0;
  std::vector<int64_t> gaps;  // cyclic, one per point, sums to n
};

GapStats gap_stats(const std::vector<int64_t>& points, int64_t n);

struct SideCheck {
  std::vector<int> pattern;  // +1/-1 per coordinate
  bool both = false;
  double c_min = 0;  // max(pos_min, neg_min)/s when both sides are hit
  int64_t pos_min = -1, neg_min = -1;
};

// for each sign pattern: does its box reach both sides of 0, and how close
std::vector<SideCheck> both_sides_check(const PerturbedCycle& g, int64_t L,
                                        int64_t m);

// ceil(sqrt(rho) * n^(1/(2k+2)))
int64_t default_m(int64_t n, int k, double rho = 1.0);

}  // namespace ringmix
