#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "ringmix/kernel.hpp"

namespace ringmix {

// Dense double-precision oracle (n small): P as a row-major n x n matrix.
std::vector<double> dense_matrix(const PerturbedCycle& g, const WalkParams& w);
// d := d P
void dense_step(const std::vector<double>& P, int64_t n, DistVector& d);
// P^t by repeated multiplication (intended for n <= 16)
std::vector<double> dense_power(const std::vector<double>& P, int64_t n,
                                int64_t t);

// Exact-arithmetic option grounding the floating-point oracles (n <= 64).
using Rat = boost::multiprecision::cpp_rational;

struct RatParams {
  Rat p, q, a;
};

std::vector<Rat> dense_matrix_exact(const PerturbedCycle& g, const RatParams& w);
std::vector<Rat> rat_point_mass(int64_t n, int64_t v);
void rat_step(const std::vector<Rat>& P, int64_t n, std::vector<Rat>& d);
Rat rat_tv_to_uniform(const std::vector<Rat>& d);

}  // namespace ringmix
