#pragma once

#include <random>
#include <vector>

#include "ergopt/system.hpp"

namespace ergopt {

/// The full shift on two symbols encoded as an edge shift: vertices "0","1",
/// edges "00","01","10","11" in declaration order, edge "vw" from v to w.
FiniteSystem full_two_shift();

/// Convenience weights on the full 2-shift, from edge id to value.
EdgeObservable two_shift_weights(const FiniteSystem& sys, const Rat& w00, const Rat& w01,
                                 const Rat& w10, const Rat& w11);

/// Random total system: 2..max_vertices vertices, one guaranteed out-edge
/// each, then extra edges up to max_edges. Parallel edges are allowed.
FiniteSystem random_system(std::mt19937_64& rng, int max_vertices = 8, int max_edges = 20);

/// Uniform integer weights in [lo, hi].
EdgeObservable random_integer_weights(std::mt19937_64& rng, const FiniteSystem& sys, long lo = -10,
                                      long hi = 10);

/// Random rationals num/den with num in [-num_range, num_range], den in
/// [1, den_range].
EdgeObservable random_rational_weights(std::mt19937_64& rng, const FiniteSystem& sys,
                                       long num_range = 100, long den_range = 10);

/// Every eventually periodic point with preperiod length <= max_pre and
/// cycle length <= max_cyc, in deterministic declaration-order enumeration.
/// Distinct (preperiod, cycle phase) representations count as distinct
/// entries.
std::vector<SymbolicPoint> enumerate_points(const FiniteSystem& sys, int max_pre, int max_cyc);

/// Random eventually periodic point: a random walk preperiod followed by the
/// first loop the walk closes.
SymbolicPoint random_point(std::mt19937_64& rng, const FiniteSystem& sys, int max_pre = 4);

}  // namespace ergopt
