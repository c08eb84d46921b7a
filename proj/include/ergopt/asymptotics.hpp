#pragma once

#include <cstdint>
#include <vector>

#include "ergopt/discounted.hpp"
#include "ergopt/minmean.hpp"
#include "ergopt/orbit.hpp"
#include "ergopt/system.hpp"

namespace ergopt {

/// Empirical average (1/n) sum_{k<n} g(sigma^k omega); exact through the lap
/// structure, so n is not limited by iteration cost.
Rat empirical_average_exact(const SymbolicPoint& point, const ObservableExpr& g, std::int64_t n);
double empirical_average(const SymbolicPoint& point, const ObservableExpr& g, std::int64_t n);

/// Split of mu_{eps,omega} into a convex combination of empirical measures
/// with index between floor(ln n) and n-1 plus an explicit three-part
/// remainder (head, boundary, geometric tail). The identity is algebraic;
/// the report carries both sides applied to g, the masses, and the proven
/// remainder bound (eps ln n)^2 + (1 + eps n e) e^{-eps n}.
struct DecompositionReport {
    std::int64_t n = 0;
    double epsilon = 0.0;
    double alpha = 0.0;           // mass of the empirical-measure part
    double remainder_mass = 0.0;  // head + boundary + tail
    double head_mass = 0.0;
    double boundary_mass = 0.0;
    double tail_mass = 0.0;
    double bound = 0.0;
    double lhs = 0.0;  // integral of g against mu_{eps,omega}
    double rhs = 0.0;  // decomposition applied to g
    double identity_gap = 0.0;
    std::vector<double> per_k_weights;  // (k+1) eps^2 (1-eps)^k, kept for n <= 64
};

DecompositionReport decomposition_report(const SymbolicPoint& point, const ObservableExpr& g,
                                         double eps, std::int64_t n);

/// Point of the phase space built from alternating blocks of two closed
/// words, so that each discount rate eps_p sees mostly one word. Block p covers
/// [B_{p-1}, B_p) with whole copies of w_{p mod 2}; the final edge of each
/// finite block is swapped for a connecting edge into the next block. The
/// last block repeats forever. N_p grows like exp(N_{p-1}) so indices past
/// p_max-1 never materialize; N_p itself is kept as an arbitrary-precision
/// integer and eps_p = ln(N_p)/N_p additionally in log space, since eps_3
/// underflows any floating-point format.
struct OscillationSchedule {
    std::vector<int> w0, w1;  // edge indices of the two closed words
    int p_max = 0;
    std::vector<mpz_class> N;            // N_1..N_{p_max}
    std::vector<double> ln_N;            // ln N_p
    std::vector<double> eps;             // ln(N_p)/N_p, 0.0 once it underflows
    std::vector<double> ln_eps;          // log of eps_p, always finite
    std::vector<std::int64_t> boundaries;    // snapped block ends B_1..B_{p_max-1}
    std::vector<std::int64_t> snap_offsets;  // B_p - N_p
    std::vector<int> junctions;              // replacement edge at B_p - 1

    const std::vector<int>& word(int block) const { return block % 2 == 1 ? w1 : w0; }
};

/// Builds the schedule: N_{p+1} = smallest integer > e^{N_p} (verified in
/// arbitrary precision, so the gap condition N_p < ln N_{p+1} holds
/// strictly). p_max is capped at 3; beyond that even the log of eps leaves
/// the double exponent range.
OscillationSchedule build_oscillation_schedule(const FiniteSystem& sys,
                                               const std::vector<int>& w0,
                                               const std::vector<int>& w1, std::int64_t n1,
                                               int p_max);

/// Edge occupied at position k of the schedule's point.
int block_edge_at(const OscillationSchedule& sched, std::int64_t k);

/// Closed-form-blocks evaluation of U_eps[u0 o sigma - u0] at the schedule
/// point, taking eps in log space; per-block geometric sums keep every scale
/// from 1 down to e^{-8000} without silent underflow.
double block_discounted_coboundary(const OscillationSchedule& sched, const EdgeObservable& u0,
                                   double ln_eps);

/// Direct truncated sum oracle for the same quantity.
double block_discounted_coboundary_direct(const OscillationSchedule& sched,
                                          const EdgeObservable& u0, double eps, std::int64_t terms);

struct OscillationRow {
    int p = 0;
    double eps = 0.0;     // 0.0 when below the double range
    double ln_eps = 0.0;  // always meaningful
    double U = 0.0;
    double target = 0.0;  // u0(omega) - mu_{p mod 2}(u0)
    double abs_error = 0.0;
    double contamination = 0.0;  // measure mass outside the active block
};

/// Evaluates U_{eps_p} for every p of the schedule and compares against the
/// alternating targets. Refuses balanced observables (no oscillation to
/// exhibit); the witnesses mu_0, mu_1 are the word cycles.
std::vector<OscillationRow> oscillation_experiment(const FiniteSystem& sys,
                                                   const OscillationSchedule& sched,
                                                   const EdgeObservable& u0);

}  // namespace ergopt
