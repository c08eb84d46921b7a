#pragma once

#include <string>
#include <vector>

#include "ergopt/orbit.hpp"
#include "ergopt/system.hpp"

namespace ergopt {

/// Minimizing value of an edge observable together with a witness cycle
/// attaining it. fbar is exact (rational weights in, rational value out).
struct MinMeanResult {
    Rat fbar;
    std::vector<int> witness_cycle;  // edge indices of a simple cycle
    std::string method;              // "karp" | "brute-force"
};

/// Karp's minimum mean cycle over the whole system. The witness is the
/// lexicographically smallest minimizing simple cycle (edge-id sequences
/// compared after rotating each cycle to start at its smallest vertex).
MinMeanResult karp_min_mean(const FiniteSystem& sys, const EdgeObservable& f);

/// Independent oracle: enumerates every simple cycle. Rejects systems with
/// more than 12 vertices. Same tie-break as karp_min_mean.
MinMeanResult brute_force_min_cycle_mean(const FiniteSystem& sys, const EdgeObservable& f);

/// Uniform probability measure on a simple cycle; the computable invariant
/// measures of the edge shift.
struct CycleMeasure {
    std::vector<int> cycle;
};

CycleMeasure make_cycle_measure(const FiniteSystem& sys, const std::vector<int>& cycle);

/// Mean of g over the cycle's edges (the integral of g against the measure).
Rat cycle_integral(const FiniteSystem& sys, const CycleMeasure& mu, const EdgeObservable& g);

/// Tight-edge subgraph realizing the union of supports of the minimizing
/// cycle measures. potentials[] holds the shortest-path potential of every
/// vertex of the system (vertices outside the subgraph keep theirs too).
struct CriticalSubgraph {
    std::vector<int> edges;
    std::vector<int> vertices;
    std::vector<Rat> potentials;

    bool contains_edge(int e) const;
};

/// Shortest-path potentials for the reduced weights f - fbar (Bellman-Ford
/// from an implicit source tied to every vertex), tight edges kept, then
/// pruned to strongly connected parts so every retained vertex lies on a
/// cycle of mean fbar. Throws "fbar is not the minimum" when the reduced
/// weights admit a negative cycle.
CriticalSubgraph critical_subgraph(const FiniteSystem& sys, const EdgeObservable& f,
                                   const Rat& fbar);

/// Purely periodic point whose Birkhoff sums of f - fbar stay <= 0 for every
/// n >= 1: the phase of a minimizing cycle that maximizes the prefix sums of
/// the reduced weights. Verified up to 3 laps before returning.
SymbolicPoint morris_point(const FiniteSystem& sys, const EdgeObservable& f);

/// Extremes of the integral of u over invariant measures (attained on cycle
/// measures for locally constant u), with witnesses.
struct BalanceReport {
    Rat min_integral;
    Rat max_integral;
    CycleMeasure min_witness;
    CycleMeasure max_witness;
    bool balanced = false;

    Rat gap() const { return max_integral - min_integral; }
};

BalanceReport balance_check(const FiniteSystem& sys, const EdgeObservable& u);

/// All simple cycles with at most max_len edges (0 = no bound beyond
/// simplicity). Each cycle is reported once, rotated to start at its
/// smallest vertex (declaration order).
std::vector<std::vector<int>> enumerate_simple_cycles(const FiniteSystem& sys, int max_len = 0);

/// Mean weight of a cycle.
Rat cycle_mean(const EdgeObservable& f, const std::vector<int>& cycle);

}  // namespace ergopt
