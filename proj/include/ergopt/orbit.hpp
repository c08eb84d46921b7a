#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ergopt/rational.hpp"
#include "ergopt/system.hpp"

namespace ergopt {

/// Orbit values of an observable expression along an eventually periodic
/// point: `pre[k]` for k < L, then `cyc[(k-L) mod q]` forever. Because the
/// point is eventually periodic, every Birkhoff quantity below is exact.
struct OrbitValues {
    std::vector<Rat> pre;
    std::vector<Rat> cyc;

    std::int64_t preperiod_length() const { return static_cast<std::int64_t>(pre.size()); }
    std::int64_t cycle_length() const { return static_cast<std::int64_t>(cyc.size()); }

    const Rat& at(std::int64_t k) const;
    /// Sum of one full lap around the cycle.
    Rat lap_sum() const;
    /// Exact prefix sum over the first n values.
    Rat prefix_sum(std::int64_t n) const;
};

OrbitValues orbit_values(const ObservableExpr& f, const SymbolicPoint& point);

/// Extrema of the Birkhoff prefix sums B_n = sum_{k<n} (v_k - shift) over
/// 1 <= n <= horizon (horizon absent: over all n >= 1). Prefix sums along an
/// eventually periodic orbit are affine in the lap count, so the extrema are
/// exact and cost O(L + q). When the per-lap sum is negative/positive the
/// sums diverge and the corresponding side is flagged unbounded.
struct PrefixExtrema {
    bool unbounded_below = false;
    bool unbounded_above = false;
    Rat min_sum;
    Rat max_sum;
    std::int64_t argmin_n = 0;
    std::int64_t argmax_n = 0;
};

PrefixExtrema prefix_extrema(const OrbitValues& values, const Rat& shift,
                             std::optional<std::int64_t> horizon = std::nullopt);

}  // namespace ergopt
