#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergopt/minmean.hpp"
#include "ergopt/orbit.hpp"
#include "ergopt/system.hpp"

namespace ergopt {

/// u(omega) = -inf_{n>=1} sum_{k<n} (f - fbar) o sigma^k(omega).
/// On an eventually periodic point the infimum is attained at a finite n
/// whenever the per-lap sum of the reduced weights is >= 0; a negative lap
/// sum means the Birkhoff sums are unbounded below (u = +infinity), which is
/// reported as an outcome rather than an error: it flags a point where the
/// finiteness hypothesis fails.
struct TransferValue {
    enum class Outcome { Exact, UnboundedBelow };
    Outcome outcome = Outcome::Exact;
    Rat value;
    std::int64_t attained_n = 0;

    bool finite() const { return outcome == Outcome::Exact; }
};

TransferValue transfer_value(const SymbolicPoint& point, const ObservableExpr& f, const Rat& fbar);

/// max(u, 0); propagates the unbounded outcome.
TransferValue u_plus(const SymbolicPoint& point, const ObservableExpr& f, const Rat& fbar);

/// defect(omega) = f(omega) - fbar - u+(sigma omega) + u+(omega); >= 0
/// everywhere u is finite, = 0 exactly on the set where the cohomological
/// equation holds.
struct DefectValue {
    bool unbounded = false;
    Rat value;
};

DefectValue defect(const SymbolicPoint& point, const ObservableExpr& f, const Rat& fbar);

struct SubcohomologyReport {
    bool pass = false;
    std::optional<Rat> min_defect;
    std::string witness;                  // point id attaining the minimum
    std::vector<std::string> unbounded;   // points where u = +infinity
    std::size_t checked = 0;
};

/// Checks defect >= 0 over a sample of points.
SubcohomologyReport verify_subcohomology(const FiniteSystem& sys,
                                         const std::vector<SymbolicPoint>& points,
                                         const ObservableExpr& f, const Rat& fbar);

/// C = max over the sample (and n <= horizon, when given) of the negated
/// Birkhoff sums, clamped at 0. Exact via the lap structure of prefix sums.
struct BoundEstimate {
    Rat C;
    std::vector<std::string> unbounded;
    std::size_t sample_size = 0;
};

BoundEstimate estimate_C(const FiniteSystem& sys, const std::vector<SymbolicPoint>& points,
                         const ObservableExpr& f, const Rat& fbar,
                         std::optional<std::int64_t> horizon = std::nullopt);

/// For every phase of every minimizing cycle (cycle length <= max_cycle_len)
/// checks that the Birkhoff prefix sums of f - fbar stay inside [-C, C] for
/// all n <= horizon, and that every cycle of the critical subgraph
/// integrates f to fbar.
struct CorollaryReport {
    bool pass = false;
    std::size_t cycles_checked = 0;
    std::size_t points_checked = 0;
    struct Violation {
        std::string point;
        std::int64_t n;
        Rat sum;
    };
    std::vector<Violation> violations;
    bool all_critical_cycles_minimizing = false;
};

CorollaryReport verify_corollary_bounds(const FiniteSystem& sys,
                                        const std::optional<CriticalSubgraph>& critical,
                                        const ObservableExpr& f, const Rat& fbar, const Rat& C,
                                        int max_cycle_len, std::int64_t horizon);

/// Truncated transfer value on a rotation orbit:
/// u_N(x) = -min_{1<=n<=N} sum_{k<n} (f - fbar)(x + k alpha). No convergence
/// is claimed; callers must always report the horizon alongside the value.
struct TruncatedTransfer {
    double value = 0.0;
    std::int64_t attained_n = 0;
    std::int64_t horizon = 0;
};

TruncatedTransfer rotation_transfer_truncated(const RotationSystem& rot,
                                              const FourierObservable& f, double fbar, double x,
                                              std::int64_t horizon);

}  // namespace ergopt
