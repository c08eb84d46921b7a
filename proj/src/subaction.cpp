#include "ergopt/subaction.hpp"

#include <algorithm>
#include <stdexcept>

namespace ergopt {

TransferValue transfer_value(const SymbolicPoint& point, const ObservableExpr& f, const Rat& fbar) {
    OrbitValues values = orbit_values(f, point);
    PrefixExtrema ext = prefix_extrema(values, fbar);
    TransferValue out;
    if (ext.unbounded_below) {
        out.outcome = TransferValue::Outcome::UnboundedBelow;
        return out;
    }
    out.value = -ext.min_sum;
    out.attained_n = ext.argmin_n;
    return out;
}

TransferValue u_plus(const SymbolicPoint& point, const ObservableExpr& f, const Rat& fbar) {
    TransferValue tv = transfer_value(point, f, fbar);
    if (tv.finite() && tv.value < 0) tv.value = Rat(0);
    return tv;
}

DefectValue defect(const SymbolicPoint& point, const ObservableExpr& f, const Rat& fbar) {
    TransferValue here = u_plus(point, f, fbar);
    TransferValue next = u_plus(shift_point(point), f, fbar);
    if (!here.finite() || !next.finite()) return {true, Rat(0)};
    Rat value = f.value_at(point, 0) - fbar - next.value + here.value;
    return {false, std::move(value)};
}

SubcohomologyReport verify_subcohomology(const FiniteSystem& sys,
                                         const std::vector<SymbolicPoint>& points,
                                         const ObservableExpr& f, const Rat& fbar) {
    SubcohomologyReport report;
    for (const SymbolicPoint& p : points) {
        DefectValue d = defect(p, f, fbar);
        if (d.unbounded) {
            report.unbounded.push_back(point_id(sys, p));
            continue;
        }
        ++report.checked;
        if (!report.min_defect || d.value < *report.min_defect) {
            report.min_defect = d.value;
            report.witness = point_id(sys, p);
        }
    }
    report.pass = report.min_defect && *report.min_defect >= 0;
    return report;
}

BoundEstimate estimate_C(const FiniteSystem& sys, const std::vector<SymbolicPoint>& points,
                         const ObservableExpr& f, const Rat& fbar,
                         std::optional<std::int64_t> horizon) {
    BoundEstimate out;
    out.C = Rat(0);
    out.sample_size = points.size();
    for (const SymbolicPoint& p : points) {
        OrbitValues values = orbit_values(f, p);
        PrefixExtrema ext = prefix_extrema(values, fbar, horizon);
        if (ext.unbounded_below) {
            out.unbounded.push_back(point_id(sys, p));
            continue;
        }
        Rat candidate = -ext.min_sum;
        if (candidate > out.C) out.C = std::move(candidate);
    }
    return out;
}

CorollaryReport verify_corollary_bounds(const FiniteSystem& sys,
                                        const std::optional<CriticalSubgraph>& critical,
                                        const ObservableExpr& f, const Rat& fbar, const Rat& C,
                                        int max_cycle_len, std::int64_t horizon) {
    CorollaryReport report;
    report.all_critical_cycles_minimizing = true;

    // Minimizing cycles realize the computable part of the Mather set. With a
    // critical subgraph at hand its cycles are exactly those; otherwise (f
    // given as a coboundary, where every cycle is minimizing) enumerate the
    // whole system and filter by mean == fbar.
    std::vector<std::vector<int>> cycles;
    if (critical) {
        std::vector<bool> allowed(static_cast<std::size_t>(sys.num_edges()), false);
        for (int e : critical->edges) allowed[static_cast<std::size_t>(e)] = true;
        for (const auto& cycle : enumerate_simple_cycles(sys, max_cycle_len)) {
            bool inside = true;
            for (int e : cycle) inside = inside && allowed[static_cast<std::size_t>(e)];
            if (inside) cycles.push_back(cycle);
        }
    } else {
        for (const auto& cycle : enumerate_simple_cycles(sys, max_cycle_len)) {
            SymbolicPoint probe{{}, cycle};
            Rat mean(0);
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(cycle.size()); ++i)
                mean += f.value_at(probe, i);
            mean /= Rat(static_cast<long>(cycle.size()));
            if (mean == fbar) cycles.push_back(cycle);
        }
    }

    for (const auto& cycle : cycles) {
        ++report.cycles_checked;
        SymbolicPoint base{{}, cycle};
        Rat mean(0);
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(cycle.size()); ++i)
            mean += f.value_at(base, i);
        mean /= Rat(static_cast<long>(cycle.size()));
        if (mean != fbar) report.all_critical_cycles_minimizing = false;

        for (std::size_t phase = 0; phase < cycle.size(); ++phase) {
            std::vector<int> rotated(cycle.begin() + static_cast<std::ptrdiff_t>(phase), cycle.end());
            rotated.insert(rotated.end(), cycle.begin(),
                           cycle.begin() + static_cast<std::ptrdiff_t>(phase));
            SymbolicPoint p{{}, rotated};
            ++report.points_checked;
            OrbitValues values = orbit_values(f, p);
            PrefixExtrema ext = prefix_extrema(values, fbar, horizon);
            if (ext.min_sum < -C)
                report.violations.push_back({point_id(sys, p), ext.argmin_n, ext.min_sum});
            if (ext.max_sum > C)
                report.violations.push_back({point_id(sys, p), ext.argmax_n, ext.max_sum});
        }
    }
    // A verification that found nothing to check must not claim a pass; a
    // minimizing cycle always exists within length num_vertices.
    report.pass = report.cycles_checked > 0 && report.violations.empty() &&
                  report.all_critical_cycles_minimizing;
    return report;
}

TruncatedTransfer rotation_transfer_truncated(const RotationSystem& rot,
                                              const FourierObservable& f, double fbar, double x,
                                              std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    TruncatedTransfer out;
    out.horizon = horizon;
    double sum = 0.0, comp = 0.0;  // Kahan accumulation over long orbits
    double best = 0.0;
    std::int64_t best_n = 0;
    for (std::int64_t n = 1; n <= horizon; ++n) {
        double term = f.eval(rotation_angle(rot, x, n - 1)) - fbar;
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (n == 1 || sum < best) {
            best = sum;
            best_n = n;
        }
    }
    out.value = -best;
    out.attained_n = best_n;
    return out;
}

}  // namespace ergopt
