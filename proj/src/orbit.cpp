#include "ergopt/orbit.hpp"

#include <stdexcept>

namespace ergopt {

const Rat& OrbitValues::at(std::int64_t k) const {
    if (k < 0) throw std::invalid_argument("orbit position must be nonnegative");
    const auto L = preperiod_length();
    if (k < L) return pre[static_cast<std::size_t>(k)];
    return cyc[static_cast<std::size_t>((k - L) % cycle_length())];
}

Rat OrbitValues::lap_sum() const {
    Rat s(0);
    for (const Rat& v : cyc) s += v;
    return s;
}

Rat OrbitValues::prefix_sum(std::int64_t n) const {
    if (n < 0) throw std::invalid_argument("prefix length must be nonnegative");
    Rat s(0);
    const auto L = preperiod_length();
    const auto head = std::min(n, L);
    for (std::int64_t k = 0; k < head; ++k) s += pre[static_cast<std::size_t>(k)];
    if (n <= L) return s;
    const auto q = cycle_length();
    const std::int64_t laps = (n - L) / q;
    const std::int64_t rest = (n - L) % q;
    if (laps > 0) {
        Rat lap = lap_sum();
        lap *= Rat(static_cast<long>(laps));
        s += lap;
    }
    for (std::int64_t i = 0; i < rest; ++i) s += cyc[static_cast<std::size_t>(i)];
    return s;
}

OrbitValues orbit_values(const ObservableExpr& f, const SymbolicPoint& point) {
    OrbitValues values;
    const auto L = static_cast<std::int64_t>(point.preperiod.size());
    const auto q = static_cast<std::int64_t>(point.cycle.size());
    values.pre.reserve(static_cast<std::size_t>(L));
    values.cyc.reserve(static_cast<std::size_t>(q));
    for (std::int64_t k = 0; k < L; ++k) values.pre.push_back(f.value_at(point, k));
    for (std::int64_t i = 0; i < q; ++i) values.cyc.push_back(f.value_at(point, L + i));
    return values;
}

PrefixExtrema prefix_extrema(const OrbitValues& values, const Rat& shift,
                             std::optional<std::int64_t> horizon) {
    if (horizon && *horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    const auto L = values.preperiod_length();
    const auto q = values.cycle_length();
    if (q == 0) throw std::invalid_argument("orbit has no cycle");

    PrefixExtrema out;
    bool any = false;
    auto consider = [&](const Rat& value, std::int64_t n) {
        if (!any) {
            out.min_sum = out.max_sum = value;
            out.argmin_n = out.argmax_n = n;
            any = true;
            return;
        }
        if (value < out.min_sum || (value == out.min_sum && n < out.argmin_n)) {
            out.min_sum = value;
            out.argmin_n = n;
        }
        if (value > out.max_sum || (value == out.max_sum && n < out.argmax_n)) {
            out.max_sum = value;
            out.argmax_n = n;
        }
    };

    Rat running(0);
    const std::int64_t head = horizon ? std::min(L, *horizon) : L;
    for (std::int64_t n = 1; n <= head; ++n) {
        running += values.pre[static_cast<std::size_t>(n - 1)] - shift;
        consider(running, n);
    }
    if (horizon && *horizon <= L) return out;

    // Base = B_L; T_j = partial sums around one cycle lap, T_q = lap sum.
    Rat base(0);
    for (std::int64_t k = 0; k < L; ++k) base += values.pre[static_cast<std::size_t>(k)] - shift;
    std::vector<Rat> partial(static_cast<std::size_t>(q) + 1);
    partial[0] = Rat(0);
    for (std::int64_t j = 1; j <= q; ++j)
        partial[static_cast<std::size_t>(j)] =
            partial[static_cast<std::size_t>(j - 1)] + values.cyc[static_cast<std::size_t>(j - 1)] - shift;
    const Rat& lap = partial[static_cast<std::size_t>(q)];

    if (!horizon) {
        if (lap < 0) out.unbounded_below = true;
        if (lap > 0) out.unbounded_above = true;
        // The bounded side is attained within the first lap: with lap >= 0 the
        // minimum cannot improve after a full lap, and symmetrically for the
        // maximum with lap <= 0.
        for (std::int64_t m = 1; m <= q; ++m)
            consider(base + partial[static_cast<std::size_t>(m)], L + m);
        if (out.unbounded_below) out.argmin_n = 0;
        if (out.unbounded_above) out.argmax_n = 0;
        return out;
    }

    const std::int64_t max_m = *horizon - L;
    for (std::int64_t j = 0; j < q; ++j) {
        const std::int64_t c_min = (j == 0) ? 1 : 0;
        if (max_m < c_min * q + j) continue;
        const std::int64_t c_max = (max_m - j) / q;
        if (c_max < c_min) continue;
        for (std::int64_t c : {c_min, c_max}) {
            Rat value = base + partial[static_cast<std::size_t>(j)];
            if (c > 0) {
                Rat total = lap;
                total *= Rat(static_cast<long>(c));
                value += total;
            }
            consider(value, L + c * q + j);
        }
    }
    return out;
}

}  // namespace ergopt
