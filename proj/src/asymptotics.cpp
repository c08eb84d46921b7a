#include "ergopt/asymptotics.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>

namespace ergopt {

namespace {

// exp underflows to -0/0 around here; below it the asymptotic branch is used.
constexpr double kLogTiny = -690.0;

struct OrbitDoubles {
    std::vector<double> pre, cyc;

    explicit OrbitDoubles(const OrbitValues& values) {
        pre.reserve(values.pre.size());
        cyc.reserve(values.cyc.size());
        for (const Rat& v : values.pre) pre.push_back(rat_to_double(v));
        for (const Rat& v : values.cyc) cyc.push_back(rat_to_double(v));
    }

    double at(std::int64_t k) const {
        if (k < static_cast<std::int64_t>(pre.size())) return pre[static_cast<std::size_t>(k)];
        return cyc[static_cast<std::size_t>((k - static_cast<std::int64_t>(pre.size())) %
                                            static_cast<std::int64_t>(cyc.size()))];
    }
};

}  // namespace

Rat empirical_average_exact(const SymbolicPoint& point, const ObservableExpr& g, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("n = 0: empirical average needs n >= 1");
    OrbitValues values = orbit_values(g, point);
    Rat sum = values.prefix_sum(n);
    return sum / Rat(static_cast<long>(n));
}

double empirical_average(const SymbolicPoint& point, const ObservableExpr& g, std::int64_t n) {
    return rat_to_double(empirical_average_exact(point, g, n));
}

DecompositionReport decomposition_report(const SymbolicPoint& point, const ObservableExpr& g,
                                         double eps, std::int64_t n) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon out of range (0,1)");
    if (n < 2) throw std::invalid_argument("decomposition needs n >= 2");

    DecompositionReport report;
    report.n = n;
    report.epsilon = eps;
    report.lhs = discounted_measure_apply(point, g, eps);

    OrbitDoubles values(orbit_values(g, point));
    const auto cut = static_cast<std::int64_t>(std::floor(std::log(static_cast<double>(n))));
    const bool keep_weights = n <= 64;

    double main_sum = 0.0, head_sum = 0.0;
    double weight = 1.0;  // (1-eps)^k
    double prefix = 0.0;  // P_{k+1} after the update below
    for (std::int64_t k = 0; k <= n - 2; ++k) {
        prefix += values.at(k);
        const double mass = static_cast<double>(k + 1) * eps * eps * weight;
        const double term = eps * eps * weight * prefix;  // mass * A_{k+1}(g)
        if (k < cut) {
            head_sum += term;
            report.head_mass += mass;
        } else {
            main_sum += term;
            report.alpha += mass;
            if (keep_weights) report.per_k_weights.push_back(mass);
        }
        weight *= 1.0 - eps;
    }
    prefix += values.at(n - 1);  // P_n

    // weight is now (1-eps)^{n-1}
    const double boundary_term = eps * weight * prefix;
    report.boundary_mass = static_cast<double>(n) * eps * weight;
    report.tail_mass = weight * (1.0 - eps);
    const double tail_term =
        report.tail_mass * discounted_measure_apply(shift_point(point, n), g, eps);

    report.remainder_mass = report.head_mass + report.boundary_mass + report.tail_mass;
    report.rhs = main_sum + head_sum + boundary_term + tail_term;
    report.identity_gap = std::abs(report.lhs - report.rhs);

    const double ln_n = std::log(static_cast<double>(n));
    report.bound = (eps * ln_n) * (eps * ln_n) +
                   (1.0 + eps * static_cast<double>(n) * std::exp(1.0)) *
                       std::exp(-eps * static_cast<double>(n));
    return report;
}

namespace {

void check_closed_word(const FiniteSystem& sys, const std::vector<int>& word, const char* name) {
    if (word.empty()) throw std::invalid_argument(std::string(name) + " must be nonempty");
    for (std::size_t i = 0; i < word.size(); ++i) {
        const auto& a = sys.edges.at(static_cast<std::size_t>(word[i]));
        const auto& b = sys.edges.at(static_cast<std::size_t>(word[(i + 1) % word.size()]));
        if (a.to != b.from)
            throw std::invalid_argument(std::string(name) + " is not a closed admissible word");
    }
}

/// Smallest integer strictly above e^x for an exact integer x, plus ln of it,
/// certified by rounding the exponential both ways.
mpz_class ceil_exp(const mpz_class& x, double x_approx) {
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(x_approx * 1.4427) + 96;
    for (int attempt = 0; attempt < 4; ++attempt) {
        mpfr_t arg, lo, hi;
        mpfr_init2(arg, 128);
        mpfr_init2(lo, prec);
        mpfr_init2(hi, prec);
        mpfr_set_z(arg, x.get_mpz_t(), MPFR_RNDN);
        mpfr_exp(lo, arg, MPFR_RNDD);
        mpfr_exp(hi, arg, MPFR_RNDU);
        mpz_class floor_lo, floor_hi;
        mpfr_get_z(floor_lo.get_mpz_t(), lo, MPFR_RNDD);
        mpfr_get_z(floor_hi.get_mpz_t(), hi, MPFR_RNDD);
        mpfr_clear(arg);
        mpfr_clear(lo);
        mpfr_clear(hi);
        if (floor_lo == floor_hi) return floor_lo + 1;
        prec *= 2;
    }
    throw std::runtime_error("could not certify floor(exp(N)) at any precision");
}

double log_of_mpz(const mpz_class& x) {
    mpfr_t v, out;
    mpfr_init2(v, 256);
    mpfr_init2(out, 64);
    mpfr_set_z(v, x.get_mpz_t(), MPFR_RNDN);
    mpfr_log(out, v, MPFR_RNDN);
    double r = mpfr_get_d(out, MPFR_RNDN);
    mpfr_clear(v);
    mpfr_clear(out);
    return r;
}

}  // namespace

OscillationSchedule build_oscillation_schedule(const FiniteSystem& sys,
                                               const std::vector<int>& w0,
                                               const std::vector<int>& w1, std::int64_t n1,
                                               int p_max) {
    if (p_max < 1 || p_max > 3)
        throw std::invalid_argument("schedule exceeds representable scale: p_max must be in [1,3]");
    if (n1 < 3) throw std::invalid_argument("N1 must be >= 3");
    if (p_max >= 3 && n1 > 43)
        throw std::invalid_argument(
            "schedule exceeds representable scale: N2 would not fit an orbit index");
    if (p_max >= 2 && n1 > 65536)
        throw std::invalid_argument("schedule exceeds representable scale: N1 too large");
    check_closed_word(sys, w0, "w0");
    check_closed_word(sys, w1, "w1");

    OscillationSchedule sched;
    sched.w0 = w0;
    sched.w1 = w1;
    sched.p_max = p_max;

    sched.N.emplace_back(static_cast<long>(n1));
    for (int p = 2; p <= p_max; ++p) {
        const mpz_class& prev = sched.N.back();
        sched.N.push_back(ceil_exp(prev, prev.get_d()));
    }
    for (const mpz_class& np : sched.N) {
        const double ln_np = log_of_mpz(np);
        sched.ln_N.push_back(ln_np);
        const double np_d = np.get_d();  // +inf for N_3; eps then reads 0
        sched.eps.push_back(std::isinf(np_d) ? 0.0 : ln_np / np_d);
        sched.ln_eps.push_back(std::log(ln_np) - ln_np);
    }

    // Block p ends at the least index >= N_p reachable by whole copies of its
    // word, so every block is an exact repetition. The final block has no end.
    std::int64_t start = 0;
    for (int p = 1; p < p_max; ++p) {
        const auto& w = sched.word(p);
        const auto q = static_cast<std::int64_t>(w.size());
        const std::int64_t target = sched.N[static_cast<std::size_t>(p - 1)].get_si();
        std::int64_t copies = (target - start + q - 1) / q;
        if (copies < 1) copies = 1;
        const std::int64_t end = start + copies * q;
        sched.boundaries.push_back(end);
        sched.snap_offsets.push_back(end - target);

        // Swap the final edge of the block for a connector into the next word.
        const auto& last_edge = sys.edges[static_cast<std::size_t>(w.back())];
        const auto& next_first = sys.edges[static_cast<std::size_t>(sched.word(p + 1).front())];
        int junction = -1;
        for (int e : sys.out_edges[static_cast<std::size_t>(last_edge.from)]) {
            if (sys.edges[static_cast<std::size_t>(e)].to == next_first.from) {
                junction = e;
                break;
            }
        }
        if (junction < 0)
            throw std::invalid_argument("inadmissible word concatenation: no edge from '" +
                                        sys.vertices[static_cast<std::size_t>(last_edge.from)] +
                                        "' to '" +
                                        sys.vertices[static_cast<std::size_t>(next_first.from)] +
                                        "'");
        sched.junctions.push_back(junction);
        start = end;
    }
    return sched;
}

int block_edge_at(const OscillationSchedule& sched, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("orbit position must be nonnegative");
    std::int64_t start = 0;
    for (int p = 1; p < sched.p_max; ++p) {
        const std::int64_t end = sched.boundaries[static_cast<std::size_t>(p - 1)];
        if (k < end) {
            if (k == end - 1) return sched.junctions[static_cast<std::size_t>(p - 1)];
            const auto& w = sched.word(p);
            return w[static_cast<std::size_t>((k - start) % static_cast<std::int64_t>(w.size()))];
        }
        start = end;
    }
    const auto& w = sched.word(sched.p_max);
    return w[static_cast<std::size_t>((k - start) % static_cast<std::int64_t>(w.size()))];
}

double block_discounted_coboundary(const OscillationSchedule& sched, const EdgeObservable& u0,
                                   double ln_eps) {
    const double a0 = rat_to_double(u0.weight(block_edge_at(sched, 0)));
    const auto& final_word = sched.word(sched.p_max);

    if (ln_eps < kLogTiny) {
        // eps below the double range: the discounted measure sits entirely in
        // the infinite final block, up to mass < e^{ln_eps + ln B} ~ 0.
        double mean = 0.0;
        for (int e : final_word) mean += rat_to_double(u0.weight(e));
        mean /= static_cast<double>(final_word.size());
        return a0 - mean;
    }

    const double eps = std::exp(ln_eps);
    const double l = std::log1p(-eps);

    // T = sum_k (1-eps)^k u0(edge_k), block by block.
    double T = 0.0;
    std::int64_t start = 0;
    for (int p = 1; p < sched.p_max; ++p) {
        const auto& w = sched.word(p);
        const auto q = static_cast<std::int64_t>(w.size());
        const std::int64_t end = sched.boundaries[static_cast<std::size_t>(p - 1)];
        const std::int64_t copies = (end - start) / q;

        double word_sum = 0.0;
        for (std::int64_t i = 0; i < q; ++i)
            word_sum += std::exp(static_cast<double>(i) * l) *
                        rat_to_double(u0.weight(w[static_cast<std::size_t>(i)]));
        const double geo = std::expm1(static_cast<double>(copies * q) * l) /
                           std::expm1(static_cast<double>(q) * l);
        T += std::exp(static_cast<double>(start) * l) * word_sum * geo;

        const double junction_delta =
            rat_to_double(u0.weight(sched.junctions[static_cast<std::size_t>(p - 1)])) -
            rat_to_double(u0.weight(w.back()));
        T += std::exp(static_cast<double>(end - 1) * l) * junction_delta;
        start = end;
    }
    {
        const auto q = static_cast<std::int64_t>(final_word.size());
        double word_sum = 0.0;
        for (std::int64_t i = 0; i < q; ++i)
            word_sum += std::exp(static_cast<double>(i) * l) *
                        rat_to_double(u0.weight(final_word[static_cast<std::size_t>(i)]));
        T += std::exp(static_cast<double>(start) * l) * word_sum /
             (-std::expm1(static_cast<double>(q) * l));
    }
    return (a0 - eps * T) / (1.0 - eps);
}

double block_discounted_coboundary_direct(const OscillationSchedule& sched,
                                          const EdgeObservable& u0, double eps,
                                          std::int64_t terms) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon out of range (0,1)");
    double sum = 0.0, comp = 0.0, weight = 1.0;
    double prev = rat_to_double(u0.weight(block_edge_at(sched, 0)));
    for (std::int64_t k = 0; k < terms; ++k) {
        const double next = rat_to_double(u0.weight(block_edge_at(sched, k + 1)));
        const double term = weight * (next - prev);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        prev = next;
        weight *= 1.0 - eps;
    }
    return -sum;
}

std::vector<OscillationRow> oscillation_experiment(const FiniteSystem& sys,
                                                   const OscillationSchedule& sched,
                                                   const EdgeObservable& u0) {
    BalanceReport bal = balance_check(sys, u0);
    if (bal.balanced)
        throw NotBalancedError(bal,
                               "no oscillation expected: the observable is balanced and the "
                               "discounted values converge; run the convergence sweep instead");

    const Rat mu0 = cycle_integral(sys, make_cycle_measure(sys, sched.w0), u0);
    const Rat mu1 = cycle_integral(sys, make_cycle_measure(sys, sched.w1), u0);
    const double a0 = rat_to_double(u0.weight(block_edge_at(sched, 0)));

    std::vector<OscillationRow> rows;
    for (int p = 1; p <= sched.p_max; ++p) {
        OscillationRow row;
        row.p = p;
        row.ln_eps = sched.ln_eps[static_cast<std::size_t>(p - 1)];
        row.eps = sched.eps[static_cast<std::size_t>(p - 1)];
        row.U = block_discounted_coboundary(sched, u0, row.ln_eps);
        row.target = a0 - rat_to_double(p % 2 == 0 ? mu0 : mu1);
        row.abs_error = std::abs(row.U - row.target);

        // Mass of mu_{eps_p, omega} outside the (shifted) active block: the
        // series integrates u0 o sigma, so the window moves back by one.
        const std::int64_t before_len =
            p >= 2 ? std::max<std::int64_t>(sched.boundaries[static_cast<std::size_t>(p - 2)] - 1, 0)
                   : 0;
        double before = 0.0, after = 0.0;
        if (row.ln_eps < kLogTiny) {
            before = before_len > 0 ? std::exp(row.ln_eps + std::log(static_cast<double>(before_len)))
                                    : 0.0;
            // eps only underflows for the final block, which has no mass after.
        } else {
            const double l = std::log1p(-row.eps);
            before = -std::expm1(static_cast<double>(before_len) * l);
            if (p < sched.p_max) {
                const std::int64_t end = sched.boundaries[static_cast<std::size_t>(p - 1)];
                after = std::exp(static_cast<double>(end - 1) * l);
            }
        }
        row.contamination = before + after;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ergopt
