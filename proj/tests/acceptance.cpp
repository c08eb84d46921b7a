// Acceptance suite: every release criterion as one timed check with a
// pass/fail line. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ergopt/asymptotics.hpp"
#include "ergopt/discounted.hpp"
#include "ergopt/minmean.hpp"
#include "ergopt/sampling.hpp"
#include "ergopt/subaction.hpp"

using namespace ergopt;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (detail.empty()) detail = why;
    }
    void expect(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

int g_failures = 0;

template <typename Fn>
void criterion(int id, const std::string& name, double time_limit_s, Fn&& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.fail(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit_s > 0 && elapsed > time_limit_s)
        out.fail("runtime " + std::to_string(elapsed) + " s exceeds " +
                 std::to_string(time_limit_s) + " s");
    std::printf("[%s] %d. %s (%.2f s)%s%s\n", out.pass ? "PASS" : "FAIL", id, name.c_str(),
                elapsed, out.detail.empty() ? "" : " — ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++g_failures;
}

EdgeObservable height_weights(const FiniteSystem& sys) {
    // u0(v -> w) = v on the full 2-shift
    return two_shift_weights(sys, Rat(0), Rat(0), Rat(1), Rat(1));
}

EdgeObservable random_unit_rationals(std::mt19937_64& rng, const FiniteSystem& sys) {
    std::uniform_int_distribution<long> den_dist(1, 10);
    EdgeObservable obs;
    for (int e = 0; e < sys.num_edges(); ++e) {
        const long den = den_dist(rng);
        std::uniform_int_distribution<long> num_dist(0, den);
        Rat w(num_dist(rng), den);
        w.canonicalize();
        obs.weights.push_back(std::move(w));
    }
    return obs;
}

}  // namespace

int main() {
    // 1. Karp vs brute-force enumeration, exact rational equality.
    criterion(1, "min-mean oracle equivalence on 200 random systems", 10.0, [](Outcome& out) {
        std::mt19937_64 rng(0);
        for (int trial = 0; trial < 200; ++trial) {
            auto sys = random_system(rng, 8, 20);
            auto f = random_integer_weights(rng, sys, -10, 10);
            auto karp = karp_min_mean(sys, f);
            auto brute = brute_force_min_cycle_mean(sys, f);
            out.expect(karp.fbar == brute.fbar,
                       "fbar mismatch on trial " + std::to_string(trial));
            out.expect(cycle_mean(f, karp.witness_cycle) == karp.fbar,
                       "karp witness does not attain fbar on trial " + std::to_string(trial));
        }
    });

    // 2. Sub-cohomology inequality: defect >= 0 everywhere, = 0 on critical cycles.
    criterion(2, "sub-cohomology defects on the 2-shift and 20 random systems", 30.0,
              [](Outcome& out) {
        std::mt19937_64 rng(0);
        std::vector<std::pair<FiniteSystem, EdgeObservable>> cases;
        {
            auto sys = full_two_shift();
            auto f = two_shift_weights(sys, Rat(3), Rat(1), Rat(1), Rat(2));
            cases.emplace_back(std::move(sys), std::move(f));
        }
        for (int i = 0; i < 20; ++i) {
            auto sys = random_system(rng, 8, 20);
            auto f = random_integer_weights(rng, sys, -10, 10);
            cases.emplace_back(std::move(sys), std::move(f));
        }
        for (std::size_t c = 0; c < cases.size(); ++c) {
            const auto& sys = cases[c].first;
            const auto expr = ObservableExpr::plain(cases[c].second);
            const Rat fbar = karp_min_mean(sys, cases[c].second).fbar;

            auto report = verify_subcohomology(sys, enumerate_points(sys, 3, 3), expr, fbar);
            out.expect(report.pass && report.unbounded.empty(),
                       "negative defect in case " + std::to_string(c) + " at " + report.witness);

            auto critical = critical_subgraph(sys, cases[c].second, fbar);
            std::vector<bool> allowed(static_cast<std::size_t>(sys.num_edges()), false);
            for (int e : critical.edges) allowed[static_cast<std::size_t>(e)] = true;
            for (const auto& cycle : enumerate_simple_cycles(sys)) {
                bool inside = true;
                for (int e : cycle) inside = inside && allowed[static_cast<std::size_t>(e)];
                if (!inside) continue;
                for (std::size_t phase = 0; phase < cycle.size(); ++phase) {
                    std::vector<int> rot(cycle.begin() + static_cast<std::ptrdiff_t>(phase),
                                         cycle.end());
                    rot.insert(rot.end(), cycle.begin(),
                               cycle.begin() + static_cast<std::ptrdiff_t>(phase));
                    SymbolicPoint p{{}, rot};
                    auto d = defect(p, expr, fbar);
                    out.expect(!d.unbounded && d.value == Rat(0),
                               "nonzero defect on a critical cycle in case " + std::to_string(c));
                }
            }
        }
    });

    // 3. Corollary bounds for coboundaries of u0 with weights in [0, 1].
    criterion(3, "corollary bounds with C <= 1 for unit-range coboundaries", 30.0,
              [](Outcome& out) {
        std::mt19937_64 rng(0);
        std::vector<FiniteSystem> systems;
        systems.push_back(full_two_shift());
        for (int i = 0; i < 20; ++i) systems.push_back(random_system(rng, 8, 20));
        for (std::size_t c = 0; c < systems.size(); ++c) {
            const auto& sys = systems[c];
            auto u0 = random_unit_rationals(rng, sys);
            auto f = ObservableExpr::coboundary(u0);
            auto points = enumerate_points(sys, 3, 3);
            auto est = estimate_C(sys, points, f, Rat(0));
            out.expect(est.unbounded.empty(), "unbounded point in case " + std::to_string(c));
            out.expect(est.C <= Rat(1), "C > 1 in case " + std::to_string(c));
            auto report =
                verify_corollary_bounds(sys, std::nullopt, f, Rat(0), est.C, 8, 10000);
            out.expect(report.pass, "corollary violation in case " + std::to_string(c));
        }
    });

    // 4. DCE residual in closed form over a 50-point grid and four epsilons.
    criterion(4, "DCE residual <= 1e-10 on 50 points x 4 epsilons", 10.0, [](Outcome& out) {
        auto sys = full_two_shift();
        auto points = enumerate_points(sys, 2, 3);
        points.resize(50);
        const std::vector<ObservableExpr> exprs = {
            ObservableExpr::plain(two_shift_weights(sys, Rat(3), Rat(1), Rat(1), Rat(2))),
            ObservableExpr::coboundary(height_weights(sys))};
        for (const auto& expr : exprs) {
            for (double eps : {0.5, 0.1, 0.01, 0.001}) {
                for (const auto& p : points) {
                    const double r =
                        dce_residual(p, expr, eps, DiscountedEvaluation::Method::ClosedFormPeriodic);
                    out.expect(r <= 1e-10,
                               "residual " + format_double(r) + " at eps " + format_double(eps));
                }
            }
        }
    });

    // 5. Coboundary identity gap over the same grid, 20 random u0.
    criterion(5, "coboundary identity gap <= 1e-10 for 20 random rational u0", 10.0,
              [](Outcome& out) {
        auto sys = full_two_shift();
        auto points = enumerate_points(sys, 2, 3);
        points.resize(50);
        std::mt19937_64 rng(0);
        for (int trial = 0; trial < 20; ++trial) {
            auto u0 = random_rational_weights(rng, sys, 100, 10);
            for (double eps : {0.5, 0.1, 0.01, 0.001}) {
                for (const auto& p : points) {
                    const double gap = coboundary_identity_gap(p, u0, eps);
                    out.expect(gap <= 1e-10, "gap " + format_double(gap) + " on trial " +
                                                 std::to_string(trial));
                }
            }
        }
    });

    // 6. Decomposition identity and remainder bound over the (n, eps) grid.
    criterion(6, "decomposition identity and remainder bound on the (n, eps) grid", 30.0,
              [](Outcome& out) {
        auto sys = full_two_shift();
        auto g = ObservableExpr::plain(height_weights(sys));
        auto p = make_point_by_ids(sys, {"01"}, {"10", "01"});
        double diag_prev = 1e300;
        for (std::int64_t n : {100L, 1000L, 10000L, 100000L}) {
            const double diag_eps = std::log(static_cast<double>(n)) / static_cast<double>(n);
            for (double eps : {diag_eps, 2.0 * diag_eps, 0.01}) {
                auto report = decomposition_report(p, g, eps, n);
                out.expect(report.identity_gap <= 1e-10,
                           "identity gap " + format_double(report.identity_gap) + " at n = " +
                               std::to_string(n));
                out.expect(report.remainder_mass <= report.bound,
                           "remainder above bound at n = " + std::to_string(n));
                out.expect(std::abs(report.alpha + report.remainder_mass - 1.0) <= 1e-12,
                           "masses do not sum to 1");
            }
            auto diag = decomposition_report(p, g, diag_eps, n);
            out.expect(diag.bound < diag_prev, "diagonal bound not decreasing");
            diag_prev = diag.bound;
            if (n == 10000) {
                out.expect(diag.bound < 3e-3, "bound at n = 1e4 not below 3e-3");
                out.expect(std::abs(diag.bound - 2.6755920030557278e-3) <=
                               0.1 * 2.6755920030557278e-3,
                           "bound at n = 1e4 off the recorded oracle by more than 10%");
            }
        }
    });

    // 7. Balanced convergence on the 2-shift and on the golden rotation.
    criterion(7, "balanced convergence sweep (2-shift and golden rotation)", 60.0,
              [](Outcome& out) {
        auto sys = full_two_shift();
        auto u0 = two_shift_weights(sys, Rat(0), Rat(-1), Rat(1), Rat(0));  // v - w
        auto points = enumerate_points(sys, 2, 2);
        const std::vector<double> eps_list{0.1, 0.01, 0.001};
        auto rows = convergence_sweep(sys, points, u0, eps_list);
        for (std::size_t i = 0; i + 1 < rows.size(); ++i)
            out.expect(rows[i + 1].sup_error < rows[i].sup_error, "sup errors not decreasing");
        out.expect(rows.back().sup_error < 5e-3, "final sup error not below 5e-3");

        // cross-check the closed-form sweep against the direct-sum oracle
        auto f = ObservableExpr::coboundary(u0);
        for (double eps : eps_list) {
            double sup_direct = 0.0;
            for (const auto& p : points) {
                const double direct = discounted_value_direct(p, f, eps, 1e-6).value;
                const double target = rat_to_double(u0.weight(orbit_edge(p, 0)));
                sup_direct = std::max(sup_direct, std::abs(direct - target));
            }
            const auto row = std::find_if(rows.begin(), rows.end(),
                                          [&](const SweepRow& r) { return r.epsilon == eps; });
            out.expect(std::abs(row->sup_error - sup_direct) <= 2e-6,
                       "closed-form sweep disagrees with the direct oracle");
        }

        // rotation variant: recorded oracle constant 5.3673e-4 at eps = 1e-3
        auto rot = make_rotation("0.61803398874989484820");
        FourierObservable cosine;
        cosine.cos_coeffs = {1.0};
        auto rrows = rotation_convergence_sweep(rot, cosine, 1000, {1e-3}, 1e-6);
        const double sup = rrows.back().sup_error;
        out.expect(sup < 1e-2, "rotation sup error not below 1e-2");
        out.expect(sup < 2.0 * 5.3673e-4 && sup > 0.5 * 5.3673e-4,
                   "rotation sup error " + format_double(sup) +
                       " not within factor 2 of the recorded 5.3673e-4");
    });

    // 8. Oscillation: two separated cluster values along eps_p.
    criterion(8, "discounted oscillation with N1 = 9, p_max = 3", 10.0, [](Outcome& out) {
        auto sys = full_two_shift();
        auto u0 = height_weights(sys);
        auto sched = build_oscillation_schedule(sys, {sys.require_edge("00")},
                                                {sys.require_edge("11")}, 9, 3);
        const Rat mu0 = cycle_integral(sys, make_cycle_measure(sys, sched.w0), u0);
        const Rat mu1 = cycle_integral(sys, make_cycle_measure(sys, sched.w1), u0);
        out.expect(abs(mu0 - mu1) == Rat(1), "|mu0(u0) - mu1(u0)| != 1");

        auto rows = oscillation_experiment(sys, sched, u0);
        out.expect(rows.size() == 3, "expected 3 rows");
        out.expect(std::abs(rows[1].U - 1.0) < 0.05, "|U_eps2 - 1| >= 0.05");
        out.expect(std::abs(rows[2].U - 0.0) < 0.05, "|U_eps3 - 0| >= 0.05");
        out.expect(std::abs(rows[1].U - rows[2].U) >= 0.9, "cluster values not separated");

        const double direct =
            block_discounted_coboundary_direct(sched, u0, sched.eps[1], 100000);
        out.expect(std::abs(rows[1].U - direct) <= 1e-9,
                   "block mode disagrees with the 1e5-term direct sum");
    });

    // 9. Morris points: prefix sums stay <= 0 for n <= 1e4, exactly.
    criterion(9, "Morris points on 50 random systems", 30.0, [](Outcome& out) {
        std::mt19937_64 rng(0);
        for (int trial = 0; trial < 50; ++trial) {
            auto sys = random_system(rng, 8, 20);
            auto f = random_integer_weights(rng, sys, -10, 10);
            const Rat fbar = karp_min_mean(sys, f).fbar;
            auto omega = morris_point(sys, f);
            auto values = orbit_values(ObservableExpr::plain(f), omega);
            auto ext = prefix_extrema(values, fbar, 10000);
            out.expect(ext.max_sum <= Rat(0),
                       "positive prefix sum on trial " + std::to_string(trial));
        }
    });

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
