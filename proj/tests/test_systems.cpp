#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ergopt/orbit.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/sampling.hpp"
#include "ergopt/system.hpp"

using namespace ergopt;

TEST_CASE("rational parsing is exact") {
    CHECK(rat_from_decimal("0.1") == Rat(1, 10));
    CHECK(rat_from_decimal("-3") == Rat(-3));
    CHECK(rat_from_decimal("2.5e2") == Rat(250));
    CHECK(rat_from_decimal("1e-3") == Rat(1, 1000));
    CHECK(rat_from_decimal("3/4") == Rat(3, 4));
    Rat golden(mpz_class("61803398874989484820"), mpz_class("100000000000000000000"));
    golden.canonicalize();
    CHECK(rat_from_decimal("0.61803398874989484820") == golden);
    CHECK_THROWS_AS(rat_from_decimal("abc"), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_decimal(""), std::invalid_argument);

    // A JSON double 1.1 means the decimal 1.1, not the binary fraction.
    CHECK(rat_from_double(1.1) == Rat(11, 10));
    CHECK(rat_from_double(-0.25) == Rat(-1, 4));
}

TEST_CASE("build_finite_system validates") {
    SUBCASE("two-vertex cycle is valid") {
        auto sys = build_finite_system({"a", "b"}, {{"e1", "a", "b", std::nullopt},
                                                    {"e2", "b", "a", std::nullopt}});
        CHECK(sys.num_vertices() == 2);
        CHECK(sys.num_edges() == 2);
    }
    SUBCASE("self-loop is valid") {
        auto sys = build_finite_system({"a"}, {{"e", "a", "a", std::nullopt}});
        CHECK(sys.num_edges() == 1);
    }
    SUBCASE("empty vertex list is rejected") {
        CHECK_THROWS_AS(build_finite_system({}, {}), std::invalid_argument);
    }
    SUBCASE("sink vertex is rejected") {
        CHECK_THROWS_WITH_AS(
            build_finite_system({"a", "b"}, {{"e1", "a", "b", std::nullopt}}),
            doctest::Contains("not a total shift"), std::invalid_argument);
    }
    SUBCASE("dangling endpoint is rejected") {
        CHECK_THROWS_WITH_AS(
            build_finite_system({"a"}, {{"e1", "a", "zz", std::nullopt}}),
            doctest::Contains("unknown vertex"), std::invalid_argument);
    }
    SUBCASE("duplicate edge id is rejected") {
        CHECK_THROWS_WITH_AS(
            build_finite_system({"a"}, {{"e", "a", "a", std::nullopt},
                                        {"e", "a", "a", std::nullopt}}),
            doctest::Contains("duplicate id"), std::invalid_argument);
    }
}

TEST_CASE("orbit_edge follows preperiod then cycle") {
    auto sys = build_finite_system(
        {"a", "b", "c"},
        {{"e1", "a", "b", std::nullopt}, {"e2", "b", "c", std::nullopt},
         {"e3", "c", "b", std::nullopt}});
    auto p = make_point_by_ids(sys, {"e1"}, {"e2", "e3"});

    CHECK(orbit_edge(p, 0) == sys.require_edge("e1"));
    CHECK(orbit_edge(p, 1) == sys.require_edge("e2"));
    CHECK(orbit_edge(p, 2) == sys.require_edge("e3"));
    CHECK(orbit_edge(p, 3) == sys.require_edge("e2"));
    // hand-unrolled path e1 e2 e3 e2 e3 ..., position 4 = e3
    CHECK(orbit_edge(p, 4) == sys.require_edge("e3"));
    CHECK(orbit_edge(p, 5) == sys.require_edge("e2"));

    auto fixed = build_finite_system({"a"}, {{"e", "a", "a", std::nullopt}});
    auto fp = make_point_by_ids(fixed, {}, {"e"});
    for (std::int64_t k : {0, 1, 7, 1000}) CHECK(orbit_edge(fp, k) == 0);
}

TEST_CASE("point admissibility is enforced") {
    auto sys = full_two_shift();
    CHECK_THROWS(make_point_by_ids(sys, {}, {"01"}));          // does not close
    CHECK_THROWS(make_point_by_ids(sys, {"00"}, {"11"}));      // pre does not reach cycle
    CHECK_THROWS(make_point_by_ids(sys, {}, {"00", "11"}));    // edges do not compose
    CHECK_NOTHROW(make_point_by_ids(sys, {"01"}, {"10", "01"}));
}

TEST_CASE("evaluate_observable on edge weights") {
    auto sys = build_finite_system(
        {"a", "b"}, {{"e1", "a", "b", std::nullopt}, {"e2", "b", "a", std::nullopt}});
    auto f = make_edge_observable(sys, {{"e1", Rat(1)}, {"e2", Rat(0)}});
    auto p = make_point_by_ids(sys, {}, {"e1", "e2"});
    CHECK(evaluate_observable(f, p, 0) == Rat(1));
    CHECK(evaluate_observable(f, p, 3) == Rat(0));

    auto c = make_edge_observable(sys, {{"e1", Rat(7)}, {"e2", Rat(7)}});
    for (std::int64_t k = 0; k < 20; ++k) CHECK(evaluate_observable(c, p, k) == Rat(7));
}

TEST_CASE("missing edge weight is rejected") {
    auto sys = full_two_shift();
    CHECK_THROWS_WITH_AS(make_edge_observable(sys, {{"00", Rat(1)}}),
                         doctest::Contains("missing weight"), std::invalid_argument);
}

TEST_CASE("rotation observable: cos(2 pi x), alpha = 1/4, k = 1 at x = 0") {
    auto rot = make_rotation("0.25");
    FourierObservable f;
    f.cos_coeffs = {1.0};
    CHECK(evaluate_observable(f, rot, 0.0, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(evaluate_observable(f, rot, 0.0, 0) == doctest::Approx(1.0));
    CHECK(evaluate_observable(f, rot, 0.0, 2) == doctest::Approx(-1.0));
}

TEST_CASE("shift consistency: orbit_edge(p, k+1) == orbit_edge(shift(p), k)") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto sys = random_system(rng);
        auto p = random_point(rng, sys);
        auto sp = shift_point(p);
        for (std::int64_t k = 0; k <= 1000; ++k)
            REQUIRE(orbit_edge(p, k + 1) == orbit_edge(sp, k));
    }
}

TEST_CASE("periodicity: purely periodic values repeat exactly") {
    auto sys = full_two_shift();
    auto f = two_shift_weights(sys, Rat(1, 3), Rat(-2, 7), Rat(5), Rat(0));
    auto p = make_point_by_ids(sys, {}, {"01", "10"});
    for (std::int64_t k = 0; k < 50; ++k)
        CHECK(evaluate_observable(f, p, k) == evaluate_observable(f, p, k + 2));
}

TEST_CASE("rotation argument reduction stays accurate to 1e-12 up to k = 1e6") {
    auto rot = make_rotation("0.61803398874989484820");
    FourierObservable f;
    f.cos_coeffs = {1.0};
    f.sin_coeffs = {0.5};
    const double x = 2.375;  // deliberately outside [0,1)
    const double x_red = x - std::floor(x);
    for (std::int64_t k : {1000L, 123456L, 999999L, 1000000L}) {
        const double a = evaluate_observable(f, rot, x, k);
        const double b = evaluate_observable(f, rot, x_red, k);
        CHECK(std::abs(a - b) <= 1e-12);
    }
    // angles stay in [0,1)
    for (std::int64_t k = 0; k < 1000; ++k) {
        const double ang = rotation_angle(rot, 0.9999999, k * 997);
        CHECK(ang >= 0.0);
        CHECK(ang < 1.0);
    }
}

TEST_CASE("orbit values and prefix sums") {
    auto sys = full_two_shift();
    // u0(v -> w) = v
    auto u0 = two_shift_weights(sys, Rat(0), Rat(0), Rat(1), Rat(1));
    auto p = make_point_by_ids(sys, {}, {"10", "01"});  // vertex sequence 1 0 1 0 ...

    auto plain = orbit_values(ObservableExpr::plain(u0), p);
    CHECK(plain.cyc == std::vector<Rat>{Rat(1), Rat(0)});
    CHECK(plain.prefix_sum(7) == Rat(4));

    // coboundary values telescope: prefix_sum(n) = u0(e_n) - u0(e_0)
    auto cob = orbit_values(ObservableExpr::coboundary(u0), p);
    CHECK(cob.lap_sum() == Rat(0));
    for (std::int64_t n = 1; n < 12; ++n)
        CHECK(cob.prefix_sum(n) == u0.weight(orbit_edge(p, n)) - u0.weight(orbit_edge(p, 0)));
}

TEST_CASE("prefix extrema: lap structure") {
    auto sys = full_two_shift();
    auto w = two_shift_weights(sys, Rat(0), Rat(-1), Rat(1), Rat(0));
    auto p = make_point_by_ids(sys, {"00", "01"}, {"11"});

    auto values = orbit_values(ObservableExpr::plain(w), p);
    SUBCASE("unbounded above when the lap sum is positive") {
        // values: 0, -1, then 0,0,0,... lap sum 0 -> bounded both sides
        auto ext = prefix_extrema(values, Rat(0));
        CHECK_FALSE(ext.unbounded_below);
        CHECK_FALSE(ext.unbounded_above);
        CHECK(ext.min_sum == Rat(-1));
        CHECK(ext.argmin_n == 2);
        CHECK(ext.max_sum == Rat(0));
        CHECK(ext.argmax_n == 1);
    }
    SUBCASE("shift moves everything") {
        auto ext = prefix_extrema(values, Rat(1));
        CHECK(ext.unbounded_below);
        CHECK_FALSE(ext.unbounded_above);
        CHECK(ext.max_sum == Rat(-1));
    }
    SUBCASE("finite horizon") {
        auto ext = prefix_extrema(values, Rat(1), 5);
        // sums of (v_k - 1): -1, -3, -4, -5, -6
        CHECK(ext.min_sum == Rat(-6));
        CHECK(ext.argmin_n == 5);
        CHECK(ext.max_sum == Rat(-1));
    }
}

TEST_CASE("prefix extrema match a direct scan on random points") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 40; ++trial) {
        auto sys = random_system(rng, 5, 12);
        auto f = random_integer_weights(rng, sys, -4, 4);
        auto p = random_point(rng, sys, 3);
        auto expr = ObservableExpr::plain(f);
        auto values = orbit_values(expr, p);
        const Rat shift(1, 3);
        const std::int64_t horizon = 60;

        Rat running(0), lo(0), hi(0);
        std::int64_t arglo = 0, arghi = 0;
        for (std::int64_t n = 1; n <= horizon; ++n) {
            running += values.at(n - 1) - shift;
            if (arglo == 0 || running < lo) { lo = running; arglo = n; }
            if (arghi == 0 || running > hi) { hi = running; arghi = n; }
        }
        auto ext = prefix_extrema(values, shift, horizon);
        REQUIRE(ext.min_sum == lo);
        REQUIRE(ext.max_sum == hi);
        REQUIRE(ext.argmin_n == arglo);
        REQUIRE(ext.argmax_n == arghi);
    }
}
