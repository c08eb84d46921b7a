#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "ergopt/io.hpp"
#include "ergopt/sampling.hpp"

using namespace ergopt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ergopt_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream out(p);
        out << content;
        return p.string();
    }
    std::string at(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ERGOPT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

const char* kShift2 = R"({
  "type": "finite_shift",
  "vertices": ["0", "1"],
  "edges": [
    {"id": "00", "from": "0", "to": "0"},
    {"id": "01", "from": "0", "to": "1"},
    {"id": "10", "from": "1", "to": "0"},
    {"id": "11", "from": "1", "to": "1"}
  ]
})";

}  // namespace

TEST_CASE("system file parsing") {
    TempDir dir;
    SUBCASE("documented format with inline weights") {
        auto path = dir.file("g.json", R"({
          "type": "finite_shift",
          "vertices": ["a", "b"],
          "edges": [
            {"id": "e1", "from": "a", "to": "b", "weight": 1.0},
            {"id": "e2", "from": "b", "to": "a", "weight": "0.1"}
          ]
        })");
        auto loaded = load_system_file(path);
        REQUIRE(loaded.is_finite());
        const auto& sys = loaded.finite();
        CHECK(sys.num_edges() == 2);
        REQUIRE(sys.inline_weights.has_value());
        CHECK((*sys.inline_weights)[1] == Rat(1, 10));  // string weight parsed exactly
    }
    SUBCASE("rotation spec") {
        auto path = dir.file("rot.json", R"({
          "type": "rotation",
          "alpha": "0.61803398874989484820",
          "observable": {"constant": 0.0, "cos": [1.0], "sin": []}
        })");
        auto loaded = load_system_file(path);
        CHECK_FALSE(loaded.is_finite());
        CHECK(loaded.rotation().alpha == doctest::Approx(0.6180339887498949));
        REQUIRE(loaded.rotation_observable.has_value());
        CHECK(loaded.rotation_observable->cos_coeffs.size() == 1);
    }
    SUBCASE("bad files raise SpecError") {
        CHECK_THROWS_AS(load_system_file(dir.at("missing.json")), SpecError);
        auto bad = dir.file("bad.json", "{not json");
        CHECK_THROWS_AS(load_system_file(bad), SpecError);
        auto sink = dir.file("sink.json", R"({
          "type": "finite_shift",
          "vertices": ["a", "b"],
          "edges": [{"id": "e1", "from": "a", "to": "b"}]
        })");
        CHECK_THROWS_WITH_AS(load_system_file(sink), doctest::Contains("not a total shift"),
                             SpecError);
    }
}

TEST_CASE("observable and point files") {
    TempDir dir;
    auto sys_path = dir.file("g.json", kShift2);
    auto sys = load_system_file(sys_path).finite();

    auto obs = dir.file("f.json", R"({"weights": {"00": 3, "01": 1, "10": 1, "11": 2}})");
    auto loaded = load_observable_file(obs, &sys);
    REQUIRE(std::holds_alternative<EdgeObservable>(loaded));
    CHECK(std::get<EdgeObservable>(loaded).weight(sys.require_edge("00")) == Rat(3));

    auto missing = dir.file("bad_obs.json", R"({"weights": {"00": 3}})");
    CHECK_THROWS_WITH_AS(load_observable_file(missing, &sys), doctest::Contains("missing weight"),
                         SpecError);

    auto pt = dir.file("p.json", R"({"preperiod": ["10"], "cycle": ["00"]})");
    auto point = load_point_file(pt, sys);
    CHECK(point.preperiod == std::vector<int>{sys.require_edge("10")});

    auto bad_pt = dir.file("bad_p.json", R"({"preperiod": [], "cycle": ["01"]})");
    CHECK_THROWS_AS(load_point_file(bad_pt, sys), SpecError);
}

TEST_CASE("format_eps") {
    CHECK(format_eps(std::log(0.25)) == "0.25");
    // eps_3 scale: ln eps ~ -8095 formats as a decimal mantissa/exponent pair
    const std::string tiny = format_eps(-8094.99988695407148);
    CHECK(tiny.find("e-3516") != std::string::npos);
}

TEST_CASE("CSV quoting") {
    CsvWriter csv({"a", "b"});
    csv.add_row({"plain", "with,comma"});
    csv.add_row({"with\"quote", "x"});
    CHECK(csv.str() == "a,b\nplain,\"with,comma\"\n\"with\"\"quote\",x\n");
}

TEST_CASE("cli: minmean matches the documented example") {
    TempDir dir;
    auto sys = dir.file("g.json", kShift2);
    auto obs = dir.file("f.json", R"({"weights": {"00": 3, "01": 1, "10": 1, "11": 2}})");
    const std::string out = dir.at("out.json");
    REQUIRE(run_cli("minmean --system " + sys + " --obs " + obs + " --out " + out) == 0);
    auto doc = read_json_file(out);
    CHECK(doc.at("fbar").get<double>() == 1.0);
    CHECK(doc.at("fbar_exact").get<std::string>() == "1");
    CHECK(doc.at("witness_cycle") == Json::array({"01", "10"}));

    SUBCASE("outputs are byte-identical across runs") {
        const std::string again = dir.at("out2.json");
        REQUIRE(run_cli("minmean --system " + sys + " --obs " + obs + " --out " + again) == 0);
        CHECK(slurp(out) == slurp(again));
    }
    SUBCASE("brute force agrees") {
        const std::string brute = dir.at("out3.json");
        REQUIRE(run_cli("minmean --method brute --system " + sys + " --obs " + obs + " --out " +
                        brute) == 0);
        CHECK(read_json_file(brute).at("fbar").get<double>() == 1.0);
    }
}

TEST_CASE("cli: inline system weights are used when --obs is omitted") {
    TempDir dir;
    auto sys = dir.file("g.json", R"({
      "type": "finite_shift",
      "vertices": ["0", "1"],
      "edges": [
        {"id": "00", "from": "0", "to": "0", "weight": 3},
        {"id": "01", "from": "0", "to": "1", "weight": 1},
        {"id": "10", "from": "1", "to": "0", "weight": 1},
        {"id": "11", "from": "1", "to": "1", "weight": 2}
      ]
    })");
    const std::string out = dir.at("out.json");
    REQUIRE(run_cli("minmean --system " + sys + " --out " + out) == 0);
    CHECK(read_json_file(out).at("fbar_exact").get<std::string>() == "1");

    // no inline weights and no --obs is a usage error
    TempDir dir2;
    auto bare = dir2.file("bare.json", kShift2);
    CHECK(run_cli("minmean --system " + bare) == 2);
}

TEST_CASE("cli: missing input file exits 2") {
    TempDir dir;
    CHECK(run_cli("minmean --system " + dir.at("missing.json") + " --obs " + dir.at("f.json")) ==
          2);
    CHECK(run_cli("bogus-subcommand") == 2);
}

TEST_CASE("cli: oscillate writes 3 rows within tolerances and a schedule") {
    TempDir dir;
    auto sys = dir.file("shift2.json", kShift2);
    auto u0 = dir.file("u0.json", R"({"weights": {"00": 0, "01": 0, "10": 1, "11": 1}})");
    const std::string out = dir.at("osc.csv");
    const std::string sched = dir.at("sched.json");
    const std::string plot = dir.at("osc.svg");
    REQUIRE(run_cli("oscillate --system " + sys + " --u " + u0 + " --n1 9 --pmax 3 --out " + out +
                    " --schedule-out " + sched + " --plot " + plot) == 0);

    const std::string csv = slurp(out);
    CHECK(csv.rfind("p,eps_p,U_value,target,abs_error,contamination_estimate\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows

    auto sched_doc = read_json_file(sched);
    CHECK(sched_doc.at("N")[1].get<std::string>() == "8104");
    CHECK(sched_doc.at("N")[2].get<std::string>().size() == 3520);
    CHECK(sched_doc.at("w1") == Json::array({"11"}));

    CHECK(slurp(plot).rfind("<svg", 0) == 0);
}

TEST_CASE("cli: sweep passes on balanced input and refuses unbalanced") {
    TempDir dir;
    auto sys = dir.file("shift2.json", kShift2);
    auto balanced = dir.file("u_bal.json",
                             R"({"weights": {"00": 0, "01": -1, "10": 1, "11": 0}})");
    auto unbalanced = dir.file("u_unbal.json",
                               R"({"weights": {"00": 0, "01": 0, "10": 1, "11": 1}})");
    const std::string out = dir.at("sweep.csv");
    REQUIRE(run_cli("sweep --system " + sys + " --u " + balanced +
                    " --eps-list 0.1,0.01,0.001 --out " + out) == 0);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("epsilon,sup_error,argmax_point\n", 0) == 0);

    CHECK(run_cli("sweep --system " + sys + " --u " + unbalanced +
                  " --eps-list 0.1,0.01,0.001 --out " + dir.at("x.csv")) == 1);
}

TEST_CASE("cli: dce-check and lemma2 pass at 1e-10") {
    TempDir dir;
    auto sys = dir.file("shift2.json", kShift2);
    auto u0 = dir.file("u0.json", R"({"weights": {"00": 0, "01": 0, "10": 1, "11": 1}})");
    CHECK(run_cli("dce-check --system " + sys + " --u " + u0 + " --enum-pre 2 --enum-cyc 2") == 0);
    CHECK(run_cli("lemma2 --system " + sys + " --u " + u0 + " --enum-pre 2 --enum-cyc 2") == 0);
}

TEST_CASE("cli: decompose, mather, morris, balance, discounted, subaction, corollary") {
    TempDir dir;
    auto sys = dir.file("shift2.json", kShift2);
    auto f = dir.file("f.json", R"({"weights": {"00": 3, "01": 1, "10": 1, "11": 2}})");
    auto u0 = dir.file("u0.json", R"({"weights": {"00": 0, "01": 0, "10": 1, "11": 1}})");
    auto pt = dir.file("p.json", R"({"cycle": ["10", "01"]})");

    CHECK(run_cli("mather --system " + sys + " --obs " + f + " --out " + dir.at("m.json")) == 0);
    CHECK(read_json_file(dir.at("m.json")).at("edges") == Json::array({"01", "10"}));

    CHECK(run_cli("morris --system " + sys + " --obs " + f + " --out " + dir.at("w.json")) == 0);
    CHECK(run_cli("balance --system " + sys + " --u " + u0 + " --out " + dir.at("b.json")) == 0);
    auto bal = read_json_file(dir.at("b.json"));
    CHECK(bal.at("balanced").get<bool>() == false);
    CHECK(bal.at("gap").get<double>() == 1.0);

    CHECK(run_cli("discounted --system " + sys + " --u " + u0 + " --point " + pt +
                  " --eps 0.25 --out " + dir.at("d.json")) == 0);
    CHECK(read_json_file(dir.at("d.json")).at("value").get<double>() ==
          doctest::Approx(1.0 / 1.75));

    CHECK(run_cli("decompose --system " + sys + " --obs " + u0 + " --point " + pt +
                  " --eps 0.05 --n 100 --out " + dir.at("dec.json")) == 0);
    CHECK(read_json_file(dir.at("dec.json")).at("identity_gap").get<double>() <= 1e-10);

    CHECK(run_cli("subaction --system " + sys + " --obs " + f + " --enum-pre 2 --enum-cyc 2 --out " +
                  dir.at("sub.csv")) == 0);
    CHECK(slurp(dir.at("sub.csv")).rfind("point_id,u,u_plus,defect,exactness,attained_n\n", 0) ==
          0);

    CHECK(run_cli("corollary --system " + sys + " --u " + u0 + " --out " + dir.at("c.json")) == 0);
    CHECK(read_json_file(dir.at("c.json")).at("corollary").at("pass").get<bool>());
}

TEST_CASE("cli: outputs are identical across thread counts") {
    TempDir dir;
    auto rot = dir.file("rot.json", R"({
      "type": "rotation",
      "alpha": "0.61803398874989484820",
      "observable": {"constant": 0.0, "cos": [1.0], "sin": []}
    })");
    const std::string one = dir.at("t1.csv"), four = dir.at("t4.csv");
    const std::string base = std::string(ERGOPT_CLI_PATH) + " sweep --system " + rot +
                             " --grid 200 --eps-list 0.1,0.01 --threshold 0.1 --out ";
    REQUIRE(WEXITSTATUS(std::system(("ERGOPT_THREADS=1 " + base + one + " >/dev/null 2>&1").c_str())) == 0);
    REQUIRE(WEXITSTATUS(std::system(("ERGOPT_THREADS=4 " + base + four + " >/dev/null 2>&1").c_str())) == 0);
    CHECK(slurp(one) == slurp(four));
}

TEST_CASE("cli: rotation sweep and subaction run") {
    TempDir dir;
    auto rot = dir.file("rot.json", R"({
      "type": "rotation",
      "alpha": "0.61803398874989484820",
      "observable": {"constant": 0.0, "cos": [1.0], "sin": []}
    })");
    CHECK(run_cli("sweep --system " + rot + " --grid 32 --eps-list 0.1,0.01 --threshold 0.01 --out " +
                  dir.at("rs.csv")) == 0);
    CHECK(run_cli("subaction --system " + rot + " --grid 8 --horizon 1000 --out " +
                  dir.at("ra.csv")) == 0);
    const std::string csv = slurp(dir.at("ra.csv"));
    CHECK(csv.find("truncated:N=1000") != std::string::npos);
}
