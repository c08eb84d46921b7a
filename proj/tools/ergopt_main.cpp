// ergopt command line: batch experiments over finite edge shifts and circle
// rotations. Subcommands map one-to-one onto the library operations; outputs
// are deterministic CSV/JSON plus optional static SVG plots.
//
// Exit codes: 0 = pass, 1 = verification failure (witnesses in the output),
// 2 = usage or parse error.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ergopt/asymptotics.hpp"
#include "ergopt/discounted.hpp"
#include "ergopt/io.hpp"
#include "ergopt/minmean.hpp"
#include "ergopt/sampling.hpp"
#include "ergopt/subaction.hpp"
#include "ergopt/svg.hpp"
#include "ergopt/system.hpp"

namespace {

using namespace ergopt;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

void emit(const std::optional<std::string>& out_path, const std::string& content) {
    if (out_path)
        write_text_file(*out_path, content);
    else
        std::cout << content;
}

void emit_json(const std::optional<std::string>& out_path, const Json& doc) {
    emit(out_path, doc.dump(2) + "\n");
}

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> eps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            eps.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw SpecError("bad epsilon value '" + item + "'");
        }
    }
    if (eps.empty()) throw SpecError("empty epsilon list");
    return eps;
}

std::vector<int> parse_word(const FiniteSystem& sys, const std::string& text) {
    std::vector<int> word;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) word.push_back(sys.require_edge(item));
    return word;
}

struct PointSampleOptions {
    int enum_pre = 2;
    int enum_cyc = 3;
    int random_points = 0;
    std::string points_file;
};

void add_point_sample_flags(CLI::App* cmd, PointSampleOptions& opts) {
    cmd->add_option("--enum-pre", opts.enum_pre, "max preperiod length for enumerated points");
    cmd->add_option("--enum-cyc", opts.enum_cyc, "max cycle length for enumerated points");
    cmd->add_option("--random-points", opts.random_points,
                    "additional random points drawn from --seed");
    cmd->add_option("--points", opts.points_file,
                    "JSON file with {\"points\": [...]} overriding enumeration");
}

std::vector<SymbolicPoint> collect_points(const FiniteSystem& sys, const PointSampleOptions& opts,
                                          std::uint64_t seed) {
    if (!opts.points_file.empty()) {
        Json doc = read_json_file(opts.points_file);
        std::vector<SymbolicPoint> points;
        if (doc.contains("points"))
            for (const auto& p : doc.at("points")) points.push_back(parse_point(p, sys));
        else
            points.push_back(parse_point(doc, sys));
        if (points.empty()) throw SpecError(opts.points_file + ": no points");
        return points;
    }
    std::vector<SymbolicPoint> points = enumerate_points(sys, opts.enum_pre, opts.enum_cyc);
    if (opts.random_points > 0) {
        std::mt19937_64 rng(seed);
        for (int i = 0; i < opts.random_points; ++i) points.push_back(random_point(rng, sys));
    }
    if (points.empty()) throw SpecError("point sample is empty");
    return points;
}

EdgeObservable load_edge_obs(const std::string& path, const FiniteSystem& sys) {
    auto obs = load_observable_file(path, &sys);
    if (!std::holds_alternative<EdgeObservable>(obs))
        throw SpecError(path + ": an edge-weight observable is required here");
    return std::get<EdgeObservable>(std::move(obs));
}

/// --obs file, or the weights carried inline by the system file.
EdgeObservable obs_or_inline(const FiniteSystem& sys, const std::string& obs_path) {
    if (!obs_path.empty()) return load_edge_obs(obs_path, sys);
    if (sys.inline_weights) return EdgeObservable{*sys.inline_weights};
    throw SpecError("an observable is required: pass --obs or put weights in the system file");
}

/// Resolves the observable expression: --obs gives a plain edge observable
/// (fbar from Karp), --u declares f = u0 o sigma - u0 (fbar = 0).
struct ExprChoice {
    ObservableExpr expr;
    Rat fbar;
};

ExprChoice resolve_expr(const FiniteSystem& sys, const std::string& obs_path,
                        const std::string& u_path) {
    if (!obs_path.empty() && !u_path.empty())
        throw SpecError("pass either --obs or --u, not both");
    if (u_path.empty()) {
        EdgeObservable f = obs_or_inline(sys, obs_path);
        Rat fbar = karp_min_mean(sys, f).fbar;
        return {ObservableExpr::plain(std::move(f)), std::move(fbar)};
    }
    EdgeObservable u0 = load_edge_obs(u_path, sys);
    return {ObservableExpr::coboundary(std::move(u0)), Rat(0)};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    CsvWriter csv({"epsilon", "sup_error", "argmax_point"});
    for (const auto& row : rows)
        csv.add_row({format_double(row.epsilon), format_double(row.sup_error), row.argmax_point});
    return csv.str();
}

Json sweep_json(const std::vector<SweepRow>& rows) {
    Json arr = Json::array();
    for (const auto& row : rows) {
        Json item;
        item["epsilon"] = row.epsilon;
        item["sup_error"] = row.sup_error;
        item["argmax_point"] = row.argmax_point;
        arr.push_back(std::move(item));
    }
    Json doc;
    doc["rows"] = std::move(arr);
    return doc;
}

/// "Eventually decreasing": the errors drop strictly over some suffix that
/// includes the final step.
bool eventually_decreasing(const std::vector<SweepRow>& rows) {
    if (rows.size() < 2) return true;
    return rows[rows.size() - 1].sup_error < rows[rows.size() - 2].sup_error &&
           rows.back().sup_error == std::min_element(rows.begin(), rows.end(),
                                                     [](const SweepRow& a, const SweepRow& b) {
                                                         return a.sup_error < b.sup_error;
                                                     })
                                        ->sup_error;
}

void sweep_plot(const std::vector<SweepRow>& rows, const std::string& path) {
    SvgPlot plot;
    plot.title = "discounted sweep: sup error vs epsilon";
    plot.x_label = "epsilon";
    plot.y_label = "sup error";
    plot.log_x = true;
    plot.log_y = true;
    SvgPlot::Series s;
    s.label = "sup error";
    for (const auto& row : rows) s.points.emplace_back(row.epsilon, row.sup_error);
    plot.series.push_back(std::move(s));
    write_text_file(path, plot.render());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact ergodic optimization and discounted transfer experiments"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for every randomized sample (default 0)");

    std::string system_path, obs_path, u_path, point_path, out_path, plot_path;
    std::string format;  // per-command default: csv for tables, json for reports

    // ---- minmean ----------------------------------------------------------
    auto* cmd_minmean = app.add_subcommand("minmean", "ergodic minimizing value and witness cycle");
    std::string minmean_method = "karp";
    cmd_minmean->add_option("--system", system_path)->required();
    cmd_minmean->add_option("--obs", obs_path, "edge weights (default: inline system weights)");
    cmd_minmean->add_option("--out", out_path);
    cmd_minmean->add_option("--method", minmean_method)
        ->check(CLI::IsMember({"karp", "brute"}));

    // ---- mather ------------------------------------------------------------
    auto* cmd_mather = app.add_subcommand("mather", "critical subgraph (Mather set) and potentials");
    cmd_mather->add_option("--system", system_path)->required();
    cmd_mather->add_option("--obs", obs_path, "edge weights (default: inline system weights)");
    cmd_mather->add_option("--out", out_path);

    // ---- morris ------------------------------------------------------------
    auto* cmd_morris = app.add_subcommand("morris", "periodic point with all Birkhoff sums <= fbar");
    cmd_morris->add_option("--system", system_path)->required();
    cmd_morris->add_option("--obs", obs_path, "edge weights (default: inline system weights)");
    cmd_morris->add_option("--out", out_path);

    // ---- balance -----------------------------------------------------------
    auto* cmd_balance = app.add_subcommand("balance", "extremes of the integral over invariant measures");
    cmd_balance->add_option("--system", system_path)->required();
    cmd_balance->add_option("--u", u_path)->required();
    cmd_balance->add_option("--out", out_path);

    // ---- subaction ---------------------------------------------------------
    auto* cmd_subaction = app.add_subcommand(
        "subaction", "transfer values u, u+, and defects over a point sample");
    PointSampleOptions subaction_pts;
    std::int64_t rot_horizon = 100000;
    int rot_grid = 64;
    cmd_subaction->add_option("--system", system_path)->required();
    cmd_subaction->add_option("--obs", obs_path);
    cmd_subaction->add_option("--u", u_path);
    cmd_subaction->add_option("--out", out_path);
    cmd_subaction->add_option("--format", format, "csv (default) or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_subaction->add_option("--horizon", rot_horizon, "truncation horizon (rotation mode)");
    cmd_subaction->add_option("--grid", rot_grid, "angle grid size (rotation mode)");
    add_point_sample_flags(cmd_subaction, subaction_pts);

    // ---- corollary ---------------------------------------------------------
    auto* cmd_corollary =
        app.add_subcommand("corollary", "C estimate and prefix-sum bounds on minimizing cycles");
    PointSampleOptions corollary_pts;
    std::int64_t corollary_horizon = 10000;
    int corollary_cycle_bound = 0;  // 0 = up to num_vertices
    cmd_corollary->add_option("--system", system_path)->required();
    cmd_corollary->add_option("--obs", obs_path);
    cmd_corollary->add_option("--u", u_path);
    cmd_corollary->add_option("--out", out_path);
    cmd_corollary->add_option("--horizon", corollary_horizon);
    cmd_corollary->add_option("--cycle-bound", corollary_cycle_bound);
    add_point_sample_flags(cmd_corollary, corollary_pts);

    // ---- discounted --------------------------------------------------------
    auto* cmd_discounted = app.add_subcommand("discounted", "U_eps[f] at one point");
    double disc_eps = 0.1, disc_tol = 1e-8;
    std::string disc_method = "closed";
    cmd_discounted->add_option("--system", system_path)->required();
    cmd_discounted->add_option("--obs", obs_path);
    cmd_discounted->add_option("--u", u_path);
    cmd_discounted->add_option("--point", point_path)->required();
    cmd_discounted->add_option("--eps", disc_eps)->required();
    cmd_discounted->add_option("--tol", disc_tol);
    cmd_discounted->add_option("--method", disc_method)->check(CLI::IsMember({"closed", "direct"}));
    cmd_discounted->add_option("--out", out_path);

    // ---- dce-check ---------------------------------------------------------
    auto* cmd_dce = app.add_subcommand("dce-check", "discounted cohomological equation residuals");
    PointSampleOptions dce_pts;
    std::string dce_eps_list = "0.5,0.1,0.01,0.001";
    double dce_tol = 1e-8, dce_bound = 1e-10;
    std::string dce_method = "closed";
    cmd_dce->add_option("--system", system_path)->required();
    cmd_dce->add_option("--obs", obs_path);
    cmd_dce->add_option("--u", u_path);
    cmd_dce->add_option("--eps-list", dce_eps_list);
    cmd_dce->add_option("--tol", dce_tol, "direct-mode truncation tolerance");
    cmd_dce->add_option("--bound", dce_bound, "residual bound for closed mode");
    cmd_dce->add_option("--method", dce_method)->check(CLI::IsMember({"closed", "direct"}));
    cmd_dce->add_option("--out", out_path);
    add_point_sample_flags(cmd_dce, dce_pts);

    // ---- lemma2 ------------------------------------------------------------
    auto* cmd_lemma2 =
        app.add_subcommand("lemma2", "coboundary identity U_eps[f] = u0 - mu_eps(u0 o sigma)");
    PointSampleOptions lemma2_pts;
    std::string lemma2_eps_list = "0.5,0.1,0.01,0.001";
    double lemma2_bound = 1e-10;
    cmd_lemma2->add_option("--system", system_path)->required();
    cmd_lemma2->add_option("--u", u_path)->required();
    cmd_lemma2->add_option("--eps-list", lemma2_eps_list);
    cmd_lemma2->add_option("--bound", lemma2_bound);
    cmd_lemma2->add_option("--out", out_path);
    add_point_sample_flags(cmd_lemma2, lemma2_pts);

    // ---- sweep -------------------------------------------------------------
    auto* cmd_sweep = app.add_subcommand("sweep", "balanced convergence sweep U_eps -> u");
    PointSampleOptions sweep_pts;
    std::string sweep_eps_list = "0.1,0.01,0.001";
    double sweep_threshold = 5e-3, sweep_tol = 1e-6;
    int sweep_grid = 1000;
    cmd_sweep->add_option("--system", system_path)->required();
    cmd_sweep->add_option("--u", u_path, "edge weights (finite systems)");
    cmd_sweep->add_option("--eps-list", sweep_eps_list);
    cmd_sweep->add_option("--threshold", sweep_threshold, "required final sup error");
    cmd_sweep->add_option("--tol", sweep_tol, "direct-sum tolerance (rotation mode)");
    cmd_sweep->add_option("--grid", sweep_grid, "angle grid (rotation mode)");
    cmd_sweep->add_option("--out", out_path);
    cmd_sweep->add_option("--format", format, "csv (default) or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_sweep->add_option("--plot", plot_path, "write an SVG error plot");
    add_point_sample_flags(cmd_sweep, sweep_pts);

    // ---- decompose ---------------------------------------------------------
    auto* cmd_decompose =
        app.add_subcommand("decompose", "empirical-measure decomposition of mu_eps,omega");
    double dec_eps = 0.05, dec_gap_tol = 1e-10;
    std::int64_t dec_n = 100;
    cmd_decompose->add_option("--system", system_path)->required();
    cmd_decompose->add_option("--obs", obs_path, "edge weights (default: inline system weights)");
    cmd_decompose->add_option("--point", point_path)->required();
    cmd_decompose->add_option("--eps", dec_eps)->required();
    cmd_decompose->add_option("--n", dec_n)->required();
    cmd_decompose->add_option("--gap-tol", dec_gap_tol);
    cmd_decompose->add_option("--out", out_path);

    // ---- oscillate ---------------------------------------------------------
    auto* cmd_oscillate =
        app.add_subcommand("oscillate", "two-subsequence oscillation of U_eps along a block point");
    std::int64_t osc_n1 = 9;
    int osc_pmax = 3;
    std::string osc_w0, osc_w1, osc_schedule_out;
    double osc_tol_first = 0.15, osc_tol_rest = 0.05;
    cmd_oscillate->add_option("--system", system_path)->required();
    cmd_oscillate->add_option("--u", u_path)->required();
    cmd_oscillate->add_option("--n1", osc_n1, "first block boundary N1");
    cmd_oscillate->add_option("--pmax", osc_pmax, "number of blocks (max 3)");
    cmd_oscillate->add_option("--w0", osc_w0, "comma-separated edge ids (default: min witness)");
    cmd_oscillate->add_option("--w1", osc_w1, "comma-separated edge ids (default: max witness)");
    cmd_oscillate->add_option("--schedule-out", osc_schedule_out, "write the schedule JSON");
    cmd_oscillate->add_option("--tol-first", osc_tol_first, "error tolerance at p = 1");
    cmd_oscillate->add_option("--tol-rest", osc_tol_rest, "error tolerance at p >= 2");
    cmd_oscillate->add_option("--out", out_path);
    cmd_oscillate->add_option("--format", format, "csv (default) or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_oscillate->add_option("--plot", plot_path, "write an SVG cluster plot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    std::optional<std::string> out;
    if (!out_path.empty()) out = out_path;

    try {
        if (app.got_subcommand(cmd_minmean)) {
            const FiniteSystem sys = load_system_file(system_path).finite();
            const EdgeObservable f = obs_or_inline(sys, obs_path);
            const MinMeanResult result = minmean_method == "karp"
                                             ? karp_min_mean(sys, f)
                                             : brute_force_min_cycle_mean(sys, f);
            emit_json(out, min_mean_to_json(sys, result));
            return kExitPass;
        }

        if (app.got_subcommand(cmd_mather)) {
            const FiniteSystem sys = load_system_file(system_path).finite();
            const EdgeObservable f = obs_or_inline(sys, obs_path);
            const MinMeanResult mm = karp_min_mean(sys, f);
            const CriticalSubgraph critical = critical_subgraph(sys, f, mm.fbar);
            emit_json(out, critical_to_json(sys, critical, mm.fbar));
            return kExitPass;
        }

        if (app.got_subcommand(cmd_morris)) {
            const FiniteSystem sys = load_system_file(system_path).finite();
            const EdgeObservable f = obs_or_inline(sys, obs_path);
            const SymbolicPoint omega = morris_point(sys, f);
            Json j = point_to_json(sys, omega);
            j["point_id"] = point_id(sys, omega);
            emit_json(out, j);
            return kExitPass;
        }

        if (app.got_subcommand(cmd_balance)) {
            const FiniteSystem sys = load_system_file(system_path).finite();
            const EdgeObservable u0 = load_edge_obs(u_path, sys);
            emit_json(out, balance_to_json(sys, balance_check(sys, u0)));
            return kExitPass;
        }

        if (app.got_subcommand(cmd_subaction)) {
            const LoadedSystem loaded = load_system_file(system_path);
            if (!loaded.is_finite()) {
                // Rotation mode: truncated transfer values over an angle grid.
                const RotationSystem& rot = loaded.rotation();
                FourierObservable f;
                if (!obs_path.empty())
                    f = std::get<FourierObservable>(load_observable_file(obs_path, nullptr));
                else if (loaded.rotation_observable)
                    f = *loaded.rotation_observable;
                else
                    throw SpecError("rotation mode needs a Fourier observable");
                CsvWriter csv({"point_id", "u", "u_plus", "defect", "exactness", "attained_n"});
                for (int i = 0; i < rot_grid; ++i) {
                    const double x = static_cast<double>(i) / rot_grid;
                    const TruncatedTransfer tv =
                        rotation_transfer_truncated(rot, f, f.c0, x, rot_horizon);
                    csv.add_row({"x=" + format_double(x), format_double(tv.value),
                                 format_double(std::max(tv.value, 0.0)), "",
                                 "truncated:N=" + std::to_string(tv.horizon),
                                 std::to_string(tv.attained_n)});
                }
                if (format == "json")
                    emit_json(out, csv.to_json());
                else
                    emit(out, csv.str());
                return kExitPass;
            }
            const FiniteSystem& sys = loaded.finite();
            const ExprChoice choice = resolve_expr(sys, obs_path, u_path);
            const auto points = collect_points(sys, subaction_pts, seed);
            CsvWriter csv({"point_id", "u", "u_plus", "defect", "exactness", "attained_n"});
            bool ok = true;
            for (const auto& p : points) {
                const TransferValue tv = transfer_value(p, choice.expr, choice.fbar);
                if (!tv.finite()) {
                    csv.add_row({point_id(sys, p), "unbounded", "", "", "exact", ""});
                    continue;
                }
                const Rat up = tv.value > 0 ? tv.value : Rat(0);
                const DefectValue d = defect(p, choice.expr, choice.fbar);
                ok = ok && !d.unbounded && d.value >= 0;
                csv.add_row({point_id(sys, p), format_double(rat_to_double(tv.value)),
                             format_double(rat_to_double(up)),
                             format_double(rat_to_double(d.value)), "exact",
                             std::to_string(tv.attained_n)});
            }
            if (format == "json")
                emit_json(out, csv.to_json());
            else
                emit(out, csv.str());
            return ok ? kExitPass : kExitFail;
        }

        if (app.got_subcommand(cmd_corollary)) {
            const FiniteSystem sys = load_system_file(system_path).finite();
            const ExprChoice choice = resolve_expr(sys, obs_path, u_path);
            const auto points = collect_points(sys, corollary_pts, seed);
            const BoundEstimate estimate =
                estimate_C(sys, points, choice.expr, choice.fbar, corollary_horizon);
            std::optional<CriticalSubgraph> critical;
            if (choice.expr.kind == ObservableExpr::Kind::Plain)
                critical = critical_subgraph(sys, choice.expr.u, choice.fbar);
            const CorollaryReport report =
                verify_corollary_bounds(sys, critical, choice.expr, choice.fbar, estimate.C,
                                        corollary_cycle_bound, corollary_horizon);
            Json j;
            j["estimate"] = bound_estimate_to_json(estimate);
            j["corollary"] = corollary_to_json(report);
            emit_json(out, j);
            return report.pass && estimate.unbounded.empty() ? kExitPass : kExitFail;
        }

        if (app.got_subcommand(cmd_discounted)) {
            const FiniteSystem sys = load_system_file(system_path).finite();
            const ExprChoice choice = resolve_expr(sys, obs_path, u_path);
            const SymbolicPoint p = load_point_file(point_path, sys);
            const DiscountedEvaluation eval =
                disc_method == "direct"
                    ? discounted_value_direct(p, choice.expr, disc_eps, disc_tol)
                    : discounted_value(p, choice.expr, disc_eps);
            emit_json(out, discounted_to_json(eval));
            return kExitPass;
        }

        if (app.got_subcommand(cmd_dce)) {
            const FiniteSystem sys = load_system_file(system_path).finite();
            const ExprChoice choice = resolve_expr(sys, obs_path, u_path);
            const auto points = collect_points(sys, dce_pts, seed);
            const auto eps_list = parse_eps_list(dce_eps_list);
            const auto method = dce_method == "direct" ? DiscountedEvaluation::Method::Direct
                                                       : DiscountedEvaluation::Method::ClosedFormPeriodic;
            double worst = 0.0;
            std::string worst_at;
            for (double eps : eps_list) {
                for (const auto& p : points) {
                    const double r = dce_residual(p, choice.expr, eps, method, dce_tol);
                    if (r > worst) {
                        worst = r;
                        worst_at = point_id(sys, p) + " @ eps=" + format_double(eps);
                    }
                }
            }
            const double allowance =
                method == DiscountedEvaluation::Method::Direct ? 2.0 * dce_tol + 1e-12 : dce_bound;
            Json j;
            j["max_residual"] = worst;
            j["allowance"] = allowance;
            j["witness"] = worst_at;
            j["points"] = points.size();
            j["pass"] = worst <= allowance;
            emit_json(out, j);
            return worst <= allowance ? kExitPass : kExitFail;
        }

        if (app.got_subcommand(cmd_lemma2)) {
            const FiniteSystem sys = load_system_file(system_path).finite();
            const EdgeObservable u0 = load_edge_obs(u_path, sys);
            const auto points = collect_points(sys, lemma2_pts, seed);
            const auto eps_list = parse_eps_list(lemma2_eps_list);
            double worst = 0.0;
            std::string worst_at;
            for (double eps : eps_list) {
                for (const auto& p : points) {
                    const double gap = coboundary_identity_gap(p, u0, eps);
                    if (gap > worst) {
                        worst = gap;
                        worst_at = point_id(sys, p) + " @ eps=" + format_double(eps);
                    }
                }
            }
            Json j;
            j["max_gap"] = worst;
            j["allowance"] = lemma2_bound;
            j["witness"] = worst_at;
            j["points"] = points.size();
            j["pass"] = worst <= lemma2_bound;
            emit_json(out, j);
            return worst <= lemma2_bound ? kExitPass : kExitFail;
        }

        if (app.got_subcommand(cmd_sweep)) {
            const LoadedSystem loaded = load_system_file(system_path);
            const auto eps_list = parse_eps_list(sweep_eps_list);
            std::vector<SweepRow> rows;
            if (loaded.is_finite()) {
                const FiniteSystem& sys = loaded.finite();
                if (u_path.empty()) throw SpecError("sweep on a finite system needs --u");
                const EdgeObservable u0 = load_edge_obs(u_path, sys);
                const auto points = collect_points(sys, sweep_pts, seed);
                rows = convergence_sweep(sys, points, u0, eps_list);
            } else {
                FourierObservable u0;
                if (!u_path.empty())
                    u0 = std::get<FourierObservable>(load_observable_file(u_path, nullptr));
                else if (loaded.rotation_observable)
                    u0 = *loaded.rotation_observable;
                else
                    throw SpecError("rotation sweep needs a Fourier observable");
                rows = rotation_convergence_sweep(loaded.rotation(), u0, sweep_grid, eps_list,
                                                  sweep_tol);
            }
            if (format == "json")
                emit_json(out, sweep_json(rows));
            else
                emit(out, sweep_csv(rows));
            if (!plot_path.empty()) sweep_plot(rows, plot_path);

            const bool pass =
                eventually_decreasing(rows) && rows.back().sup_error < sweep_threshold;
            if (!pass)
                std::cerr << "sweep contract failed: errors must decrease and end below "
                          << format_double(sweep_threshold) << "\n";
            return pass ? kExitPass : kExitFail;
        }

        if (app.got_subcommand(cmd_decompose)) {
            const FiniteSystem sys = load_system_file(system_path).finite();
            const EdgeObservable g = obs_or_inline(sys, obs_path);
            const SymbolicPoint p = load_point_file(point_path, sys);
            const DecompositionReport report =
                decomposition_report(p, ObservableExpr::plain(g), dec_eps, dec_n);
            emit_json(out, decomposition_to_json(report));
            const bool pass =
                report.identity_gap <= dec_gap_tol && report.remainder_mass <= report.bound;
            if (!pass) std::cerr << "decomposition check failed\n";
            return pass ? kExitPass : kExitFail;
        }

        if (app.got_subcommand(cmd_oscillate)) {
            const FiniteSystem sys = load_system_file(system_path).finite();
            const EdgeObservable u0 = load_edge_obs(u_path, sys);

            std::vector<int> w0, w1;
            if (osc_w0.empty() || osc_w1.empty()) {
                const BalanceReport bal = balance_check(sys, u0);
                if (bal.balanced)
                    throw NotBalancedError(bal,
                                           "no oscillation expected: the observable is balanced");
                w0 = osc_w0.empty() ? bal.min_witness.cycle : parse_word(sys, osc_w0);
                w1 = osc_w1.empty() ? bal.max_witness.cycle : parse_word(sys, osc_w1);
            } else {
                w0 = parse_word(sys, osc_w0);
                w1 = parse_word(sys, osc_w1);
            }

            const OscillationSchedule sched =
                build_oscillation_schedule(sys, w0, w1, osc_n1, osc_pmax);
            if (!osc_schedule_out.empty())
                write_text_file(osc_schedule_out, schedule_to_json(sys, sched).dump(2) + "\n");

            const auto rows = oscillation_experiment(sys, sched, u0);
            CsvWriter csv({"p", "eps_p", "U_value", "target", "abs_error",
                           "contamination_estimate"});
            bool pass = true;
            for (const auto& row : rows) {
                csv.add_row({std::to_string(row.p),
                             row.eps > 0.0 ? format_double(row.eps) : format_eps(row.ln_eps),
                             format_double(row.U), format_double(row.target),
                             format_double(row.abs_error), format_double(row.contamination)});
                pass = pass && row.abs_error <= (row.p == 1 ? osc_tol_first : osc_tol_rest);
            }
            if (format == "json")
                emit_json(out, csv.to_json());
            else
                emit(out, csv.str());
            if (!plot_path.empty()) {
                SvgPlot plot;
                plot.title = "discounted oscillation: U_{eps_p} vs p";
                plot.x_label = "p";
                plot.y_label = "U value";
                SvgPlot::Series u_series, t_series;
                u_series.label = "U_{eps_p}";
                t_series.label = "target";
                t_series.color = "#d62728";
                t_series.line = false;
                for (const auto& row : rows) {
                    u_series.points.emplace_back(row.p, row.U);
                    t_series.points.emplace_back(row.p, row.target);
                }
                plot.series.push_back(std::move(u_series));
                plot.series.push_back(std::move(t_series));
                write_text_file(plot_path, plot.render());
            }
            if (!pass) std::cerr << "oscillation errors exceed the documented tolerances\n";
            return pass ? kExitPass : kExitFail;
        }

        throw SpecError("no subcommand selected");
    } catch (const NotBalancedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}
