#include "ergopt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ergopt {

const FiniteSystem& LoadedSystem::finite() const {
    if (!is_finite()) throw SpecError("a finite_shift system is required here");
    return std::get<FiniteSystem>(space);
}

const RotationSystem& LoadedSystem::rotation() const {
    if (is_finite()) throw SpecError("a rotation system is required here");
    return std::get<RotationSystem>(space);
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError(path + ": cannot open file");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << content;
}

namespace {

Rat json_to_rat(const Json& v, const char* what) {
    if (v.is_string()) return rat_from_decimal(v.get<std::string>());
    if (v.is_number_integer()) return Rat(static_cast<long>(v.get<std::int64_t>()));
    if (v.is_number_float()) return rat_from_double(v.get<double>());
    throw SpecError(std::string(what) + ": expected a number or decimal string");
}

}  // namespace

FiniteSystem parse_finite_system(const Json& doc) {
    if (!doc.is_object() || doc.value("type", "") != "finite_shift")
        throw SpecError("system file must have type \"finite_shift\"");
    std::vector<std::string> vertices;
    for (const auto& v : doc.at("vertices")) vertices.push_back(v.get<std::string>());
    std::vector<EdgeDecl> edges;
    for (const auto& e : doc.at("edges")) {
        EdgeDecl decl;
        decl.id = e.at("id").get<std::string>();
        decl.from = e.at("from").get<std::string>();
        decl.to = e.at("to").get<std::string>();
        if (e.contains("weight")) decl.weight = json_to_rat(e.at("weight"), "edge weight");
        edges.push_back(std::move(decl));
    }
    try {
        return build_finite_system(vertices, edges);
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
}

FourierObservable parse_fourier(const Json& doc) {
    FourierObservable f;
    f.c0 = doc.value("constant", 0.0);
    if (doc.contains("cos"))
        for (const auto& a : doc.at("cos")) f.cos_coeffs.push_back(a.get<double>());
    if (doc.contains("sin"))
        for (const auto& b : doc.at("sin")) f.sin_coeffs.push_back(b.get<double>());
    return f;
}

RotationSystem parse_rotation(const Json& doc) {
    std::string alpha;
    const auto& a = doc.at("alpha");
    if (a.is_string())
        alpha = a.get<std::string>();
    else
        alpha = format_double(a.get<double>());
    try {
        return make_rotation(alpha);
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
}

LoadedSystem load_system_file(const std::string& path) {
    Json doc = read_json_file(path);
    const std::string type = doc.value("type", "");
    LoadedSystem out;
    if (type == "finite_shift") {
        out.space = parse_finite_system(doc);
    } else if (type == "rotation") {
        out.space = parse_rotation(doc);
        if (doc.contains("observable")) out.rotation_observable = parse_fourier(doc.at("observable"));
    } else {
        throw SpecError(path + ": unknown system type '" + type + "'");
    }
    return out;
}

EdgeObservable parse_edge_observable(const Json& doc, const FiniteSystem& sys) {
    if (!doc.contains("weights")) throw SpecError("observable file needs a \"weights\" object");
    std::unordered_map<std::string, Rat> by_id;
    for (const auto& [id, v] : doc.at("weights").items())
        by_id.emplace(id, json_to_rat(v, ("weight of edge '" + id + "'").c_str()));
    try {
        return make_edge_observable(sys, by_id);
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
}

std::variant<EdgeObservable, FourierObservable> load_observable_file(const std::string& path,
                                                                     const FiniteSystem* sys) {
    Json doc = read_json_file(path);
    if (doc.contains("weights")) {
        if (!sys) throw SpecError(path + ": edge weights need a finite system");
        return parse_edge_observable(doc, *sys);
    }
    if (doc.contains("constant") || doc.contains("cos") || doc.contains("sin"))
        return parse_fourier(doc);
    throw SpecError(path + ": observable file needs \"weights\" or Fourier coefficients");
}

SymbolicPoint parse_point(const Json& doc, const FiniteSystem& sys) {
    std::vector<std::string> pre, cyc;
    if (doc.contains("preperiod"))
        for (const auto& e : doc.at("preperiod")) pre.push_back(e.get<std::string>());
    for (const auto& e : doc.at("cycle")) cyc.push_back(e.get<std::string>());
    try {
        return make_point_by_ids(sys, pre, cyc);
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
}

SymbolicPoint load_point_file(const std::string& path, const FiniteSystem& sys) {
    return parse_point(read_json_file(path), sys);
}

namespace {

Json edge_id_list(const FiniteSystem& sys, const std::vector<int>& edges) {
    Json arr = Json::array();
    for (int e : edges) arr.push_back(sys.edges[static_cast<std::size_t>(e)].id);
    return arr;
}

}  // namespace

Json min_mean_to_json(const FiniteSystem& sys, const MinMeanResult& result) {
    Json j;
    j["fbar"] = rat_to_double(result.fbar);
    j["fbar_exact"] = rat_to_string(result.fbar);
    j["witness_cycle"] = edge_id_list(sys, result.witness_cycle);
    j["method"] = result.method;
    return j;
}

Json critical_to_json(const FiniteSystem& sys, const CriticalSubgraph& critical, const Rat& fbar) {
    Json j;
    j["fbar"] = rat_to_double(fbar);
    j["fbar_exact"] = rat_to_string(fbar);
    Json vertices = Json::array();
    for (int v : critical.vertices) vertices.push_back(sys.vertices[static_cast<std::size_t>(v)]);
    j["vertices"] = std::move(vertices);
    j["edges"] = edge_id_list(sys, critical.edges);
    Json pots, pots_exact;
    for (int v : critical.vertices) {
        const auto& id = sys.vertices[static_cast<std::size_t>(v)];
        pots[id] = rat_to_double(critical.potentials[static_cast<std::size_t>(v)]);
        pots_exact[id] = rat_to_string(critical.potentials[static_cast<std::size_t>(v)]);
    }
    j["potentials"] = std::move(pots);
    j["potentials_exact"] = std::move(pots_exact);
    return j;
}

Json balance_to_json(const FiniteSystem& sys, const BalanceReport& report) {
    Json j;
    j["balanced"] = report.balanced;
    j["min_integral"] = rat_to_double(report.min_integral);
    j["max_integral"] = rat_to_double(report.max_integral);
    j["min_integral_exact"] = rat_to_string(report.min_integral);
    j["max_integral_exact"] = rat_to_string(report.max_integral);
    j["gap"] = rat_to_double(report.gap());
    j["min_witness"] = edge_id_list(sys, report.min_witness.cycle);
    j["max_witness"] = edge_id_list(sys, report.max_witness.cycle);
    return j;
}

Json point_to_json(const FiniteSystem& sys, const SymbolicPoint& point) {
    Json j;
    j["preperiod"] = edge_id_list(sys, point.preperiod);
    j["cycle"] = edge_id_list(sys, point.cycle);
    return j;
}

Json subcohomology_to_json(const SubcohomologyReport& report) {
    Json j;
    j["pass"] = report.pass;
    if (report.min_defect) {
        j["min_defect"] = rat_to_double(*report.min_defect);
        j["min_defect_exact"] = rat_to_string(*report.min_defect);
    } else {
        j["min_defect"] = nullptr;
    }
    j["witnesses"] = report.witness.empty() ? Json::array() : Json::array({report.witness});
    j["unbounded"] = report.unbounded;
    j["checked"] = report.checked;
    return j;
}

Json bound_estimate_to_json(const BoundEstimate& estimate) {
    Json j;
    j["C"] = rat_to_double(estimate.C);
    j["C_exact"] = rat_to_string(estimate.C);
    j["sample_size"] = estimate.sample_size;
    j["unbounded"] = estimate.unbounded;
    return j;
}

Json corollary_to_json(const CorollaryReport& report) {
    Json j;
    j["pass"] = report.pass;
    j["cycles_checked"] = report.cycles_checked;
    j["points_checked"] = report.points_checked;
    j["all_critical_cycles_minimizing"] = report.all_critical_cycles_minimizing;
    Json violations = Json::array();
    for (const auto& v : report.violations) {
        Json item;
        item["point"] = v.point;
        item["n"] = v.n;
        item["sum"] = rat_to_double(v.sum);
        item["sum_exact"] = rat_to_string(v.sum);
        violations.push_back(std::move(item));
    }
    j["witnesses"] = std::move(violations);
    return j;
}

Json discounted_to_json(const DiscountedEvaluation& eval) {
    Json j;
    j["epsilon"] = eval.epsilon;
    j["value"] = eval.value;
    j["method"] = method_name(eval.method);
    j["horizon"] = eval.horizon;
    j["tail_bound"] = eval.tail_bound;
    return j;
}

Json decomposition_to_json(const DecompositionReport& report) {
    Json j;
    j["n"] = report.n;
    j["epsilon"] = report.epsilon;
    j["alpha"] = report.alpha;
    j["remainder_mass"] = report.remainder_mass;
    j["head_mass"] = report.head_mass;
    j["boundary_mass"] = report.boundary_mass;
    j["tail_mass"] = report.tail_mass;
    j["bound"] = report.bound;
    j["lhs"] = report.lhs;
    j["rhs"] = report.rhs;
    j["identity_gap"] = report.identity_gap;
    if (!report.per_k_weights.empty()) j["per_k_weights"] = report.per_k_weights;
    return j;
}

Json schedule_to_json(const FiniteSystem& sys, const OscillationSchedule& sched) {
    Json j;
    j["w0"] = edge_id_list(sys, sched.w0);
    j["w1"] = edge_id_list(sys, sched.w1);
    Json n_list = Json::array();
    for (const auto& n : sched.N) n_list.push_back(n.get_str());
    j["N"] = std::move(n_list);
    j["eps"] = sched.eps;
    j["ln_eps"] = sched.ln_eps;
    j["snap_offsets"] = sched.snap_offsets;
    j["boundaries"] = sched.boundaries;
    Json junctions = Json::array();
    for (int e : sched.junctions) junctions.push_back(sys.edges[static_cast<std::size_t>(e)].id);
    j["junctions"] = std::move(junctions);
    j["p_max"] = sched.p_max;
    return j;
}

std::string format_eps(double ln_eps) {
    constexpr double kLn10 = 2.302585092994045684;
    if (ln_eps > -700.0) return format_double(std::exp(ln_eps));
    const double e10 = std::floor(ln_eps / kLn10);
    const double mantissa = std::exp(ln_eps - e10 * kLn10);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6ge%lld", mantissa, static_cast<long long>(e10));
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw std::logic_error("CSV row width does not match header");
    rows_.push_back(std::move(cells));
}

Json CsvWriter::to_json() const {
    Json rows = Json::array();
    for (const auto& row : rows_) {
        Json item;
        for (std::size_t i = 0; i < header_.size(); ++i) item[header_[i]] = row[i];
        rows.push_back(std::move(item));
    }
    Json doc;
    doc["rows"] = std::move(rows);
    return doc;
}

std::string CsvWriter::str() const {
    auto escape = [](const std::string& cell) {
        if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
        std::string quoted = "\"";
        for (char c : cell) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        quoted += '"';
        return quoted;
    };
    std::ostringstream out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out << ',';
        out << escape(header_[i]);
    }
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << escape(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace ergopt
