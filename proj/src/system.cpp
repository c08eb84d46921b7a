#include "ergopt/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergopt {

int FiniteSystem::require_vertex(const std::string& id) const {
    auto it = vertex_index.find(id);
    if (it == vertex_index.end()) throw std::invalid_argument("unknown vertex: '" + id + "'");
    return it->second;
}

int FiniteSystem::require_edge(const std::string& id) const {
    auto it = edge_index.find(id);
    if (it == edge_index.end()) throw std::invalid_argument("unknown edge: '" + id + "'");
    return it->second;
}

FiniteSystem build_finite_system(const std::vector<std::string>& vertices,
                                 const std::vector<EdgeDecl>& edges) {
    FiniteSystem sys;
    if (vertices.empty()) throw std::invalid_argument("system needs at least one vertex");
    sys.vertices = vertices;
    for (int v = 0; v < sys.num_vertices(); ++v) {
        if (!sys.vertex_index.emplace(sys.vertices[v], v).second)
            throw std::invalid_argument("duplicate id: vertex '" + sys.vertices[v] + "'");
    }
    sys.out_edges.resize(vertices.size());

    bool all_weighted = !edges.empty();
    std::vector<Rat> weights;
    weights.reserve(edges.size());
    for (const EdgeDecl& decl : edges) {
        FiniteSystem::Edge e;
        e.id = decl.id;
        auto from = sys.vertex_index.find(decl.from);
        if (from == sys.vertex_index.end())
            throw std::invalid_argument("unknown vertex: '" + decl.from + "'");
        auto to = sys.vertex_index.find(decl.to);
        if (to == sys.vertex_index.end())
            throw std::invalid_argument("unknown vertex: '" + decl.to + "'");
        e.from = from->second;
        e.to = to->second;
        int index = sys.num_edges();
        if (!sys.edge_index.emplace(e.id, index).second)
            throw std::invalid_argument("duplicate id: edge '" + e.id + "'");
        sys.out_edges[static_cast<std::size_t>(e.from)].push_back(index);
        sys.edges.push_back(std::move(e));
        if (decl.weight)
            weights.push_back(*decl.weight);
        else
            all_weighted = false;
    }

    for (int v = 0; v < sys.num_vertices(); ++v) {
        if (sys.out_edges[static_cast<std::size_t>(v)].empty())
            throw std::invalid_argument("not a total shift: vertex '" + sys.vertices[v] +
                                        "' has no outgoing edge");
    }

    if (all_weighted) sys.inline_weights = std::move(weights);
    return sys;
}

namespace {

void check_path(const FiniteSystem& sys, const std::vector<int>& path, const char* what) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto& a = sys.edges.at(static_cast<std::size_t>(path[i]));
        const auto& b = sys.edges.at(static_cast<std::size_t>(path[i + 1]));
        if (a.to != b.from)
            throw std::invalid_argument(std::string(what) + ": edges '" + a.id + "' and '" +
                                        b.id + "' do not compose");
    }
}

}  // namespace

SymbolicPoint make_point(const FiniteSystem& sys, const std::vector<int>& preperiod,
                         const std::vector<int>& cycle) {
    if (cycle.empty()) throw std::invalid_argument("point cycle must be nonempty");
    for (int e : preperiod) sys.edges.at(static_cast<std::size_t>(e));
    for (int e : cycle) sys.edges.at(static_cast<std::size_t>(e));

    check_path(sys, preperiod, "inadmissible preperiod");
    check_path(sys, cycle, "inadmissible cycle");
    const auto& first = sys.edges[static_cast<std::size_t>(cycle.front())];
    const auto& last = sys.edges[static_cast<std::size_t>(cycle.back())];
    if (last.to != first.from)
        throw std::invalid_argument("cycle does not close: edge '" + last.id +
                                    "' does not return to '" + first.id + "'");
    if (!preperiod.empty()) {
        const auto& tail = sys.edges[static_cast<std::size_t>(preperiod.back())];
        if (tail.to != first.from)
            throw std::invalid_argument("inadmissible point: preperiod edge '" + tail.id +
                                        "' does not continue into cycle edge '" + first.id + "'");
    }
    return SymbolicPoint{preperiod, cycle};
}

SymbolicPoint make_point_by_ids(const FiniteSystem& sys, const std::vector<std::string>& preperiod,
                                const std::vector<std::string>& cycle) {
    std::vector<int> pre, cyc;
    pre.reserve(preperiod.size());
    cyc.reserve(cycle.size());
    for (const auto& id : preperiod) pre.push_back(sys.require_edge(id));
    for (const auto& id : cycle) cyc.push_back(sys.require_edge(id));
    return make_point(sys, pre, cyc);
}

int orbit_edge(const SymbolicPoint& point, std::int64_t k) {
    const auto pre = static_cast<std::int64_t>(point.preperiod.size());
    if (k < 0) throw std::invalid_argument("orbit position must be nonnegative");
    if (k < pre) return point.preperiod[static_cast<std::size_t>(k)];
    const auto q = static_cast<std::int64_t>(point.cycle.size());
    return point.cycle[static_cast<std::size_t>((k - pre) % q)];
}

SymbolicPoint shift_point(const SymbolicPoint& point, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("shift count must be nonnegative");
    SymbolicPoint p = point;
    const auto pre = static_cast<std::int64_t>(p.preperiod.size());
    if (n <= pre) {
        p.preperiod.erase(p.preperiod.begin(), p.preperiod.begin() + static_cast<std::ptrdiff_t>(n));
        return p;
    }
    std::int64_t rot = (n - pre) % static_cast<std::int64_t>(p.cycle.size());
    p.preperiod.clear();
    std::rotate(p.cycle.begin(), p.cycle.begin() + static_cast<std::ptrdiff_t>(rot), p.cycle.end());
    return p;
}

std::string point_id(const FiniteSystem& sys, const SymbolicPoint& point) {
    std::string out;
    for (std::size_t i = 0; i < point.preperiod.size(); ++i) {
        if (i) out += '.';
        out += sys.edges[static_cast<std::size_t>(point.preperiod[i])].id;
    }
    out += "|(";
    for (std::size_t i = 0; i < point.cycle.size(); ++i) {
        if (i) out += '.';
        out += sys.edges[static_cast<std::size_t>(point.cycle[i])].id;
    }
    out += ')';
    return out;
}

RotationSystem make_rotation(const std::string& alpha_text) {
    RotationSystem rot;
    rot.alpha_text = alpha_text;
    rot.alpha = std::stod(alpha_text);
    if (!(rot.alpha > 0.0 && rot.alpha < 1.0))
        throw std::invalid_argument("rotation angle must lie in (0,1)");
    return rot;
}

namespace {

struct DD {
    double hi;
    double lo;
};

DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

DD two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

}  // namespace

double rotation_angle(const RotationSystem& rot, double x, std::int64_t k) {
    // x + k*alpha as a double-double, then reduce mod 1.
    DD prod = two_prod(static_cast<double>(k), rot.alpha);
    DD sum = two_sum(x, prod.hi);
    double lo = prod.lo + sum.lo;
    double f = sum.hi - std::floor(sum.hi) + lo;
    f -= std::floor(f);
    if (f >= 1.0) f -= 1.0;  // rounding at the upper boundary
    if (f < 0.0) f += 1.0;
    return f;
}

EdgeObservable make_edge_observable(const FiniteSystem& sys,
                                    const std::unordered_map<std::string, Rat>& by_id) {
    EdgeObservable obs;
    obs.weights.resize(static_cast<std::size_t>(sys.num_edges()));
    std::vector<bool> seen(static_cast<std::size_t>(sys.num_edges()), false);
    for (const auto& [id, w] : by_id) {
        int e = sys.require_edge(id);
        obs.weights[static_cast<std::size_t>(e)] = w;
        seen[static_cast<std::size_t>(e)] = true;
    }
    for (int e = 0; e < sys.num_edges(); ++e) {
        if (!seen[static_cast<std::size_t>(e)])
            throw std::invalid_argument("missing weight for edge '" +
                                        sys.edges[static_cast<std::size_t>(e)].id + "'");
    }
    return obs;
}

double FourierObservable::eval(double angle) const {
    double value = c0;
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t j = 0; j < cos_coeffs.size(); ++j)
        value += cos_coeffs[j] * std::cos(two_pi * static_cast<double>(j + 1) * angle);
    for (std::size_t j = 0; j < sin_coeffs.size(); ++j)
        value += sin_coeffs[j] * std::sin(two_pi * static_cast<double>(j + 1) * angle);
    return value;
}

double FourierObservable::l1_norm() const {
    double n = std::abs(c0);
    for (double a : cos_coeffs) n += std::abs(a);
    for (double b : sin_coeffs) n += std::abs(b);
    return n;
}

Rat ObservableExpr::value_at(const SymbolicPoint& point, std::int64_t k) const {
    if (kind == Kind::Plain) return u.weight(orbit_edge(point, k));
    return u.weight(orbit_edge(point, k + 1)) - u.weight(orbit_edge(point, k));
}

Rat ObservableExpr::sup_abs_bound() const {
    if (u.weights.empty()) return Rat(0);
    Rat lo = u.weights.front(), hi = u.weights.front();
    for (const Rat& w : u.weights) {
        if (w < lo) lo = w;
        if (w > hi) hi = w;
    }
    if (kind == Kind::Plain) return std::max(Rat(abs(lo)), Rat(abs(hi)));
    return hi - lo;  // range bound for u0 o sigma - u0
}

Rat evaluate_observable(const EdgeObservable& f, const SymbolicPoint& point, std::int64_t k) {
    return f.weight(orbit_edge(point, k));
}

double evaluate_observable(const FourierObservable& f, const RotationSystem& rot, double x,
                           std::int64_t k) {
    return f.eval(rotation_angle(rot, x, k));
}

}  // namespace ergopt
