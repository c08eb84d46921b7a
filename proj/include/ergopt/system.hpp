#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ergopt/rational.hpp"

namespace ergopt {

/// Directed graph whose bi-infinite edge paths form the phase space. Every
/// vertex has out-degree >= 1, so the shift map is total. Vertices and edges
/// keep their declaration order; all tie-breaking downstream relies on it.
struct FiniteSystem {
    struct Edge {
        std::string id;
        int from = -1;
        int to = -1;
    };

    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> out_edges;  // per vertex, declaration order
    std::unordered_map<std::string, int> vertex_index;
    std::unordered_map<std::string, int> edge_index;

    // Weights given inline in the system file, if all edges carried one.
    std::optional<std::vector<Rat>> inline_weights;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    int require_vertex(const std::string& id) const;
    int require_edge(const std::string& id) const;
};

struct EdgeDecl {
    std::string id;
    std::string from;
    std::string to;
    std::optional<Rat> weight;
};

/// Validates and indexes a system description.
/// Errors: "not a total shift" (sink vertex), "unknown vertex" (dangling
/// endpoint), "duplicate id" (vertex or edge id reuse).
FiniteSystem build_finite_system(const std::vector<std::string>& vertices,
                                 const std::vector<EdgeDecl>& edges);

/// Eventually periodic point: a finite preperiod followed by a repeating
/// cycle. The concatenation preperiod-cycle-cycle must be an admissible edge
/// path and the cycle must close.
struct SymbolicPoint {
    std::vector<int> preperiod;  // edge indices, possibly empty
    std::vector<int> cycle;      // edge indices, nonempty
};

SymbolicPoint make_point(const FiniteSystem& sys, const std::vector<int>& preperiod,
                         const std::vector<int>& cycle);
SymbolicPoint make_point_by_ids(const FiniteSystem& sys, const std::vector<std::string>& preperiod,
                                const std::vector<std::string>& cycle);

/// Edge occupied at orbit position k (k >= 0); constant time after reducing
/// k modulo the cycle length.
int orbit_edge(const SymbolicPoint& point, std::int64_t k);

/// The point sigma^n(omega): drops n leading symbols (rotating the cycle once
/// the preperiod is exhausted).
SymbolicPoint shift_point(const SymbolicPoint& point, std::int64_t n = 1);

/// Stable label used in CSV/JSON output: "e1.e2|(c1.c2)".
std::string point_id(const FiniteSystem& sys, const SymbolicPoint& point);

/// Circle rotation by alpha. alpha is kept as the original decimal text plus
/// its double value; orbit angles are reduced mod 1 with compensated
/// products so k up to 1e6 stays accurate to ~1e-15.
struct RotationSystem {
    std::string alpha_text;
    double alpha = 0.0;
};

RotationSystem make_rotation(const std::string& alpha_text);

/// Fractional part of (x + k*alpha) in [0,1), computed with an exact
/// double-double product so the reduction does not drift with k.
double rotation_angle(const RotationSystem& rot, double x, std::int64_t k);

/// Locally constant observable: one rational weight per edge of the bound
/// system, indexed by edge declaration order.
struct EdgeObservable {
    std::vector<Rat> weights;

    const Rat& weight(int edge) const { return weights.at(static_cast<std::size_t>(edge)); }
};

EdgeObservable make_edge_observable(const FiniteSystem& sys,
                                    const std::unordered_map<std::string, Rat>& by_id);

/// Truncated Fourier series on the circle:
/// c0 + sum_j a_j cos(2 pi j x) + b_j sin(2 pi j x).
struct FourierObservable {
    double c0 = 0.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    double eval(double angle) const;
    /// l1 norm of all coefficients; upper bound for sup|f|.
    double l1_norm() const;
};

/// Observable expression fed to the orbit machinery. Plain is the edge
/// weight itself; Coboundary stands for u0 o sigma - u0, which depends on two
/// consecutive edges and is therefore not an edge observable, but all its
/// orbit values are still exact.
struct ObservableExpr {
    enum class Kind { Plain, Coboundary };
    Kind kind = Kind::Plain;
    EdgeObservable u;

    static ObservableExpr plain(EdgeObservable w) { return {Kind::Plain, std::move(w)}; }
    static ObservableExpr coboundary(EdgeObservable w) { return {Kind::Coboundary, std::move(w)}; }

    /// Value at orbit position k of the bound point.
    Rat value_at(const SymbolicPoint& point, std::int64_t k) const;

    /// Upper bound on sup|f| over the whole phase space.
    Rat sup_abs_bound() const;
};

/// Weight of the locally constant observable at orbit position k.
Rat evaluate_observable(const EdgeObservable& f, const SymbolicPoint& point, std::int64_t k);

/// Fourier observable along the rotation orbit of x.
double evaluate_observable(const FourierObservable& f, const RotationSystem& rot, double x,
                           std::int64_t k);

}  // namespace ergopt
