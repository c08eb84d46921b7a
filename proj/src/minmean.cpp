#include "ergopt/minmean.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace ergopt {

namespace {

void check_binding(const FiniteSystem& sys, const EdgeObservable& f) {
    if (static_cast<int>(f.weights.size()) != sys.num_edges())
        throw std::invalid_argument("observable is not bound to this system");
}

bool lex_less(const FiniteSystem& sys, const std::vector<int>& a, const std::vector<int>& b) {
    auto id = [&](int e) -> const std::string& { return sys.edges[static_cast<std::size_t>(e)].id; };
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [&](int x, int y) { return id(x) < id(y); });
}

/// Rotates a simple cycle so it starts at its smallest vertex.
std::vector<int> canonical_rotation(const FiniteSystem& sys, std::vector<int> cycle) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cycle.size(); ++i) {
        int v = sys.edges[static_cast<std::size_t>(cycle[i])].from;
        int b = sys.edges[static_cast<std::size_t>(cycle[best])].from;
        if (v < b) best = i;
    }
    std::rotate(cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>(best), cycle.end());
    return cycle;
}

/// Lexicographically smallest simple cycle using only `allowed` edges.
/// Rooted DFS in edge-id order; the first closed walk found from a root is
/// lex-minimal among cycles whose smallest vertex is that root. Falls back
/// to a deterministic greedy walk if the step budget runs out.
std::vector<int> lex_min_cycle(const FiniteSystem& sys, const std::vector<bool>& allowed) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(sys.num_vertices()));
    for (int e = 0; e < sys.num_edges(); ++e)
        if (allowed[static_cast<std::size_t>(e)])
            out[static_cast<std::size_t>(sys.edges[static_cast<std::size_t>(e)].from)].push_back(e);
    for (auto& edges : out)
        std::sort(edges.begin(), edges.end(), [&](int a, int b) {
            return sys.edges[static_cast<std::size_t>(a)].id < sys.edges[static_cast<std::size_t>(b)].id;
        });

    long budget = 1 << 20;
    std::optional<std::vector<int>> best;

    std::vector<int> path;
    std::vector<bool> visited(static_cast<std::size_t>(sys.num_vertices()), false);
    auto dfs = [&](auto&& self, int root, int at) -> bool {
        if (--budget <= 0) return false;
        for (int e : out[static_cast<std::size_t>(at)]) {
            int to = sys.edges[static_cast<std::size_t>(e)].to;
            if (to == root) {
                path.push_back(e);
                return true;
            }
            if (to < root || visited[static_cast<std::size_t>(to)]) continue;
            visited[static_cast<std::size_t>(to)] = true;
            path.push_back(e);
            if (self(self, root, to)) return true;
            path.pop_back();
            visited[static_cast<std::size_t>(to)] = false;
        }
        return false;
    };

    for (int root = 0; root < sys.num_vertices() && budget > 0; ++root) {
        if (out[static_cast<std::size_t>(root)].empty()) continue;
        path.clear();
        std::fill(visited.begin(), visited.end(), false);
        if (dfs(dfs, root, root)) {
            if (!best || lex_less(sys, path, *best)) best = path;
        }
    }
    if (best) return *best;

    // Greedy fallback: walk the smallest-id allowed edge until a vertex
    // repeats, then cut out the loop.
    int start = -1;
    for (int v = 0; v < sys.num_vertices() && start < 0; ++v)
        if (!out[static_cast<std::size_t>(v)].empty()) start = v;
    if (start < 0) throw std::logic_error("no cycle available in subgraph");
    std::vector<int> walk;
    std::vector<int> seen_at(static_cast<std::size_t>(sys.num_vertices()), -1);
    int at = start;
    while (seen_at[static_cast<std::size_t>(at)] < 0) {
        seen_at[static_cast<std::size_t>(at)] = static_cast<int>(walk.size());
        int e = out[static_cast<std::size_t>(at)].front();
        walk.push_back(e);
        at = sys.edges[static_cast<std::size_t>(e)].to;
    }
    std::vector<int> cycle(walk.begin() + seen_at[static_cast<std::size_t>(at)], walk.end());
    return canonical_rotation(sys, cycle);
}

struct SccResult {
    std::vector<int> component;  // per vertex, -1 if isolated from subgraph
};

/// Tarjan over the subgraph spanned by `allowed` edges.
SccResult strongly_connected(const FiniteSystem& sys, const std::vector<bool>& allowed) {
    const int n = sys.num_vertices();
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    for (int e = 0; e < sys.num_edges(); ++e)
        if (allowed[static_cast<std::size_t>(e)])
            out[static_cast<std::size_t>(sys.edges[static_cast<std::size_t>(e)].from)].push_back(
                sys.edges[static_cast<std::size_t>(e)].to);

    SccResult res;
    res.component.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    int next_index = 0, next_comp = 0;

    struct Frame {
        int v;
        std::size_t child;
    };
    for (int s = 0; s < n; ++s) {
        if (index[static_cast<std::size_t>(s)] != -1) continue;
        std::vector<Frame> frames{{s, 0}};
        index[static_cast<std::size_t>(s)] = low[static_cast<std::size_t>(s)] = next_index++;
        stack.push_back(s);
        on_stack[static_cast<std::size_t>(s)] = true;
        while (!frames.empty()) {
            Frame& fr = frames.back();
            auto& children = out[static_cast<std::size_t>(fr.v)];
            if (fr.child < children.size()) {
                int w = children[fr.child++];
                if (index[static_cast<std::size_t>(w)] == -1) {
                    index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = next_index++;
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(fr.v)] =
                        std::min(low[static_cast<std::size_t>(fr.v)], index[static_cast<std::size_t>(w)]);
                }
            } else {
                if (low[static_cast<std::size_t>(fr.v)] == index[static_cast<std::size_t>(fr.v)]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = false;
                        res.component[static_cast<std::size_t>(w)] = next_comp;
                        if (w == fr.v) break;
                    }
                    ++next_comp;
                }
                int v = fr.v;
                frames.pop_back();
                if (!frames.empty())
                    low[static_cast<std::size_t>(frames.back().v)] = std::min(
                        low[static_cast<std::size_t>(frames.back().v)], low[static_cast<std::size_t>(v)]);
            }
        }
    }
    return res;
}

}  // namespace

Rat cycle_mean(const EdgeObservable& f, const std::vector<int>& cycle) {
    if (cycle.empty()) throw std::invalid_argument("empty cycle");
    Rat sum(0);
    for (int e : cycle) sum += f.weight(e);
    return sum / Rat(static_cast<long>(cycle.size()));
}

std::vector<std::vector<int>> enumerate_simple_cycles(const FiniteSystem& sys, int max_len) {
    std::vector<std::vector<int>> cycles;
    const int cap = max_len > 0 ? std::min(max_len, sys.num_vertices()) : sys.num_vertices();
    std::vector<int> path;
    std::vector<bool> visited(static_cast<std::size_t>(sys.num_vertices()), false);

    auto dfs = [&](auto&& self, int root, int at) -> void {
        for (int e : sys.out_edges[static_cast<std::size_t>(at)]) {
            int to = sys.edges[static_cast<std::size_t>(e)].to;
            if (to == root) {
                path.push_back(e);
                cycles.push_back(path);
                path.pop_back();
                continue;
            }
            if (to < root || visited[static_cast<std::size_t>(to)]) continue;
            if (static_cast<int>(path.size()) + 1 >= cap) continue;
            visited[static_cast<std::size_t>(to)] = true;
            path.push_back(e);
            self(self, root, to);
            path.pop_back();
            visited[static_cast<std::size_t>(to)] = false;
        }
    };
    for (int root = 0; root < sys.num_vertices(); ++root) {
        path.clear();
        std::fill(visited.begin(), visited.end(), false);
        dfs(dfs, root, root);
    }
    return cycles;
}

MinMeanResult brute_force_min_cycle_mean(const FiniteSystem& sys, const EdgeObservable& f) {
    check_binding(sys, f);
    if (sys.num_vertices() > 12)
        throw std::invalid_argument("system too large for brute-force cycle enumeration");

    std::optional<Rat> best;
    std::vector<int> witness;
    for (const auto& cycle : enumerate_simple_cycles(sys)) {
        Rat mean = cycle_mean(f, cycle);
        if (!best || mean < *best) {
            best = mean;
            witness = cycle;
        } else if (mean == *best && lex_less(sys, cycle, witness)) {
            witness = cycle;
        }
    }
    if (!best) throw std::logic_error("total shift without cycles cannot exist");
    return {*best, witness, "brute-force"};
}

MinMeanResult karp_min_mean(const FiniteSystem& sys, const EdgeObservable& f) {
    check_binding(sys, f);
    const int n = sys.num_vertices();

    // d[k][v] = least weight of a k-edge walk ending at v, from any start.
    // Equivalent to Karp from a super-source wired to every vertex.
    std::vector<std::vector<std::optional<Rat>>> d(
        static_cast<std::size_t>(n) + 1,
        std::vector<std::optional<Rat>>(static_cast<std::size_t>(n)));
    for (int v = 0; v < n; ++v) d[0][static_cast<std::size_t>(v)] = Rat(0);
    for (int k = 1; k <= n; ++k) {
        for (int e = 0; e < sys.num_edges(); ++e) {
            const auto& edge = sys.edges[static_cast<std::size_t>(e)];
            const auto& from = d[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(edge.from)];
            if (!from) continue;
            Rat cand = *from + f.weight(e);
            auto& cell = d[static_cast<std::size_t>(k)][static_cast<std::size_t>(edge.to)];
            if (!cell || cand < *cell) cell = std::move(cand);
        }
    }

    std::optional<Rat> fbar;
    for (int v = 0; v < n; ++v) {
        const auto& last = d[static_cast<std::size_t>(n)][static_cast<std::size_t>(v)];
        if (!last) continue;
        std::optional<Rat> worst;
        for (int k = 0; k < n; ++k) {
            const auto& dk = d[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)];
            if (!dk) continue;
            Rat ratio = (*last - *dk) / Rat(n - k);
            if (!worst || ratio > *worst) worst = std::move(ratio);
        }
        if (worst && (!fbar || *worst < *fbar)) fbar = *worst;
    }
    if (!fbar) throw std::logic_error("total shift without cycles cannot exist");

    CriticalSubgraph critical = critical_subgraph(sys, f, *fbar);
    std::vector<bool> allowed(static_cast<std::size_t>(sys.num_edges()), false);
    for (int e : critical.edges) allowed[static_cast<std::size_t>(e)] = true;
    std::vector<int> witness = lex_min_cycle(sys, allowed);
    return {*fbar, witness, "karp"};
}

CycleMeasure make_cycle_measure(const FiniteSystem& sys, const std::vector<int>& cycle) {
    if (cycle.empty()) throw std::invalid_argument("empty cycle");
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const auto& a = sys.edges.at(static_cast<std::size_t>(cycle[i]));
        const auto& b = sys.edges.at(static_cast<std::size_t>(cycle[(i + 1) % cycle.size()]));
        if (a.to != b.from)
            throw std::invalid_argument("cycle is not closed at edge '" + a.id + "'");
    }
    return CycleMeasure{cycle};
}

Rat cycle_integral(const FiniteSystem& sys, const CycleMeasure& mu, const EdgeObservable& g) {
    check_binding(sys, g);
    return cycle_mean(g, mu.cycle);
}

bool CriticalSubgraph::contains_edge(int e) const {
    return std::find(edges.begin(), edges.end(), e) != edges.end();
}

CriticalSubgraph critical_subgraph(const FiniteSystem& sys, const EdgeObservable& f,
                                   const Rat& fbar) {
    check_binding(sys, f);
    const int n = sys.num_vertices();

    // Bellman-Ford on reduced weights from an implicit zero source at every
    // vertex. fbar being the exact minimum means no negative cycle.
    std::vector<Rat> phi(static_cast<std::size_t>(n), Rat(0));
    for (int round = 0; round < n; ++round) {
        bool changed = false;
        for (int e = 0; e < sys.num_edges(); ++e) {
            const auto& edge = sys.edges[static_cast<std::size_t>(e)];
            Rat cand = phi[static_cast<std::size_t>(edge.from)] + f.weight(e) - fbar;
            if (cand < phi[static_cast<std::size_t>(edge.to)]) {
                phi[static_cast<std::size_t>(edge.to)] = std::move(cand);
                changed = true;
            }
        }
        if (!changed) break;
        if (round == n - 1 && changed)
            throw std::runtime_error("fbar is not the minimum: negative reduced cycle");
    }

    std::vector<bool> tight(static_cast<std::size_t>(sys.num_edges()), false);
    for (int e = 0; e < sys.num_edges(); ++e) {
        const auto& edge = sys.edges[static_cast<std::size_t>(e)];
        tight[static_cast<std::size_t>(e)] =
            phi[static_cast<std::size_t>(edge.from)] + f.weight(e) - fbar ==
            phi[static_cast<std::size_t>(edge.to)];
    }

    SccResult scc = strongly_connected(sys, tight);
    CriticalSubgraph out;
    out.potentials = phi;
    std::vector<bool> vertex_kept(static_cast<std::size_t>(n), false);
    for (int e = 0; e < sys.num_edges(); ++e) {
        if (!tight[static_cast<std::size_t>(e)]) continue;
        const auto& edge = sys.edges[static_cast<std::size_t>(e)];
        int cf = scc.component[static_cast<std::size_t>(edge.from)];
        int ct = scc.component[static_cast<std::size_t>(edge.to)];
        if (cf != ct) continue;
        out.edges.push_back(e);
        vertex_kept[static_cast<std::size_t>(edge.from)] = true;
        vertex_kept[static_cast<std::size_t>(edge.to)] = true;
    }
    for (int v = 0; v < n; ++v)
        if (vertex_kept[static_cast<std::size_t>(v)]) out.vertices.push_back(v);
    if (out.edges.empty())
        throw std::runtime_error("fbar is not the minimum: no tight cycle remains");
    return out;
}

SymbolicPoint morris_point(const FiniteSystem& sys, const EdgeObservable& f) {
    MinMeanResult mm = karp_min_mean(sys, f);
    const auto& cycle = mm.witness_cycle;
    const auto q = cycle.size();

    // Prefix sums of the reduced weights; the phase maximizing them has all
    // forward Birkhoff sums <= 0.
    std::vector<Rat> prefix(q, Rat(0));
    Rat running(0);
    std::size_t best = 0;
    for (std::size_t j = 1; j < q; ++j) {
        running += f.weight(cycle[j - 1]) - mm.fbar;
        prefix[j] = running;
        if (prefix[j] > prefix[best]) best = j;
    }

    std::vector<int> rotated(cycle.begin() + static_cast<std::ptrdiff_t>(best), cycle.end());
    rotated.insert(rotated.end(), cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>(best));
    SymbolicPoint point = make_point(sys, {}, rotated);

    Rat sum(0);
    for (std::size_t k = 0; k < 3 * q; ++k) {
        sum += f.weight(orbit_edge(point, static_cast<std::int64_t>(k))) - mm.fbar;
        if (sum > 0)
            throw std::logic_error("morris point internal check failure: positive prefix sum");
    }
    return point;
}

BalanceReport balance_check(const FiniteSystem& sys, const EdgeObservable& u) {
    check_binding(sys, u);
    MinMeanResult lo = karp_min_mean(sys, u);

    EdgeObservable neg;
    neg.weights.reserve(u.weights.size());
    for (const Rat& w : u.weights) neg.weights.push_back(-w);
    MinMeanResult hi = karp_min_mean(sys, neg);

    BalanceReport report;
    report.min_integral = lo.fbar;
    report.max_integral = -hi.fbar;
    report.min_witness = make_cycle_measure(sys, lo.witness_cycle);
    report.max_witness = make_cycle_measure(sys, hi.witness_cycle);
    report.balanced = report.min_integral == report.max_integral;
    return report;
}

}  // namespace ergopt
