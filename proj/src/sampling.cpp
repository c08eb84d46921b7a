#include "ergopt/sampling.hpp"

#include <stdexcept>

namespace ergopt {

FiniteSystem full_two_shift() {
    return build_finite_system({"0", "1"}, {{"00", "0", "0", std::nullopt},
                                            {"01", "0", "1", std::nullopt},
                                            {"10", "1", "0", std::nullopt},
                                            {"11", "1", "1", std::nullopt}});
}

EdgeObservable two_shift_weights(const FiniteSystem& sys, const Rat& w00, const Rat& w01,
                                 const Rat& w10, const Rat& w11) {
    return make_edge_observable(sys, {{"00", w00}, {"01", w01}, {"10", w10}, {"11", w11}});
}

FiniteSystem random_system(std::mt19937_64& rng, int max_vertices, int max_edges) {
    std::uniform_int_distribution<int> nv_dist(2, max_vertices);
    const int nv = nv_dist(rng);
    std::uniform_int_distribution<int> vdist(0, nv - 1);

    std::vector<std::string> vertices;
    vertices.reserve(static_cast<std::size_t>(nv));
    for (int v = 0; v < nv; ++v) vertices.push_back("v" + std::to_string(v));

    std::vector<EdgeDecl> edges;
    for (int v = 0; v < nv; ++v)
        edges.push_back({"e" + std::to_string(v), vertices[static_cast<std::size_t>(v)],
                         vertices[static_cast<std::size_t>(vdist(rng))], std::nullopt});

    std::uniform_int_distribution<int> extra_dist(0, max_edges - nv);
    const int extra = extra_dist(rng);
    for (int i = 0; i < extra; ++i)
        edges.push_back({"e" + std::to_string(nv + i), vertices[static_cast<std::size_t>(vdist(rng))],
                         vertices[static_cast<std::size_t>(vdist(rng))], std::nullopt});

    return build_finite_system(vertices, edges);
}

EdgeObservable random_integer_weights(std::mt19937_64& rng, const FiniteSystem& sys, long lo,
                                      long hi) {
    std::uniform_int_distribution<long> dist(lo, hi);
    EdgeObservable obs;
    obs.weights.reserve(static_cast<std::size_t>(sys.num_edges()));
    for (int e = 0; e < sys.num_edges(); ++e) obs.weights.emplace_back(dist(rng));
    return obs;
}

EdgeObservable random_rational_weights(std::mt19937_64& rng, const FiniteSystem& sys,
                                       long num_range, long den_range) {
    std::uniform_int_distribution<long> num_dist(-num_range, num_range);
    std::uniform_int_distribution<long> den_dist(1, den_range);
    EdgeObservable obs;
    obs.weights.reserve(static_cast<std::size_t>(sys.num_edges()));
    for (int e = 0; e < sys.num_edges(); ++e) {
        Rat w(num_dist(rng), den_dist(rng));
        w.canonicalize();
        obs.weights.push_back(std::move(w));
    }
    return obs;
}

std::vector<SymbolicPoint> enumerate_points(const FiniteSystem& sys, int max_pre, int max_cyc) {
    std::vector<std::vector<int>> preperiods{{}};
    std::size_t begin = 0;
    for (int len = 1; len <= max_pre; ++len) {
        const std::size_t end = preperiods.size();
        for (std::size_t i = begin; i < end; ++i) {
            const auto p = preperiods[i];  // copy: the vector reallocates below
            if (p.empty()) {
                for (int e = 0; e < sys.num_edges(); ++e) {
                    auto q = p;
                    q.push_back(e);
                    preperiods.push_back(std::move(q));
                }
            } else {
                int v = sys.edges[static_cast<std::size_t>(p.back())].to;
                for (int e : sys.out_edges[static_cast<std::size_t>(v)]) {
                    auto q = p;
                    q.push_back(e);
                    preperiods.push_back(std::move(q));
                }
            }
        }
        begin = end;
    }

    std::vector<SymbolicPoint> points;
    std::vector<int> path;
    for (const auto& pre : preperiods) {
        std::vector<int> starts;
        if (pre.empty()) {
            for (int v = 0; v < sys.num_vertices(); ++v) starts.push_back(v);
        } else {
            starts.push_back(sys.edges[static_cast<std::size_t>(pre.back())].to);
        }
        for (int root : starts) {
            auto dfs = [&](auto&& self, int at) -> void {
                for (int e : sys.out_edges[static_cast<std::size_t>(at)]) {
                    int to = sys.edges[static_cast<std::size_t>(e)].to;
                    path.push_back(e);
                    if (to == root) points.push_back(SymbolicPoint{pre, path});
                    if (static_cast<int>(path.size()) < max_cyc) self(self, to);
                    path.pop_back();
                }
            };
            path.clear();
            dfs(dfs, root);
        }
    }
    return points;
}

SymbolicPoint random_point(std::mt19937_64& rng, const FiniteSystem& sys, int max_pre) {
    std::uniform_int_distribution<int> pre_len_dist(0, max_pre);
    std::uniform_int_distribution<int> start_dist(0, sys.num_vertices() - 1);
    const int pre_len = pre_len_dist(rng);

    auto step = [&](int v) {
        const auto& out = sys.out_edges[static_cast<std::size_t>(v)];
        std::uniform_int_distribution<std::size_t> pick(0, out.size() - 1);
        return out[pick(rng)];
    };

    std::vector<int> walk;
    int at = start_dist(rng);
    for (int i = 0; i < pre_len; ++i) {
        int e = step(at);
        walk.push_back(e);
        at = sys.edges[static_cast<std::size_t>(e)].to;
    }

    // Continue walking until a vertex repeats; the loop becomes the cycle.
    std::vector<int> seen_at(static_cast<std::size_t>(sys.num_vertices()), -1);
    std::vector<int> tail;
    seen_at[static_cast<std::size_t>(at)] = 0;
    while (true) {
        int e = step(at);
        tail.push_back(e);
        at = sys.edges[static_cast<std::size_t>(e)].to;
        if (seen_at[static_cast<std::size_t>(at)] >= 0) break;
        seen_at[static_cast<std::size_t>(at)] = static_cast<int>(tail.size());
    }
    const int cycle_start = seen_at[static_cast<std::size_t>(at)];
    std::vector<int> pre = walk;
    pre.insert(pre.end(), tail.begin(), tail.begin() + cycle_start);
    std::vector<int> cycle(tail.begin() + cycle_start, tail.end());
    return make_point(sys, pre, cycle);
}

}  // namespace ergopt
