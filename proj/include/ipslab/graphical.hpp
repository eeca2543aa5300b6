#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ipslab/error.hpp"
#include "ipslab/graph.hpp"
#include "ipslab/model.hpp"
#include "ipslab/rng.hpp"

namespace ipslab {

/// Voter arrow: at time t vertex i adopts the opinion of j.
struct Arrow {
    double t = 0.0;
    Vertex i = 0;
    Vertex j = 0;
};

/// Poisson arrows of the voter model on [0, t0]. arrows[i] lists the ring
/// times of vertex i in increasing order, each with the chosen neighbour.
struct GraphicalRep {
    std::size_t n = 0;
    double t0 = 0.0;

    struct Mark {
        double t = 0.0;
        Vertex j = 0;
    };
    std::vector<std::vector<Mark>> arrows;

    GraphicalRep() = default;
    GraphicalRep(std::size_t vertices, double horizon) : n(vertices), t0(horizon), arrows(vertices) {}

    /// Inserts an explicit arrow (keeps per-vertex order).
    void add(Vertex i, double t, Vertex j) {
        if (i >= n || j >= n) throw ParameterError("arrow endpoint outside the graph");
        if (!(t > 0.0 && t <= t0)) throw ParameterError("arrow time outside (0, t0]");
        auto& list = arrows[i];
        const auto pos = std::upper_bound(list.begin(), list.end(), t,
                                          [](double x, const Mark& m) { return x < m.t; });
        list.insert(pos, Mark{t, j});
    }

    std::size_t event_count() const noexcept {
        std::size_t k = 0;
        for (const auto& a : arrows) k += a.size();
        return k;
    }

    /// All arrows in increasing time; equal times are ordered by vertex.
    std::vector<Arrow> time_ordered() const {
        std::vector<Arrow> out;
        out.reserve(event_count());
        for (Vertex i = 0; i < n; ++i)
            for (const auto& m : arrows[i]) out.push_back({m.t, i, m.j});
        std::stable_sort(out.begin(), out.end(), [](const Arrow& a, const Arrow& b) { return a.t < b.t; });
        return out;
    }
};

/// Rate-1 Poisson clocks on every non-isolated vertex up to t0, each ring
/// marked with a uniform incident half-edge's far end (out-neighbour for
/// directed graphs).
inline GraphicalRep build_graphical_rep(const Graph& g, double t0, std::uint64_t seed) {
    if (!(t0 > 0.0)) throw ParameterError("horizon t0 must be > 0");
    const Topology topo(g);
    GraphicalRep rep(g.n, t0);
    Rng rng(seed);
    for (Vertex i = 0; i < g.n; ++i) {
        const auto slots = topo.slots(i);
        if (slots.empty()) continue;
        double t = rng.exponential(1.0);
        while (t <= t0) {
            rep.arrows[i].push_back({t, topo.across(slots[rng.below(slots.size())])});
            t += rng.exponential(1.0);
        }
    }
    return rep;
}

/// Applies the arrows forward in time: at (t, i, j) vertex i takes the current opinion of j.
inline Configuration evolve_forward(const GraphicalRep& rep, Configuration init) {
    if (init.size() != rep.n) throw ParameterError("configuration length differs from representation");
    for (const auto& a : rep.time_ordered()) init[a.i] = init[a.j];
    return init;
}

}  // namespace ipslab
