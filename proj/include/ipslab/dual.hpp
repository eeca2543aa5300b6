#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "ipslab/dynamics.hpp"
#include "ipslab/error.hpp"
#include "ipslab/graph.hpp"
#include "ipslab/graphical.hpp"
#include "ipslab/rng.hpp"

namespace ipslab {

struct Coalescence {
    double t = 0.0;
    std::uint32_t survivor = 0;
    std::uint32_t absorbed = 0;
};

/// Walker i starts at starts[i]; after a merge the smaller id survives.
struct WalkerSet {
    std::vector<Vertex> positions;
    std::vector<bool> alive;
    std::vector<Coalescence> events;
    double end_time = 0.0;
    bool capped = false;  // tmax reached with more than one mobile cluster left

    std::size_t alive_count() const {
        return static_cast<std::size_t>(std::count(alive.begin(), alive.end(), true));
    }
};

/// Coalescing rate-1 random walks, each step to a uniform incident half-edge's
/// far end. Runs until one walker is left, no walker can move, or tmax.
inline WalkerSet coalescing_walks(const Graph& g, const std::vector<Vertex>& starts, double tmax,
                                  std::uint64_t seed) {
    if (starts.empty()) throw PreconditionError("coalescing walks need at least one walker");
    const Topology topo(g);
    WalkerSet w;
    w.positions = starts;
    w.alive.assign(starts.size(), true);
    constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> occ(g.n, none);
    // Walkers that can move, with index into `mobile` for O(1) removal.
    std::vector<std::uint32_t> mobile;
    std::vector<std::uint32_t> where(starts.size(), none);
    auto make_mobile = [&](std::uint32_t id) {
        if (topo.degree(w.positions[id]) == 0) return;
        where[id] = static_cast<std::uint32_t>(mobile.size());
        mobile.push_back(id);
    };
    auto drop_mobile = [&](std::uint32_t id) {
        if (where[id] == none) return;
        const auto last = mobile.back();
        mobile[where[id]] = last;
        where[last] = where[id];
        mobile.pop_back();
        where[id] = none;
    };
    auto merge = [&](std::uint32_t a, std::uint32_t b, double t) {
        const auto keep = std::min(a, b), gone = std::max(a, b);
        w.alive[gone] = false;
        drop_mobile(gone);
        occ[w.positions[keep]] = keep;
        w.events.push_back({t, keep, gone});
    };
    for (std::uint32_t id = 0; id < starts.size(); ++id) {
        if (starts[id] >= g.n) throw ParameterError("walker start outside the graph");
        const auto v = starts[id];
        if (occ[v] != none) {
            w.alive[id] = false;
            w.events.push_back({0.0, occ[v], id});
        } else {
            occ[v] = id;
            make_mobile(id);
        }
    }
    Rng rng(seed);
    double t = 0.0;
    std::size_t alive = w.alive_count();
    while (alive > 1 && !mobile.empty()) {
        const double next = t + rng.exponential(static_cast<double>(mobile.size()));
        if (next > tmax) {
            t = tmax;
            w.capped = true;
            break;
        }
        t = next;
        const auto id = mobile[rng.below(mobile.size())];
        const auto from = w.positions[id];
        const auto s = topo.slots(from);
        const auto to = topo.across(s[rng.below(s.size())]);
        if (to == from) continue;
        occ[from] = none;
        w.positions[id] = to;
        if (occ[to] != none) {
            merge(id, occ[to], t);
            --alive;
        } else {
            occ[to] = id;
        }
    }
    // Several separated walkers that can never move again count as capped too.
    if (alive > 1 && mobile.empty()) w.capped = true;
    w.end_time = t;
    return w;
}

struct MeetingResult {
    double tau = 0.0;
    bool capped = false;
};

/// First meeting of two independent rate-1 walks from x and y.
inline MeetingResult meeting_time(const Graph& g, Vertex x, Vertex y, std::uint64_t seed, double cap) {
    if (x >= g.n || y >= g.n) throw ParameterError("start vertex outside the graph");
    if (x == y) return {0.0, false};
    const auto w = coalescing_walks(g, {x, y}, cap, seed);
    if (w.events.empty()) return {cap, true};
    return {w.events.front().t, false};
}

/// Meeting time with both starts drawn independently in proportion to degree.
inline MeetingResult meeting_time_stationary(const Graph& g, std::uint64_t seed, double cap) {
    if (g.edges.empty()) throw PreconditionError("stationary starts need at least one edge");
    Rng rng(mix64(seed ^ 0x5DEECE66DULL));
    auto draw = [&]() {
        const auto e = g.edges[rng.below(g.edges.size())];
        return rng.below(2) == 0 ? e.u : e.v;
    };
    const Vertex x = draw();
    const Vertex y = draw();
    return meeting_time(g, x, y, seed, cap);
}

/// Time until a single walker remains, one walker starting on every vertex.
inline MeetingResult coalescence_time_full(const Graph& g, std::uint64_t seed, double cap) {
    if (g.n == 0) throw PreconditionError("empty graph");
    if (g.n == 1) return {0.0, false};
    std::vector<Vertex> starts(g.n);
    std::iota(starts.begin(), starts.end(), Vertex{0});
    const auto w = coalescing_walks(g, starts, cap, seed);
    if (w.capped) return {cap, true};
    return {w.end_time, false};
}

/// sum_{i=2}^{n} 1 / C(i, 2), exactly.
inline Rational kingman_ratio(std::int64_t n) {
    if (n < 2) throw DomainError("kingman_ratio needs n >= 2");
    Rational s(0);
    for (std::int64_t i = 2; i <= n; ++i) s += Rational(2, i * (i - 1));
    return s;
}

/// Vertex whose initial opinion each vertex holds at t0, found by walking the
/// arrows backwards from (i, t0) with coalescing lineages.
inline std::vector<Vertex> ancestors(const GraphicalRep& rep) {
    constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> at(rep.n), parent(rep.n);
    std::vector<Vertex> pos(rep.n);
    for (std::uint32_t i = 0; i < rep.n; ++i) at[i] = parent[i] = pos[i] = i;
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    const auto arrows = rep.time_ordered();
    for (auto it = arrows.rbegin(); it != arrows.rend(); ++it) {
        const auto r = at[it->i];
        if (r == none || it->i == it->j) continue;
        at[it->i] = none;
        if (at[it->j] == none) {
            at[it->j] = r;
            pos[r] = it->j;
        } else {
            parent[r] = at[it->j];
        }
    }
    std::vector<Vertex> anc(rep.n);
    for (std::uint32_t i = 0; i < rep.n; ++i) anc[i] = pos[find(i)];
    return anc;
}

/// Configuration at t0 obtained by duality: vertex i carries init[ancestor(i)].
inline Configuration trace_back(const GraphicalRep& rep, const Configuration& init) {
    if (init.size() != rep.n) throw ParameterError("configuration length differs from representation");
    const auto anc = ancestors(rep);
    Configuration out(rep.n);
    for (std::size_t i = 0; i < rep.n; ++i) out[i] = init[anc[i]];
    return out;
}

/// Monte Carlo survival P(tau_meet > t) for two rate-1 walkers started on
/// adjacent vertices of the infinite d-regular tree. On a tree only their
/// distance matters: each jump (total rate 2) shortens it with probability 1/d.
inline std::vector<double> tree_pair_survival(std::size_t d, const std::vector<double>& times, std::uint64_t seed,
                                              std::size_t reps) {
    if (d < 2) throw DomainError("tree degree must be >= 2");
    if (reps == 0) throw ParameterError("reps must be >= 1");
    const double horizon = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
    std::vector<std::size_t> alive(times.size(), 0);
    Rng rng(seed);
    for (std::size_t r = 0; r < reps; ++r) {
        double t = 0.0;
        std::size_t dist = 1;
        while (dist > 0) {
            t += rng.exponential(2.0);
            if (t > horizon) break;
            if (rng.below(d) == 0)
                --dist;
            else
                ++dist;
        }
        const double meet = dist == 0 ? t : std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < times.size(); ++k)
            if (meet > times[k]) ++alive[k];
    }
    std::vector<double> out(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) out[k] = static_cast<double>(alive[k]) / static_cast<double>(reps);
    return out;
}

}  // namespace ipslab
