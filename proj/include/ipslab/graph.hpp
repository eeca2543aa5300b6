#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "ipslab/error.hpp"

namespace ipslab {

using Vertex = std::uint32_t;
using Rational = boost::rational<std::int64_t>;

/// Endpoint pair. For directed graphs (u, v) is the arc u -> v; u == v is a self-loop.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite multigraph on vertices 0..n-1. Repeated pairs encode multiplicity.
struct Graph {
    std::size_t n = 0;
    bool directed = false;
    std::vector<Edge> edges;

    std::size_t edge_count() const noexcept { return edges.size(); }

    void validate() const {
        for (const auto& e : edges) {
            if (e.u >= n || e.v >= n)
                throw ParameterError("edge endpoint outside [0, n)");
        }
    }

    friend bool operator==(const Graph&, const Graph&) = default;
};

struct DegreeSequence {
    std::vector<std::size_t> degrees;

    std::size_t total() const noexcept {
        std::size_t s = 0;
        for (auto d : degrees) s += d;
        return s;
    }
};

/// Undirected degrees; a self-loop contributes 2. For directed graphs this is
/// in-degree plus out-degree.
inline std::vector<std::size_t> degrees(const Graph& g) {
    std::vector<std::size_t> deg(g.n, 0);
    for (const auto& e : g.edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

inline std::vector<std::size_t> out_degrees(const Graph& g) {
    std::vector<std::size_t> deg(g.n, 0);
    for (const auto& e : g.edges) ++deg[e.u];
    return deg;
}

inline std::vector<std::size_t> in_degrees(const Graph& g) {
    std::vector<std::size_t> deg(g.n, 0);
    for (const auto& e : g.edges) ++deg[e.v];
    return deg;
}

struct DegreeStats {
    std::size_t d_min = 0;
    std::size_t d_max = 0;
    Rational d_ave;  // equals m1
    Rational m1;
    Rational m2;
};

inline DegreeStats degree_stats(std::span<const std::size_t> deg) {
    if (deg.empty()) throw DomainError("degree statistics of an empty graph");
    DegreeStats s;
    s.d_min = *std::min_element(deg.begin(), deg.end());
    s.d_max = *std::max_element(deg.begin(), deg.end());
    std::int64_t sum = 0;
    std::int64_t sum_sq = 0;
    for (auto d : deg) {
        sum += static_cast<std::int64_t>(d);
        sum_sq += static_cast<std::int64_t>(d) * static_cast<std::int64_t>(d);
    }
    const auto n = static_cast<std::int64_t>(deg.size());
    s.m1 = Rational(sum, n);
    s.d_ave = s.m1;
    s.m2 = Rational(sum_sq, n);
    return s;
}

/// Statistics of the undirected degree multiset.
inline DegreeStats degree_stats(const Graph& g) {
    if (g.n == 0) throw DomainError("degree statistics of an empty graph");
    const auto deg = degrees(g);
    return degree_stats(std::span<const std::size_t>(deg));
}

struct DirectedDegreeStats {
    DegreeStats in;
    DegreeStats out;
};

inline DirectedDegreeStats directed_degree_stats(const Graph& g) {
    if (g.n == 0) throw DomainError("degree statistics of an empty graph");
    const auto din = in_degrees(g);
    const auto dout = out_degrees(g);
    return {degree_stats(std::span<const std::size_t>(din)),
            degree_stats(std::span<const std::size_t>(dout))};
}

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Half-edge view of a Graph used by every dynamics engine.
///
/// Edge e owns half-edges 2e (at e.u) and 2e+1 (at e.v). Each vertex owns a
/// contiguous block of slots holding the ids of its half-edges; the neighbour
/// across half-edge h is owner(h ^ 1). For directed graphs only out-halves
/// (2e) occupy the out-slots and in-halves (2e+1) occupy separate in-slots.
///
/// swap_halves exchanges the owners of two half-edges; it is the primitive
/// behind degree-preserving rewiring and keeps every slot block intact.
class Topology {
  public:
    Topology() = default;

    explicit Topology(const Graph& g) : n_(g.n), m_(g.edges.size()), directed_(g.directed) {
        g.validate();
        owner_.resize(2 * m_);
        for (std::size_t e = 0; e < m_; ++e) {
            owner_[2 * e] = g.edges[e].u;
            owner_[2 * e + 1] = g.edges[e].v;
        }
        pos_.assign(2 * m_, 0);
        if (!directed_) {
            build_block(out_off_, out_slots_, [](std::size_t) { return true; });
        } else {
            build_block(out_off_, out_slots_, [](std::size_t h) { return (h & 1) == 0; });
            build_block(in_off_, in_slots_, [](std::size_t h) { return (h & 1) == 1; });
        }
    }

    std::size_t vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return m_; }
    bool directed() const noexcept { return directed_; }

    /// Half-edges at v (out-halves for directed graphs).
    std::span<const std::uint32_t> slots(Vertex v) const noexcept {
        return {out_slots_.data() + out_off_[v], out_off_[v + 1] - out_off_[v]};
    }

    /// Half-edges whose partner's state determines v's neighbours' view of v:
    /// for undirected graphs the same as slots(v); for directed graphs the in-halves.
    std::span<const std::uint32_t> in_slots(Vertex v) const noexcept {
        if (!directed_) return slots(v);
        return {in_slots_.data() + in_off_[v], in_off_[v + 1] - in_off_[v]};
    }

    std::size_t degree(Vertex v) const noexcept { return out_off_[v + 1] - out_off_[v]; }

    Vertex owner(std::uint32_t half) const noexcept { return owner_[half]; }
    Vertex across(std::uint32_t half) const noexcept { return owner_[half ^ 1u]; }

    Edge edge(std::size_t e) const noexcept { return {owner_[2 * e], owner_[2 * e + 1]}; }

    /// Exchange the vertices owning half-edges a and b (undirected only).
    void swap_halves(std::uint32_t a, std::uint32_t b) {
        if (directed_) throw PreconditionError("rewiring requires an undirected graph");
        if (a == b) return;
        const auto pa = pos_[a];
        const auto pb = pos_[b];
        std::swap(out_slots_[pa], out_slots_[pb]);
        pos_[a] = pb;
        pos_[b] = pa;
        std::swap(owner_[a], owner_[b]);
    }

    Graph to_graph() const {
        Graph g;
        g.n = n_;
        g.directed = directed_;
        g.edges.reserve(m_);
        for (std::size_t e = 0; e < m_; ++e) g.edges.push_back(edge(e));
        return g;
    }

    std::vector<std::size_t> degree_vector() const {
        std::vector<std::size_t> d(n_);
        for (Vertex v = 0; v < n_; ++v) d[v] = degree(v);
        return d;
    }

  private:
    template <class Keep>
    void build_block(std::vector<std::size_t>& off, std::vector<std::uint32_t>& slots, Keep keep) {
        off.assign(n_ + 1, 0);
        for (std::size_t h = 0; h < owner_.size(); ++h)
            if (keep(h)) ++off[owner_[h] + 1];
        for (std::size_t v = 0; v < n_; ++v) off[v + 1] += off[v];
        slots.assign(off[n_], 0);
        std::vector<std::size_t> fill(off.begin(), off.end() - 1);
        for (std::size_t h = 0; h < owner_.size(); ++h) {
            if (!keep(h)) continue;
            const auto p = fill[owner_[h]]++;
            slots[p] = static_cast<std::uint32_t>(h);
            pos_[h] = p;
        }
    }

    std::size_t n_ = 0;
    std::size_t m_ = 0;
    bool directed_ = false;
    std::vector<Vertex> owner_;
    std::vector<std::size_t> pos_;
    std::vector<std::size_t> out_off_;
    std::vector<std::uint32_t> out_slots_;
    std::vector<std::size_t> in_off_;
    std::vector<std::uint32_t> in_slots_;
};

/// Connected-component label per vertex (weak components for directed graphs).
inline std::vector<std::uint32_t> component_labels(const Graph& g, std::size_t* count = nullptr) {
    std::vector<std::uint32_t> parent(g.n);
    for (std::size_t i = 0; i < g.n; ++i) parent[i] = static_cast<std::uint32_t>(i);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& e : g.edges) {
        const auto a = find(e.u);
        const auto b = find(e.v);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::uint32_t> label(g.n);
    std::vector<std::uint32_t> remap(g.n, ~0u);
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const auto r = find(static_cast<std::uint32_t>(i));
        if (remap[r] == ~0u) remap[r] = next++;
        label[i] = remap[r];
    }
    if (count) *count = next;
    return label;
}

}  // namespace ipslab
