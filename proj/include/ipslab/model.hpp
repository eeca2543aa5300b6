#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ipslab/error.hpp"
#include "ipslab/graph.hpp"

namespace ipslab {

/// One state per vertex: {-1, +1} for the Ising model, {0, 1} for voter and contact.
using Configuration = std::vector<std::int8_t>;

namespace model {

/// Stochastic Ising model with Glauber rates exp(-beta [dH]_+).
/// If `couplings` is non-empty it holds J_e per edge and replaces J.
struct SIM {
    double beta = 1.0;
    double J = 1.0;
    double h = 0.0;
    std::vector<double> couplings;
};

/// Voter model: each vertex at rate 1 copies a uniform neighbour (out-neighbour
/// for directed graphs), multi-edges weighted by multiplicity.
struct VM {};

/// Contact process: infected vertices recover at rate 1; a healthy vertex is
/// infected at rate lambda times its number of infected neighbours.
struct CP {
    double lambda = 1.0;
};

}  // namespace model

using ModelParams = std::variant<model::SIM, model::VM, model::CP>;

inline bool is_sim(const ModelParams& m) { return std::holds_alternative<model::SIM>(m); }
inline bool is_vm(const ModelParams& m) { return std::holds_alternative<model::VM>(m); }
inline bool is_cp(const ModelParams& m) { return std::holds_alternative<model::CP>(m); }

inline std::string model_name(const ModelParams& m) {
    return is_sim(m) ? "sim" : is_vm(m) ? "vm" : "cp";
}

inline void validate_model(const ModelParams& m, std::size_t edge_count) {
    if (const auto* s = std::get_if<model::SIM>(&m)) {
        if (!(s->beta >= 0.0) || !std::isfinite(s->beta)) throw ParameterError("beta must be finite and >= 0");
        if (!(s->h >= 0.0) || !std::isfinite(s->h)) throw ParameterError("h must be finite and >= 0");
        if (s->couplings.empty()) {
            if (!(s->J > 0.0) || !std::isfinite(s->J)) throw ParameterError("J must be finite and > 0");
        } else {
            if (s->couplings.size() != edge_count) throw ParameterError("coupling vector needs one entry per edge");
            for (double j : s->couplings)
                if (!(j >= 0.0) || !std::isfinite(j)) throw ParameterError("couplings must be finite and >= 0");
        }
    } else if (const auto* c = std::get_if<model::CP>(&m)) {
        if (!(c->lambda > 0.0) || !std::isfinite(c->lambda)) throw ParameterError("lambda must be finite and > 0");
    }
}

inline void validate_configuration(const ModelParams& m, const Configuration& c, std::size_t n) {
    if (c.size() != n) throw ParameterError("configuration length differs from vertex count");
    const bool spins = is_sim(m);
    for (auto s : c) {
        const bool ok = spins ? (s == -1 || s == 1) : (s == 0 || s == 1);
        if (!ok) throw ParameterError(spins ? "Ising states must be -1 or +1" : "states must be 0 or 1");
    }
}

inline double coupling(const model::SIM& s, std::size_t edge) {
    return s.couplings.empty() ? s.J : s.couplings[edge];
}

/// H(sigma) = -sum_e J_e sigma_u sigma_v - h sum_i sigma_i over the edge multiset
/// (self-loops included as the constant J_e).
inline double hamiltonian(const Graph& g, const Configuration& c, const model::SIM& s) {
    if (!s.couplings.empty() && s.couplings.size() != g.edges.size())
        throw ParameterError("coupling vector needs one entry per edge");
    if (c.size() != g.n) throw ParameterError("configuration length differs from vertex count");
    double pair = 0.0;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        pair += coupling(s, e) * c[g.edges[e].u] * c[g.edges[e].v];
    double field = 0.0;
    for (auto x : c) field += x;
    return -pair - s.h * field;
}

inline double hamiltonian(const Graph& g, const Configuration& c, double J, double h) {
    return hamiltonian(g, c, model::SIM{1.0, J, h, {}});
}

/// Energy change of flipping v: 2 sigma_v (sum_{non-loop e at v} J_e sigma_nbr + h).
inline double delta_energy(const Topology& t, const Configuration& c, const model::SIM& s, Vertex v) {
    double local = 0.0;
    auto add = [&](std::uint32_t half) {
        const Vertex w = t.across(half);
        if (w != v) local += coupling(s, half >> 1) * c[w];
    };
    for (auto h : t.slots(v)) add(h);
    if (t.directed())
        for (auto h : t.in_slots(v)) add(h);
    return 2.0 * c[v] * (local + s.h);
}

inline double glauber_rate(double beta, double dH) { return dH > 0.0 ? std::exp(-beta * dH) : 1.0; }

/// Rate at which v changes state in configuration c.
inline double flip_rate(const ModelParams& m, const Topology& t, const Configuration& c, Vertex v) {
    if (const auto* s = std::get_if<model::SIM>(&m)) return glauber_rate(s->beta, delta_energy(t, c, *s, v));
    const auto slots = t.slots(v);
    if (slots.empty()) return 0.0;
    std::size_t infected = 0;
    std::size_t opposite = 0;
    for (auto h : slots) {
        const Vertex w = t.across(h);
        if (w == v) continue;
        infected += c[w] == 1;
        opposite += c[w] != c[v];
    }
    if (is_vm(m)) return static_cast<double>(opposite) / static_cast<double>(slots.size());
    const double lambda = std::get<model::CP>(m).lambda;
    return c[v] == 1 ? 1.0 : lambda * static_cast<double>(infected);
}

inline double flip_rate(const ModelParams& m, const Graph& g, const Configuration& c, Vertex v) {
    if (v >= g.n) throw ParameterError("vertex outside the graph");
    return flip_rate(m, Topology(g), c, v);
}

/// State of v after a flip.
inline std::int8_t flipped(const ModelParams& m, std::int8_t s) {
    return is_sim(m) ? static_cast<std::int8_t>(-s) : static_cast<std::int8_t>(1 - s);
}

}  // namespace ipslab
