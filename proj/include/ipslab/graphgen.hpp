#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "ipslab/error.hpp"
#include "ipslab/graph.hpp"
#include "ipslab/rng.hpp"

namespace ipslab {

namespace spec {

struct Complete {
    std::size_t n = 0;
};

/// Periodic lattice (Z/side)^dim; vertex index = sum_k coord_k * side^k.
struct Torus {
    std::size_t dim = 1;
    std::size_t side = 2;
};

struct ER {
    std::size_t n = 0;
    double p = 0.0;
};

/// r(x, y) = v(x) v(y), with v piecewise constant on len(v) equal cells of [0, 1].
struct Rank1Kernel {
    std::vector<double> v;
};

/// r(x, y) = values[a][b] on a k-by-k grid of equal cells (row-major, must be symmetric).
struct GridKernel {
    std::size_t k = 0;
    std::vector<double> values;
};

struct ConstantKernel {
    double p = 0.0;
};

using Kernel = std::variant<Rank1Kernel, GridKernel, ConstantKernel>;

/// Inhomogeneous random graph: pair (i, j) present with probability r(x_i, x_j)
/// clipped to [0, 1], where x_i = (i + 1) / n.
struct Graphon {
    std::size_t n = 0;
    Kernel kernel;
};

struct ConfigModel {
    std::vector<std::size_t> degrees;
};

struct Regular {
    std::size_t n = 0;
    std::size_t d = 0;
};

/// Seed clique on m + 1 vertices, then each arriving vertex attaches m edges
/// whose far endpoints are drawn with replacement: uniformly with probability
/// gamma, degree-proportionally otherwise.
struct PrefAttach {
    std::size_t n = 0;
    std::size_t m = 1;
    double gamma = 0.0;
};

struct DirectedCM {
    std::vector<std::size_t> din;
    std::vector<std::size_t> dout;
};

}  // namespace spec

using GraphSpec = std::variant<spec::Complete, spec::Torus, spec::ER, spec::Graphon, spec::ConfigModel,
                               spec::Regular, spec::PrefAttach, spec::DirectedCM>;

namespace detail {

inline double kernel_cell(const std::vector<double>& v, double x) {
    const auto k = v.size();
    auto idx = static_cast<std::size_t>(x * static_cast<double>(k));
    if (idx >= k) idx = k - 1;
    return v[idx];
}

inline double kernel_value(const spec::Kernel& kernel, double x, double y) {
    return std::visit(
        [&](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, spec::Rank1Kernel>) {
                return kernel_cell(r.v, x) * kernel_cell(r.v, y);
            } else if constexpr (std::is_same_v<T, spec::GridKernel>) {
                auto a = static_cast<std::size_t>(x * static_cast<double>(r.k));
                auto b = static_cast<std::size_t>(y * static_cast<double>(r.k));
                a = std::min(a, r.k - 1);
                b = std::min(b, r.k - 1);
                return r.values[a * r.k + b];
            } else {
                return r.p;
            }
        },
        kernel);
}

inline void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError(std::string(what) + " must lie in [0, 1]");
}

/// Uniform perfect matching of a half-edge list: shuffle, then pair neighbours.
inline void pair_stubs(std::vector<Vertex>& stubs, Rng& rng, std::vector<Edge>& out) {
    shuffle(stubs.begin(), stubs.end(), rng);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) out.push_back({stubs[i], stubs[i + 1]});
}

inline Graph config_model(const std::vector<std::size_t>& deg, Rng& rng) {
    Graph g;
    g.n = deg.size();
    std::vector<Vertex> stubs;
    for (std::size_t v = 0; v < deg.size(); ++v) stubs.insert(stubs.end(), deg[v], static_cast<Vertex>(v));
    if (stubs.size() % 2 != 0) throw PreconditionError("half-edge total must be even");
    g.edges.reserve(stubs.size() / 2);
    pair_stubs(stubs, rng, g.edges);
    return g;
}

inline Graph gen(const spec::Complete& s, Rng&) {
    Graph g;
    g.n = s.n;
    g.edges.reserve(s.n * (s.n > 0 ? s.n - 1 : 0) / 2);
    for (std::size_t i = 0; i < s.n; ++i)
        for (std::size_t j = i + 1; j < s.n; ++j) g.edges.push_back({Vertex(i), Vertex(j)});
    return g;
}

inline Graph gen(const spec::Torus& s, Rng&) {
    if (s.dim < 1) throw ParameterError("torus dimension must be at least 1");
    if (s.side < 2) throw ParameterError("torus side must be at least 2");
    std::size_t n = 1;
    for (std::size_t k = 0; k < s.dim; ++k) n *= s.side;
    Graph g;
    g.n = n;
    g.edges.reserve(n * s.dim);
    for (std::size_t x = 0; x < n; ++x) {
        std::size_t stride = 1;
        for (std::size_t k = 0; k < s.dim; ++k) {
            const std::size_t coord = (x / stride) % s.side;
            const std::size_t y = coord + 1 == s.side ? x - coord * stride : x + stride;
            g.edges.push_back({Vertex(x), Vertex(y)});
            stride *= s.side;
        }
    }
    return g;
}

/// Geometric skipping over the pairs (w, v), w < v, in row order.
inline Graph gen(const spec::ER& s, Rng& rng) {
    check_probability(s.p, "edge probability p");
    Graph g;
    g.n = s.n;
    if (s.p == 0.0 || s.n < 2) return g;
    if (s.p == 1.0) return gen(spec::Complete{s.n}, rng);
    const double log_q = std::log1p(-s.p);
    std::int64_t v = 1;
    std::int64_t w = -1;
    const auto n = static_cast<std::int64_t>(s.n);
    while (v < n) {
        const double skip = std::floor(std::log(rng.uniform_pos()) / log_q);
        w += 1 + static_cast<std::int64_t>(std::min(skip, 9.0e18));
        while (w >= v && v < n) {
            w -= v;
            ++v;
        }
        if (v < n) g.edges.push_back({Vertex(w), Vertex(v)});
    }
    return g;
}

inline Graph gen(const spec::Graphon& s, Rng& rng) {
    std::visit(
        [](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, spec::Rank1Kernel>) {
                if (r.v.empty()) throw ParameterError("rank-1 weight vector is empty");
                for (double x : r.v)
                    if (!(x >= 0.0) || !std::isfinite(x)) throw ParameterError("rank-1 weights must be finite and >= 0");
            } else if constexpr (std::is_same_v<T, spec::GridKernel>) {
                if (r.k == 0 || r.values.size() != r.k * r.k) throw ParameterError("grid kernel must be k*k values");
                for (std::size_t a = 0; a < r.k; ++a)
                    for (std::size_t b = 0; b < r.k; ++b)
                        if (r.values[a * r.k + b] != r.values[b * r.k + a])
                            throw ParameterError("grid kernel must be symmetric");
            } else {
                check_probability(r.p, "constant kernel value");
            }
        },
        s.kernel);
    Graph g;
    g.n = s.n;
    const double n = static_cast<double>(s.n);
    for (std::size_t i = 0; i < s.n; ++i) {
        const double x = static_cast<double>(i + 1) / n;
        for (std::size_t j = i + 1; j < s.n; ++j) {
            const double y = static_cast<double>(j + 1) / n;
            const double p = std::clamp(kernel_value(s.kernel, x, y), 0.0, 1.0);
            if (rng.uniform() < p) g.edges.push_back({Vertex(i), Vertex(j)});
        }
    }
    return g;
}

inline Graph gen(const spec::ConfigModel& s, Rng& rng) { return config_model(s.degrees, rng); }

inline Graph gen(const spec::Regular& s, Rng& rng) {
    if (s.d < 1) throw ParameterError("regular degree must be at least 1");
    if ((s.n * s.d) % 2 != 0) throw ParameterError("regular graph requires n*d even");
    return config_model(std::vector<std::size_t>(s.n, s.d), rng);
}

inline Graph gen(const spec::PrefAttach& s, Rng& rng) {
    if (s.m < 1) throw ParameterError("attachment count m must be at least 1");
    if (!(s.gamma >= 0.0 && s.gamma < 1.0)) throw ParameterError("gamma must lie in [0, 1)");
    const std::size_t n0 = s.m + 1;
    if (s.n < n0) throw ParameterError("preferential attachment needs n >= m + 1");
    Graph g = gen(spec::Complete{n0}, rng);
    g.n = s.n;
    g.edges.reserve(g.edges.size() + s.m * (s.n - n0));
    // Every edge endpoint listed once: a uniform entry is a degree-biased vertex.
    std::vector<Vertex> ends;
    ends.reserve(2 * (g.edges.size() + s.m * (s.n - n0)));
    for (const auto& e : g.edges) {
        ends.push_back(e.u);
        ends.push_back(e.v);
    }
    std::vector<Vertex> targets(s.m);
    for (std::size_t v = n0; v < s.n; ++v) {
        for (auto& t : targets) {
            if (rng.uniform() < s.gamma)
                t = static_cast<Vertex>(rng.below(v));
            else
                t = ends[rng.below(ends.size())];
        }
        for (auto t : targets) {
            g.edges.push_back({Vertex(v), t});
            ends.push_back(Vertex(v));
            ends.push_back(t);
        }
    }
    return g;
}

inline Graph gen(const spec::DirectedCM& s, Rng& rng) {
    if (s.din.size() != s.dout.size()) throw ParameterError("din and dout must have equal length");
    const auto sin = std::accumulate(s.din.begin(), s.din.end(), std::size_t{0});
    const auto sout = std::accumulate(s.dout.begin(), s.dout.end(), std::size_t{0});
    if (sin != sout) throw ParameterError("sum(din) must equal sum(dout)");
    Graph g;
    g.n = s.din.size();
    g.directed = true;
    std::vector<Vertex> in_stubs;
    in_stubs.reserve(sin);
    for (std::size_t v = 0; v < g.n; ++v) in_stubs.insert(in_stubs.end(), s.din[v], Vertex(v));
    shuffle(in_stubs.begin(), in_stubs.end(), rng);
    g.edges.reserve(sout);
    std::size_t k = 0;
    for (std::size_t v = 0; v < g.n; ++v)
        for (std::size_t r = 0; r < s.dout[v]; ++r) g.edges.push_back({Vertex(v), in_stubs[k++]});
    return g;
}

}  // namespace detail

/// Build a graph from its family and a seed. Bit-identical for identical inputs.
inline Graph generate(const GraphSpec& s, std::uint64_t seed) {
    Rng rng(seed);
    return std::visit([&](const auto& x) { return detail::gen(x, rng); }, s);
}

/// n i.i.d. draws from the pmf f (f[k] = P(degree = k)), redrawn wholesale
/// until the total is even.
inline DegreeSequence sample_degrees(const std::vector<double>& f, std::size_t n, std::uint64_t seed) {
    if (f.empty()) throw ParameterError("degree pmf is empty");
    double total = 0.0;
    for (double x : f) {
        if (!(x >= 0.0)) throw ParameterError("degree pmf has a negative entry");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ParameterError("degree pmf must sum to 1 within 1e-12");

    bool has_even = false;
    for (std::size_t k = 0; k < f.size(); k += 2) has_even = has_even || f[k] > 0.0;
    if (!has_even && n % 2 == 1) throw PreconditionError("every draw is odd and n is odd: even total impossible");

    std::vector<double> cdf(f.size());
    std::partial_sum(f.begin(), f.end(), cdf.begin());
    std::size_t last = f.size() - 1;
    while (last > 0 && f[last] == 0.0) --last;

    Rng rng(seed);
    DegreeSequence out;
    out.degrees.resize(n);
    for (;;) {
        std::size_t sum = 0;
        for (auto& d : out.degrees) {
            const double u = rng.uniform() * total;
            auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            d = std::min(k, last);
            sum += d;
        }
        if (sum % 2 == 0) return out;
    }
}

}  // namespace ipslab
