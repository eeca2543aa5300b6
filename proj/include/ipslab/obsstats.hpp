#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ipslab/error.hpp"
#include "ipslab/graph.hpp"
#include "ipslab/model.hpp"

namespace ipslab {

enum class Observable { magnetisation, ones_fraction, infected_fraction, discordant_fraction };

inline std::string to_string(Observable o) {
    switch (o) {
        case Observable::magnetisation: return "magnetisation";
        case Observable::ones_fraction: return "ones_fraction";
        case Observable::infected_fraction: return "infected_fraction";
        case Observable::discordant_fraction: return "discordant_fraction";
    }
    return "?";
}

inline Observable observable_from_string(const std::string& s) {
    if (s == "magnetisation" || s == "magnetization") return Observable::magnetisation;
    if (s == "ones_fraction") return Observable::ones_fraction;
    if (s == "infected_fraction") return Observable::infected_fraction;
    if (s == "discordant_fraction") return Observable::discordant_fraction;
    throw ConfigError("unknown observable \"" + s + "\"");
}

/// Mean spin over vertices, for {-1, +1} configurations.
inline double magnetisation(const Configuration& c) {
    if (c.empty()) throw DomainError("magnetisation of an empty configuration");
    double s = 0.0;
    for (auto x : c) s += x;
    return s / static_cast<double>(c.size());
}

/// Fraction of vertices in state 1 (for spins, fraction of +1).
inline double ones_fraction(const Configuration& c) {
    if (c.empty()) throw DomainError("fraction of an empty configuration");
    std::size_t k = 0;
    for (auto x : c) k += x == 1;
    return static_cast<double>(k) / static_cast<double>(c.size());
}

inline double infected_fraction(const Configuration& c) { return ones_fraction(c); }

/// Discordant edges (with multiplicity) over all edges; self-loops count in the
/// denominator only.
inline double discordant_fraction(const Graph& g, const Configuration& c) {
    if (g.edges.empty()) throw DomainError("discordant fraction of an edgeless graph");
    std::size_t d = 0;
    for (const auto& e : g.edges) d += c[e.u] != c[e.v];
    return static_cast<double>(d) / static_cast<double>(g.edges.size());
}

inline double discordant_fraction(const Topology& t, const Configuration& c) {
    if (t.edge_count() == 0) throw DomainError("discordant fraction of an edgeless graph");
    std::size_t d = 0;
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
        const auto x = t.owner(static_cast<std::uint32_t>(2 * e));
        const auto y = t.owner(static_cast<std::uint32_t>(2 * e + 1));
        d += c[x] != c[y];
    }
    return static_cast<double>(d) / static_cast<double>(t.edge_count());
}

inline double observe(Observable o, const Topology& t, const Configuration& c) {
    switch (o) {
        case Observable::magnetisation: return magnetisation(c);
        case Observable::ones_fraction: return ones_fraction(c);
        case Observable::infected_fraction: return infected_fraction(c);
        case Observable::discordant_fraction: return discordant_fraction(t, c);
    }
    return 0.0;
}

struct MeanCI {
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
    double ci95 = 0.0;  // half-width, normal approximation
    std::size_t count = 0;
};

/// Sample mean, unbiased standard deviation, standard error and 95% half-width.
inline MeanCI mean_ci(std::span<const double> x) {
    if (x.size() < 2) throw DomainError("mean_ci needs at least two samples");
    // Sorting first makes the result independent of sample order.
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    double mean = 0.0;
    for (double a : v) mean += a;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double a : v) ss += (a - mean) * (a - mean);
    MeanCI r;
    r.count = v.size();
    r.mean = mean;
    r.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    r.se = r.sd / std::sqrt(static_cast<double>(v.size()));
    r.ci95 = 1.959963984540054 * r.se;
    return r;
}

inline MeanCI mean_ci(const std::vector<double>& x) { return mean_ci(std::span<const double>(x)); }

/// Two-sided Kolmogorov-Smirnov statistic sup |F_n - F|.
inline double ks_distance(std::span<const double> x, const std::function<double(double)>& cdf) {
    if (x.empty()) throw DomainError("ks_distance needs samples");
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = cdf(v[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

inline double ks_distance(const std::vector<double>& x, const std::function<double(double)>& cdf) {
    return ks_distance(std::span<const double>(x), cdf);
}

/// Two-sample KS statistic sup |F_a - F_b|.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample needs samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        const double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// Median of a sample (mean of the two central values for even sizes).
inline double median(std::vector<double> v) {
    if (v.empty()) throw DomainError("median of an empty sample");
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    if (v.size() % 2 == 1) return v[mid];
    const double hi = v[mid];
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

}  // namespace ipslab
