#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "ipslab/error.hpp"

namespace ipslab::analytics {

/// I(m) = (1+m)/2 log(1+m) + (1-m)/2 log(1-m), with 0 log 0 = 0.
inline double entropy_I(double m) {
    if (!(std::abs(m) <= 1.0)) throw DomainError("entropy_I needs m in [-1, 1]");
    auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
    return 0.5 * (xlogx(1.0 + m) + xlogx(1.0 - m));
}

/// I^N(m) = -(1/N) log C(N, (1+m)N/2); (1+m)N/2 must be an integer.
inline double entropy_IN(double m, std::size_t N) {
    if (!(std::abs(m) <= 1.0)) throw DomainError("entropy_IN needs m in [-1, 1]");
    if (N == 0) throw DomainError("entropy_IN needs N >= 1");
    const double k = (1.0 + m) * static_cast<double>(N) / 2.0;
    const double kr = std::round(k);
    if (std::abs(k - kr) > 1e-9) throw DomainError("(1+m)N/2 must be an integer");
    const double n = static_cast<double>(N);
    const double log_binom = std::lgamma(n + 1.0) - std::lgamma(kr + 1.0) - std::lgamma(n - kr + 1.0);
    return -log_binom / n;
}

/// f(m) = -m^2/2 - h m + I(m)/beta.
inline double free_energy(double m, double beta, double h) {
    if (!(beta > 0.0)) throw DomainError("free_energy needs beta > 0");
    return -0.5 * m * m - h * m + entropy_I(m) / beta;
}

inline double free_energy_d1(double m, double beta, double h) { return -m - h + std::atanh(m) / beta; }

inline double free_energy_d2(double m, double beta) { return -1.0 + 1.0 / (beta * (1.0 - m * m)); }

/// chi(beta) = sqrt(1 - 1/beta) - log[beta (1 + sqrt(1 - 1/beta))^2] / (2 beta).
inline double chi(double beta) {
    if (!(beta > 1.0)) throw DomainError("chi needs beta > 1");
    const double s = std::sqrt(1.0 - 1.0 / beta);
    return s - std::log(beta * (1.0 + s) * (1.0 + s)) / (2.0 * beta);
}

struct MetastableTriple {
    double m_minus = 0.0;
    double m_star = 0.0;
    double m_plus = 0.0;
    double Gamma = 0.0;
    double K = 0.0;
};

/// Roots of f'(m) = 0 (equivalently atanh(m) = beta (m + h)) in increasing order.
inline std::vector<double> stationary_roots(double beta, double h) {
    if (!(beta > 0.0)) throw DomainError("stationary points need beta > 0");
    auto g = [&](double m) { return std::atanh(m) - beta * (m + h); };
    // g is monotone between the cuts, so each piece holds at most one root.
    auto bisect = [&](double a, double b) {
        double ga = g(a);
        for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
            const double mid = 0.5 * (a + b);
            const double gm = g(mid);
            if (gm == 0.0) return mid;
            if ((gm < 0.0) == (ga < 0.0)) {
                a = mid;
                ga = gm;
            } else {
                b = mid;
            }
        }
        return 0.5 * (a + b);
    };
    const double edge = 1.0;  // g(-1) = -inf, g(1) = +inf
    std::vector<double> cuts = {-edge};
    if (beta > 1.0) {
        const double mc = std::sqrt(1.0 - 1.0 / beta);
        cuts.push_back(-mc);
        cuts.push_back(mc);
    }
    cuts.push_back(edge);
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const double ga = g(a), gb = g(b);
        if (ga == 0.0) {
            if (roots.empty() || roots.back() != a) roots.push_back(a);
            continue;
        }
        if (gb == 0.0) {
            roots.push_back(b);
            continue;
        }
        if ((ga < 0.0) != (gb < 0.0)) roots.push_back(bisect(a, b));
    }
    return roots;
}

/// The three stationary points when they exist (beta > 1, 0 <= h < chi(beta)).
inline std::optional<MetastableTriple> stationary_points(double beta, double h) {
    const auto r = stationary_roots(beta, h);
    if (r.size() != 3) return std::nullopt;
    MetastableTriple t;
    t.m_minus = r[0];
    t.m_star = r[1];
    t.m_plus = r[2];
    return t;
}

/// Stationary points plus the barrier Gamma = beta [f(m*) - f(m*_-)] and prefactor
/// K = (pi / beta) sqrt((1+m*)/(1-m*) / (1 - m*_-^2) / ([-f''(m*)] f''(m*_-))).
inline MetastableTriple kramers(double beta, double h) {
    if (!(beta > 1.0)) throw DomainError("kramers needs beta > 1");
    if (!(h > 0.0 && h < chi(beta))) throw DomainError("kramers needs 0 < h < chi(beta)");
    auto t = stationary_points(beta, h);
    if (!t) throw NumericalError("expected three stationary points");
    const double c = -free_energy_d2(t->m_star, beta);
    const double w = free_energy_d2(t->m_minus, beta);
    if (!(c > 0.0) || !(w > 0.0)) throw NumericalError("degenerate free-energy landscape");
    t->Gamma = beta * (free_energy(t->m_star, beta, h) - free_energy(t->m_minus, beta, h));
    const double ms = t->m_star, mm = t->m_minus;
    t->K = std::numbers::pi / beta * std::sqrt((1.0 + ms) / (1.0 - ms) / (1.0 - mm * mm) / (c * w));
    return *t;
}

}  // namespace ipslab::analytics
