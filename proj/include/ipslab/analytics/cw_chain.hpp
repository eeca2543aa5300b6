#pragma once

#include <cmath>
#include <cstddef>

#include "ipslab/analytics/birth_death.hpp"
#include "ipslab/analytics/curie_weiss.hpp"

namespace ipslab::analytics {

/// Up-spin counts nearest the two wells on the grid k = (1 + m) N / 2.
struct WellCounts {
    std::size_t start = 0;   // nearest to m_minus
    std::size_t target = 0;  // first count at or above m_plus
};

inline WellCounts cw_well_counts(const MetastableTriple& t, std::size_t N) {
    const double n = static_cast<double>(N);
    WellCounts w;
    w.start = static_cast<std::size_t>(std::lround((1.0 + t.m_minus) * n / 2.0));
    w.target = static_cast<std::size_t>(std::ceil((1.0 + t.m_plus) * n / 2.0));
    return w;
}

struct CrossoverTime {
    MetastableTriple triple;
    WellCounts counts;
    HittingTime exact;  // lumped-chain mean hitting time
    double log_kramers = 0.0;  // log K + N Gamma
};

/// Exact mean time for the Curie-Weiss chain (J = 1/N on Complete{N}) to go
/// from the m_minus well to the m_plus well, next to the Kramers asymptotics.
inline CrossoverTime cw_crossover(double beta, double h, std::size_t N) {
    if (N < 2) throw DomainError("cw_crossover needs N >= 2");
    CrossoverTime c;
    c.triple = kramers(beta, h);
    c.counts = cw_well_counts(c.triple, N);
    model::SIM sim;
    sim.beta = beta;
    sim.J = 1.0 / static_cast<double>(N);
    sim.h = h;
    const auto rates = lumped_rates(sim, N);
    c.exact = bd_mean_absorption(rates.up, rates.down, c.counts.start, c.counts.target);
    c.log_kramers = std::log(c.triple.K) + static_cast<double>(N) * c.triple.Gamma;
    return c;
}

}  // namespace ipslab::analytics
