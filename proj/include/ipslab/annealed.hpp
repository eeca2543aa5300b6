#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ipslab/error.hpp"
#include "ipslab/graphgen.hpp"
#include "ipslab/rng.hpp"

namespace ipslab {

/// Step rule of the two discrete-time walkers.
enum class WalkRule {
    simple,           // uniform half-edge at the current vertex
    non_backtracking  // excludes the half-edge just arrived through (unless it is the only one)
};

struct AnnealedResult {
    std::size_t reps = 0;
    std::size_t steps = 0;
    std::vector<double> meet_at;          // P(tau = k), k = 0..steps
    std::vector<double> meet_at_x_first;  // P(tau = k and walker X made the first move)
    double meet_by = 0.0;                 // P(tau <= steps)
    bool outside_local_regime = false;    // exploration may revisit vertices too often
};

namespace detail {

/// Lazily matched configuration model: half-edges are paired on first use,
/// each unmatched half-edge choosing its partner uniformly among the other
/// unmatched ones. Reset restores the empty matching in time proportional to
/// the number of pairs formed.
class LazyMatching {
  public:
    explicit LazyMatching(const std::vector<std::size_t>& degrees) {
        offset_.assign(degrees.size() + 1, 0);
        for (std::size_t v = 0; v < degrees.size(); ++v) offset_[v + 1] = offset_[v] + degrees[v];
        owner_.resize(offset_.back());
        for (std::size_t v = 0; v < degrees.size(); ++v)
            for (auto h = offset_[v]; h < offset_[v + 1]; ++h) owner_[h] = static_cast<std::uint32_t>(v);
        partner_.assign(owner_.size(), kFree);
    }

    std::size_t half_edges() const noexcept { return owner_.size(); }
    std::size_t vertices() const noexcept { return offset_.size() - 1; }
    std::size_t degree(std::size_t v) const noexcept { return offset_[v + 1] - offset_[v]; }
    std::size_t first_half(std::size_t v) const noexcept { return offset_[v]; }
    std::uint32_t owner(std::size_t h) const noexcept { return owner_[h]; }

    /// Partner of h, matching it now if needed.
    std::size_t partner(std::size_t h, Rng& rng) {
        if (partner_[h] != kFree) return partner_[h];
        if (matched_.size() * 2 + 1 >= owner_.size()) throw NumericalError("matching exhausted");
        std::size_t f;
        do {
            f = rng.below(owner_.size());
        } while (f == h || partner_[f] != kFree);
        partner_[h] = f;
        partner_[f] = h;
        matched_.push_back(h);
        matched_.push_back(f);
        return f;
    }

    void reset() {
        for (auto h : matched_) partner_[h] = kFree;
        matched_.clear();
    }

  private:
    static constexpr std::size_t kFree = ~std::size_t{0};
    std::vector<std::size_t> offset_;
    std::vector<std::uint32_t> owner_;
    std::vector<std::size_t> partner_;
    std::vector<std::size_t> matched_;
};

}  // namespace detail

/// Monte Carlo of the annealed meeting law on the configuration model. Both
/// walkers start at a uniform vertex o; each step a fair coin picks the mover,
/// which leaves through a uniform allowed half-edge, matching it lazily. tau is
/// the first step k >= 1 after which both walkers share a vertex.
inline AnnealedResult annealed_meeting_cm(const std::vector<double>& pmf, std::size_t n, std::size_t steps,
                                          WalkRule rule, std::uint64_t seed, std::size_t reps) {
    if (pmf.size() < 2) throw PreconditionError("degree pmf needs positive support");
    if (pmf[0] > 0.0) throw PreconditionError("minimum degree must be at least 1");
    if (reps == 0) throw ParameterError("reps must be >= 1");
    const auto degrees = sample_degrees(pmf, n, mix64(seed));
    detail::LazyMatching cm(degrees.degrees);

    AnnealedResult out;
    out.reps = reps;
    out.steps = steps;
    out.meet_at.assign(steps + 1, 0.0);
    out.meet_at_x_first.assign(steps + 1, 0.0);
    const double explored = 2.0 * static_cast<double>(steps);
    out.outside_local_regime = explored * explored > 0.01 * static_cast<double>(cm.half_edges());

    std::vector<std::uint64_t> hits(steps + 1, 0), hits_x(steps + 1, 0);
    Rng rng(seed);
    constexpr std::size_t none = ~std::size_t{0};
    for (std::size_t r = 0; r < reps; ++r) {
        cm.reset();
        const auto o = static_cast<std::size_t>(rng.below(cm.vertices()));
        std::size_t pos[2] = {o, o};
        std::size_t arrived[2] = {none, none};  // half-edge at pos through which the walker entered
        int first = -1;
        for (std::size_t k = 1; k <= steps; ++k) {
            const int w = static_cast<int>(rng.below(2));
            if (first < 0) first = w;
            const auto d = cm.degree(pos[w]);
            std::size_t h;
            if (rule == WalkRule::non_backtracking && arrived[w] != none && d > 1) {
                h = cm.first_half(pos[w]) + rng.below(d - 1);
                if (h >= arrived[w]) ++h;
            } else {
                h = cm.first_half(pos[w]) + rng.below(d);
            }
            const auto f = cm.partner(h, rng);
            pos[w] = cm.owner(f);
            arrived[w] = f;
            if (pos[0] == pos[1]) {
                ++hits[k];
                if (first == 0) ++hits_x[k];
                break;
            }
        }
    }
    const double denom = static_cast<double>(reps);
    for (std::size_t k = 0; k <= steps; ++k) {
        out.meet_at[k] = static_cast<double>(hits[k]) / denom;
        out.meet_at_x_first[k] = static_cast<double>(hits_x[k]) / denom;
        out.meet_by += out.meet_at[k];
    }
    return out;
}

/// (1/2)^4 * sum_k p_k / k * sum_k mu(k) / k with mu(k) = (k + 1) p_{k+1} / E[D].
inline double annealed_meet4_formula(const std::vector<double>& pmf) {
    double mean = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) mean += static_cast<double>(k) * pmf[k];
    if (!(mean > 0.0)) throw PreconditionError("degree pmf needs positive mean");
    double a = 0.0, b = 0.0;
    for (std::size_t k = 1; k < pmf.size(); ++k) {
        a += pmf[k] / static_cast<double>(k);
        if (k + 1 < pmf.size()) b += static_cast<double>(k + 1) * pmf[k + 1] / mean / static_cast<double>(k);
    }
    return a * b / 16.0;
}

}  // namespace ipslab
