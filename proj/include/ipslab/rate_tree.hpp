#pragma once

#include <cstddef>
#include <vector>

#include "ipslab/rng.hpp"

namespace ipslab {

/// Sum tree over non-negative leaf rates: O(log n) update and proportional sampling.
/// Internal nodes are recomputed from their children on every update, so the
/// root never accumulates drift and is exactly 0 when every leaf is 0.
class RateTree {
  public:
    RateTree() = default;
    explicit RateTree(std::size_t n) { reset(n); }

    void reset(std::size_t n) {
        n_ = n;
        size_ = 1;
        while (size_ < n) size_ <<= 1;
        tree_.assign(2 * size_, 0.0);
    }

    std::size_t size() const noexcept { return n_; }
    double total() const noexcept { return tree_[1]; }
    double rate(std::size_t i) const noexcept { return tree_[size_ + i]; }

    void set(std::size_t i, double r) noexcept {
        std::size_t k = size_ + i;
        tree_[k] = r;
        for (k >>= 1; k >= 1; k >>= 1) tree_[k] = tree_[2 * k] + tree_[2 * k + 1];
    }

    /// Bulk load then rebuild all internal nodes once.
    template <class F>
    void build(F rate_of) {
        for (std::size_t i = 0; i < n_; ++i) tree_[size_ + i] = rate_of(i);
        for (std::size_t i = n_; i < size_; ++i) tree_[size_ + i] = 0.0;
        for (std::size_t k = size_ - 1; k >= 1; --k) tree_[k] = tree_[2 * k] + tree_[2 * k + 1];
    }

    /// Leaf i with probability rate(i) / total(). Requires total() > 0.
    std::size_t sample(Rng& rng) const noexcept {
        double x = rng.uniform() * tree_[1];
        std::size_t k = 1;
        while (k < size_) {
            const double left = tree_[2 * k];
            if (x < left || tree_[2 * k + 1] <= 0.0) {
                k = 2 * k;
            } else {
                x -= left;
                k = 2 * k + 1;
            }
        }
        return k - size_;
    }

  private:
    std::size_t n_ = 0;
    std::size_t size_ = 1;
    std::vector<double> tree_ = std::vector<double>(2, 0.0);
};

}  // namespace ipslab
