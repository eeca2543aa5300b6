#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ipslab/error.hpp"
#include "ipslab/model.hpp"

namespace ipslab::analytics {

struct HittingTime {
    double value = 0.0;          // +inf when unreachable or overflowing double
    long double log_value = 0;   // natural log, finite whenever the target is reachable
    bool reachable = true;
};

/// Expected hitting time of `target` from `start` for the birth-death chain on
/// 0..K with rates up[i] (i -> i+1) and down[i] (i -> i-1). Uses the first-step
/// recursions in long double:
///   upward   T_i = (1 + down_i T_{i-1}) / up_i,     T_i = E[time i -> i+1]
///   downward S_i = (1 + up_i S_{i+1}) / down_i,     S_i = E[time i -> i-1]
/// and sums the single-step times between start and target.
inline HittingTime bd_mean_absorption(const std::vector<double>& up, const std::vector<double>& down,
                                      std::size_t start, std::size_t target) {
    if (up.size() != down.size() || up.empty()) throw ParameterError("rate vectors must have equal, positive length");
    const std::size_t K = up.size() - 1;
    if (start > K || target > K) throw ParameterError("start and target must lie in 0..K");
    for (std::size_t i = 0; i <= K; ++i)
        if (!(up[i] >= 0.0) || !(down[i] >= 0.0)) throw ParameterError("rates must be >= 0");
    HittingTime r;
    if (start == target) {
        r.log_value = -std::numeric_limits<long double>::infinity();
        return r;
    }
    long double total = 0.0L;
    auto unreachable = [&]() {
        r.reachable = false;
        r.value = std::numeric_limits<double>::infinity();
        r.log_value = std::numeric_limits<long double>::infinity();
        return r;
    };
    if (start < target) {
        long double T = 0.0L;  // T_{i-1}
        for (std::size_t i = 0; i < target; ++i) {
            const long double u = up[i];
            const long double d = i == 0 ? 0.0L : static_cast<long double>(down[i]);
            if (u == 0.0L) {
                if (i >= start) return unreachable();
                T = std::numeric_limits<long double>::infinity();
                continue;
            }
            T = std::isinf(T) && d == 0.0L ? 1.0L / u : (1.0L + d * T) / u;
            if (i >= start) total += T;
        }
    } else {
        long double S = 0.0L;  // S_{i+1}
        for (std::size_t i = K + 1; i-- > target + 1;) {
            const long double d = down[i];
            const long double u = i == K ? 0.0L : static_cast<long double>(up[i]);
            if (d == 0.0L) {
                if (i <= start) return unreachable();
                S = std::numeric_limits<long double>::infinity();
                continue;
            }
            S = std::isinf(S) && u == 0.0L ? 1.0L / d : (1.0L + u * S) / d;
            if (i <= start) total += S;
        }
    }
    if (std::isinf(total)) return unreachable();
    r.log_value = std::log(total);
    r.value = static_cast<double>(total);
    return r;
}

struct LumpedRates {
    std::vector<double> up;    // up[k]: k -> k+1
    std::vector<double> down;  // down[k]: k -> k-1
};

/// Exact rates of the ones count (up-spin count for the Ising model) on the
/// complete graph with N vertices.
///   VM: up = down = k (N - k) / (N - 1)
///   CP: up = lambda k (N - k), down = k
///   SIM: up = (N - k) e^{-beta [dH_+]_+}, down = k e^{-beta [dH_-]_+}, with
///        M = 2k - N, dH_+ = -2J(M + 1) - 2h, dH_- = 2J(M - 1) + 2h.
inline LumpedRates lumped_rates(const ModelParams& m, std::size_t N) {
    if (N < 1) throw ParameterError("lumped chain needs N >= 1");
    LumpedRates r;
    r.up.assign(N + 1, 0.0);
    r.down.assign(N + 1, 0.0);
    const double n = static_cast<double>(N);
    for (std::size_t k = 0; k <= N; ++k) {
        const double kk = static_cast<double>(k);
        if (is_vm(m)) {
            const double rate = N > 1 ? kk * (n - kk) / (n - 1.0) : 0.0;
            r.up[k] = rate;
            r.down[k] = rate;
        } else if (const auto* cp = std::get_if<model::CP>(&m)) {
            r.up[k] = cp->lambda * kk * (n - kk);
            r.down[k] = kk;
        } else {
            const auto& s = std::get<model::SIM>(m);
            if (!s.couplings.empty()) throw ParameterError("lumping needs a uniform coupling");
            const double M = 2.0 * kk - n;
            r.up[k] = (n - kk) * glauber_rate(s.beta, -2.0 * s.J * (M + 1.0) - 2.0 * s.h);
            r.down[k] = kk * glauber_rate(s.beta, 2.0 * s.J * (M - 1.0) + 2.0 * s.h);
        }
    }
    return r;
}

}  // namespace ipslab::analytics
