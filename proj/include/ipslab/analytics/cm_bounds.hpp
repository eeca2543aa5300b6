#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ipslab/error.hpp"

namespace ipslab::analytics {

/// Log of the product in the definition of I_delta:
///   (1 - 1/delta) [x log x + (1-x) log(1-x)]
///   - (1-x-y)/2 log(1-x-y) - (x-y)/2 log(x-y) - y log y.
/// The defining inequality is i_delta_log_margin(x, y, delta) > 0.
inline double i_delta_log_margin(double x, double y, double delta) {
    auto xlogx = [](double v) { return v > 0.0 ? v * std::log(v) : 0.0; };
    return (1.0 - 1.0 / delta) * (xlogx(x) + xlogx(1.0 - x)) - 0.5 * xlogx(1.0 - x - y) - 0.5 * xlogx(x - y) -
           xlogx(y);
}

struct IDeltaResult {
    double value = 0.0;
    bool empty = false;  // inequality never holds on (0, x]
};

/// inf{y in (0, x] : margin(x, y, delta) > 0}. A grid scan of 10^4 points finds
/// the first bracket, then bisection narrows it below 1e-10; the returned
/// value is the right end of the bracket, so it satisfies the inequality.
inline IDeltaResult i_delta(double x, double delta) {
    if (!(x > 0.0 && x <= 0.5)) throw DomainError("i_delta needs x in (0, 1/2]");
    if (!(delta > 1.0)) throw DomainError("i_delta needs delta > 1");
    // Near y = 0 the margin tends to (1/2 - 1/delta)[x log x + (1-x) log(1-x)] and
    // increases, so for delta <= 2 points arbitrarily close to 0 qualify.
    if (delta <= 2.0) return {0.0, false};
    constexpr int kGrid = 10000;
    double lo = 0.0;
    double hi = -1.0;
    for (int i = 1; i <= kGrid; ++i) {
        const double y = x * static_cast<double>(i) / kGrid;
        if (i_delta_log_margin(x, y, delta) > 0.0) {
            hi = y;
            lo = x * static_cast<double>(i - 1) / kGrid;
            break;
        }
    }
    if (hi < 0.0) return {0.0, true};
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (i_delta_log_margin(x, mid, delta) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return {hi, false};
}

struct GammaBounds {
    std::size_t N = 0;
    std::size_t M_bar = 0;
    bool M_bar_degenerate = false;  // no M in [1, N-1] satisfies the defining inequality
    std::size_t M_tilde = 0;
    std::vector<std::int64_t> ell;  // ell[M] = sum of the M smallest degrees, ell[0] = 0
    double d_ave = 0.0;
    double I_half = 0.0;            // I_{d_ave}(1/2)
    double Gamma_plus = 0.0;        // central term
    double Gamma_plus_band = 0.0;   // ell_N^{3/4}, the order of the error term
    double Gamma_minus = 0.0;       // central term; error o(N) is not quantified
};

/// Upper and lower barrier estimates for the Ising model on the configuration model.
/// M_bar = least M with h/J >= ell_{M+1}(1 - ell_{M+1}/ell_N) - ell_M(1 - ell_M/ell_N),
/// compared in the exact integer form (h/J) ell_N >= d_{M+1} (ell_N - ell_M - ell_{M+1}).
inline GammaBounds gamma_bounds(std::vector<std::size_t> degrees, double J, double h) {
    if (degrees.empty()) throw DomainError("gamma_bounds needs a non-empty degree sequence");
    if (!(J > 0.0) || !(h > 0.0)) throw DomainError("gamma_bounds needs J > 0 and h > 0");
    std::sort(degrees.begin(), degrees.end());
    GammaBounds b;
    b.N = degrees.size();
    b.ell.assign(b.N + 1, 0);
    for (std::size_t i = 0; i < b.N; ++i) b.ell[i + 1] = b.ell[i] + static_cast<std::int64_t>(degrees[i]);
    const std::int64_t L = b.ell[b.N];
    if (L <= 0) throw DomainError("gamma_bounds needs positive total degree");
    const double ratio = h / J;

    b.M_bar = b.N;
    b.M_bar_degenerate = true;
    for (std::size_t M = 1; M < b.N; ++M) {
        const std::int64_t rhs = static_cast<std::int64_t>(degrees[M]) * (L - b.ell[M] - b.ell[M + 1]);
        if (ratio * static_cast<double>(L) >= static_cast<double>(rhs)) {
            b.M_bar = M;
            b.M_bar_degenerate = false;
            break;
        }
    }
    for (std::size_t M = 1; M <= b.N; ++M) {
        if (2 * b.ell[M] >= L) {
            b.M_tilde = M;
            break;
        }
    }
    const double lN = static_cast<double>(L);
    const double lM = static_cast<double>(b.ell[b.M_bar]);
    b.d_ave = lN / static_cast<double>(b.N);
    b.Gamma_plus = J * lM * (1.0 - lM / lN) - h * static_cast<double>(b.M_bar);
    b.Gamma_plus_band = std::pow(lN, 0.75);
    const auto I = i_delta(0.5, b.d_ave);
    b.I_half = I.value;
    b.Gamma_minus = J * b.d_ave * b.I_half * static_cast<double>(b.N) - h * static_cast<double>(b.M_tilde);
    return b;
}

}  // namespace ipslab::analytics
