#pragma once

#include <cmath>
#include <vector>

#include "ipslab/error.hpp"

namespace ipslab::analytics {

/// theta_d = (d - 2) / (d - 1).
inline double theta_d(double d) {
    if (!(d >= 3.0)) throw DomainError("theta_d needs d >= 3");
    return (d - 2.0) / (d - 1.0);
}

/// sum_{l=0}^{L} C_l x^l with x = (d-1)/d^2 (C_l the Catalan numbers).
inline double catalan_partial_sum(double d, std::size_t L) {
    if (!(d >= 3.0)) throw DomainError("catalan_partial_sum needs d >= 3");
    const double x = (d - 1.0) / (d * d);
    double term = 1.0, sum = 0.0;
    for (std::size_t l = 0; l <= L; ++l) {
        sum += term;
        term *= 2.0 * (2.0 * static_cast<double>(l) + 1.0) / (static_cast<double>(l) + 2.0) * x;
    }
    return sum;
}

/// Probability that two walkers started on adjacent vertices of the infinite
/// d-regular tree have not met by time t:
///   f_d(t) = theta_d + sum_k e^{-2t}(2t)^k/k! sum_{l >= floor((k+1)/2)} C_l (1/d)^{l+1} ((d-1)/d)^l.
/// Both sums are cut where their remaining tails fall below tail_tol.
inline double profile_f_d(double d, double t, double tail_tol = 1e-12) {
    if (!(d >= 3.0)) throw DomainError("profile_f_d needs d >= 3");
    if (!(t >= 0.0)) throw DomainError("profile_f_d needs t >= 0");
    if (!(tail_tol > 0.0)) throw DomainError("tail_tol must be > 0");
    const double x = (d - 1.0) / (d * d);
    const double q = 4.0 * x;  // bound on the ratio of successive Catalan terms
    // a[l] = C_l (1/d)^{l+1} ((d-1)/d)^l until the geometric tail bound drops below tol.
    std::vector<double> a{1.0 / d};
    for (;;) {
        const double l = static_cast<double>(a.size() - 1);
        const double next = a.back() * 2.0 * (2.0 * l + 1.0) / (l + 2.0) * x;
        if (next / (1.0 - q) < tail_tol) break;
        a.push_back(next);
        if (a.size() > 50'000'000) throw NumericalError("Catalan series does not converge");
    }
    // suffix[m] = sum_{l >= m} a[l].
    std::vector<double> suffix(a.size() + 1, 0.0);
    for (std::size_t l = a.size(); l-- > 0;) suffix[l] = suffix[l + 1] + a[l];

    const double mean = 2.0 * t;
    double sum = 0.0;
    double log_p = -mean;  // log Poisson(k; 2t)
    for (std::size_t k = 0;; ++k) {
        if (k > 0) log_p += std::log(mean) - std::log(static_cast<double>(k));
        const double p = std::exp(log_p);
        const std::size_t m = (k + 1) / 2;
        sum += p * (m < suffix.size() ? suffix[m] : 0.0);
        const double kk = static_cast<double>(k + 1);
        if (kk > mean) {
            const double tail = p * mean / kk / (1.0 - mean / kk);
            if (tail < tail_tol) break;
        }
        if (mean == 0.0) break;
    }
    return theta_d(d) + sum;
}

/// Rewiring-accelerated diffusion constant theta_{d,nu} = 1 - Delta / beta_d with
/// beta_d = sqrt(d-1) and Delta = 1/(a_1 - 1/(a_2 - 1/(a_3 - ...))),
/// a_k = (2 + k nu) / rho_d, rho_d = (2/d) sqrt(d-1).
struct RewiringProfile {
    double theta = 0.0;
    double Delta = 0.0;
    double beta_d = 0.0;
    double rho_d = 0.0;
    std::size_t depth = 0;
};

/// Backward recurrence from depth L, doubling L until successive values differ by < tol.
inline RewiringProfile theta_d_nu_profile(double d, double nu, double tol = 1e-12) {
    if (!(d >= 3.0)) throw DomainError("theta_d_nu needs d >= 3");
    if (!(nu >= 0.0)) throw DomainError("theta_d_nu needs nu >= 0");
    RewiringProfile r;
    r.beta_d = std::sqrt(d - 1.0);
    r.rho_d = 2.0 / d * r.beta_d;
    auto evaluate = [&](std::size_t L) {
        double v = 0.0;
        for (std::size_t k = L; k >= 1; --k) v = 1.0 / ((2.0 + static_cast<double>(k) * nu) / r.rho_d - v);
        return v;
    };
    std::size_t L = 8;
    double prev = evaluate(L);
    for (;;) {
        L *= 2;
        if (L > (std::size_t{1} << 20)) throw NumericalError("continued fraction did not converge by depth 2^20");
        const double cur = evaluate(L);
        if (std::abs(cur - prev) < tol) {
            r.Delta = cur;
            r.depth = L;
            break;
        }
        prev = cur;
    }
    r.theta = 1.0 - r.Delta / r.beta_d;
    return r;
}

inline double theta_d_nu(double d, double nu, double tol = 1e-12) { return theta_d_nu_profile(d, nu, tol).theta; }

/// theta = (m2/m1^2 - 1 + sqrt(1 - 1/m1))^{-1} for directed graphs with equal in/out degrees.
inline double theta_directed_eulerian(double m1, double m2) {
    if (!(m1 > 1.0)) throw DomainError("theta_directed_eulerian needs m1 > 1");
    if (m2 < m1 * m1) throw DomainError("second moment below the squared first moment");
    return 1.0 / (m2 / (m1 * m1) - 1.0 + std::sqrt(1.0 - 1.0 / m1));
}

}  // namespace ipslab::analytics
