#pragma once

#include <cmath>

#include "ipslab/error.hpp"

namespace ipslab::analytics {

/// Central term N (1 + log(lambda N)) of the log mean extinction time on the complete graph.
inline double extinction_asymptotic(double N, double lambda) {
    if (!(N >= 1.0)) throw DomainError("extinction_asymptotic needs N >= 1");
    if (!(lambda > 0.0)) throw DomainError("extinction_asymptotic needs lambda > 0");
    return N * (1.0 + std::log(lambda * N));
}

/// log of prod_{i=1}^{N-1} b_i / d_{i+1} for the complete-graph chain
/// (b_i = lambda i (N - i), d_i = i), i.e. log[lambda^{N-1} (N-1)! / N].
/// This is the exact leading order of log E[extinction time] and equals
/// N (log(lambda N) - 1) + O(log N).
inline double extinction_log_product(double N, double lambda) {
    if (!(N >= 1.0)) throw DomainError("extinction_log_product needs N >= 1");
    if (!(lambda > 0.0)) throw DomainError("extinction_log_product needs lambda > 0");
    return (N - 1.0) * std::log(lambda) + std::lgamma(N) - std::log(N);
}

/// Exponent record for the density of infections near criticality on
/// power-law graphs: rho(lambda) ~ lambda^power * log(1/lambda)^log_power.
struct RhoExponent {
    double power = 0.0;
    double log_power = 0.0;
};

inline RhoExponent rho_exponent(double tau) {
    if (!(tau > 2.0)) throw DomainError("rho_exponent needs tau > 2");
    if (tau <= 2.5) return {1.0 / (3.0 - tau), 0.0};
    if (tau <= 3.0) return {2.0 * tau - 3.0, -(tau - 2.0)};
    return {2.0 * tau - 3.0, -2.0 * (tau - 2.0)};
}

}  // namespace ipslab::analytics
