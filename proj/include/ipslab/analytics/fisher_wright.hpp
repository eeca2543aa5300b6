#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ipslab/error.hpp"
#include "ipslab/rng.hpp"

namespace ipslab::analytics {

struct FWEnsemble {
    std::vector<double> s;        // sample times
    std::vector<double> mean;     // E[chi_s]
    std::vector<double> mean_se;
    std::vector<double> het;      // E[chi_s (1 - chi_s)]
    std::vector<double> het_se;
    std::vector<double> absorbed; // fraction of paths at 0 or 1
    std::size_t reps = 0;
};

/// Euler-Maruyama for d chi = sqrt(2 theta chi (1 - chi)) dW, clamped to [0, 1],
/// with absorption once a step lands exactly on 0 or 1. Replica r uses the
/// stream derive_seed(seed, r). Statistics at multiples of sample_ds up to s_max.
inline FWEnsemble fw_simulate(double theta, double x0, double s_max, double dt, std::uint64_t seed, std::size_t reps,
                              double sample_ds) {
    if (!(theta >= 0.0)) throw ParameterError("theta must be >= 0");
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw ParameterError("x0 must lie in [0, 1]");
    if (!(dt > 0.0 && dt <= 1e-3)) throw ParameterError("dt must lie in (0, 1e-3]");
    if (!(s_max > 0.0) || !(sample_ds > 0.0)) throw ParameterError("s_max and sample_ds must be > 0");
    if (reps < 2) throw ParameterError("reps must be >= 2");

    FWEnsemble out;
    out.reps = reps;
    std::vector<std::size_t> at_step;
    for (std::size_t k = 0;; ++k) {
        const double s = static_cast<double>(k) * sample_ds;
        if (s > s_max * (1.0 + 1e-12)) break;
        out.s.push_back(s);
        at_step.push_back(static_cast<std::size_t>(std::llround(s / dt)));
    }
    const std::size_t K = out.s.size();
    std::vector<double> sx(K, 0.0), sxx(K, 0.0), sh(K, 0.0), shh(K, 0.0), sa(K, 0.0);
    const double scale = std::sqrt(2.0 * theta * dt);
    for (std::size_t r = 0; r < reps; ++r) {
        Rng rng(derive_seed(seed, r));
        double x = x0;
        bool done = x <= 0.0 || x >= 1.0;
        std::size_t step = 0;
        for (std::size_t k = 0; k < K; ++k) {
            for (; step < at_step[k] && !done; ++step) {
                x += scale * std::sqrt(x * (1.0 - x)) * rng.normal();
                x = std::clamp(x, 0.0, 1.0);
                done = x == 0.0 || x == 1.0;
            }
            const double h = x * (1.0 - x);
            sx[k] += x;
            sxx[k] += x * x;
            sh[k] += h;
            shh[k] += h * h;
            sa[k] += done ? 1.0 : 0.0;
        }
    }
    const double n = static_cast<double>(reps);
    auto se = [&](double s1, double s2) {
        const double m = s1 / n;
        return std::sqrt(std::max(0.0, (s2 / n - m * m) * n / (n - 1.0)) / n);
    };
    for (std::size_t k = 0; k < K; ++k) {
        out.mean.push_back(sx[k] / n);
        out.mean_se.push_back(se(sx[k], sxx[k]));
        out.het.push_back(sh[k] / n);
        out.het_se.push_back(se(sh[k], shh[k]));
        out.absorbed.push_back(sa[k] / n);
    }
    return out;
}

/// E[chi_s (1 - chi_s)] = x0 (1 - x0) e^{-2 theta s}.
inline double fw_heterozygosity(double theta, double x0, double s) {
    return x0 * (1.0 - x0) * std::exp(-2.0 * theta * s);
}

}  // namespace ipslab::analytics
