#include <catch_amalgamated.hpp>

#include <cmath>

#include "ipslab/analytics/birth_death.hpp"
#include "ipslab/analytics/cm_bounds.hpp"
#include "ipslab/analytics/contact.hpp"
#include "ipslab/analytics/curie_weiss.hpp"
#include "ipslab/analytics/cw_chain.hpp"
#include "ipslab/analytics/fisher_wright.hpp"
#include "ipslab/analytics/voter_profile.hpp"
#include "ipslab/rng.hpp"

using namespace ipslab;
using namespace ipslab::analytics;
using Catch::Approx;

TEST_CASE("entropy", "[analytics]") {
    CHECK(entropy_I(0.0) == 0.0);
    CHECK(entropy_I(1.0) == Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(entropy_I(-1.0) == Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(std::abs(entropy_I(0.5) - (0.75 * std::log(1.5) + 0.25 * std::log(0.5))) < 1e-12);
    CHECK(std::abs(entropy_I(0.5) - 0.130812) < 1e-6);
    CHECK_THROWS_AS(entropy_I(1.5), DomainError);

    // Finite-N entropy converges to I(m) - log 2.
    CHECK(entropy_IN(0.5, 4000) == Approx(entropy_I(0.5) - std::log(2.0)).margin(2e-3));
    CHECK(entropy_IN(1.0, 10) == Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(entropy_IN(0.3, 10), DomainError);
}

TEST_CASE("free energy and stationary points", "[analytics]") {
    const auto sym = stationary_points(2.0, 0.0);
    REQUIRE(sym);
    CHECK(sym->m_star == Approx(0.0).margin(1e-9));
    CHECK(sym->m_minus == Approx(-sym->m_plus).margin(1e-9));
    CHECK(std::abs(sym->m_plus - 0.957504) < 1e-5);
    for (double m : {0.1, 0.4, 0.9}) CHECK(free_energy(m, 2.0, 0.0) == Approx(free_energy(-m, 2.0, 0.0)));

    CHECK(stationary_points(2.0, 0.05).has_value());
    CHECK_FALSE(stationary_points(2.0, 0.3).has_value());
    CHECK_FALSE(stationary_points(0.9, 0.0).has_value());
    const auto t = *stationary_points(1.5, 0.1);
    for (double m : {t.m_minus, t.m_star, t.m_plus}) CHECK(std::abs(free_energy_d1(m, 1.5, 0.1)) < 1e-10);
}

TEST_CASE("metastability threshold", "[analytics]") {
    CHECK(std::abs(chi(2.0) - 0.26642) < 1e-4);
    CHECK(std::abs(chi(1.5) - 0.13836) < 1e-4);
    CHECK(chi(1.0 + 1e-10) == Approx(0.0).margin(1e-4));
    for (double b = 1.01; b <= 100.0; b *= 1.1) {
        CHECK(chi(b) < 1.0);
        CHECK(chi(b) > 0.0);
    }
    CHECK_THROWS_AS(chi(1.0), DomainError);
}

TEST_CASE("Kramers triple", "[analytics]") {
    const auto k = kramers(1.5, 0.1);
    CHECK(k.Gamma > 0.0);
    CHECK(k.K > 0.0);
    CHECK(k.m_minus == Approx(-0.75257).margin(1e-5));
    CHECK(k.m_star == Approx(-0.32429).margin(1e-5));
    CHECK(k.m_plus == Approx(0.90704).margin(1e-5));
    CHECK(k.Gamma == Approx(0.0163158).margin(1e-6));

    // Barrier shrinks to zero as h approaches chi(beta).
    double prev = 1e9;
    const double c = chi(1.5);
    for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.9999}) {
        const double g = kramers(1.5, frac * c).Gamma;
        CHECK(g < prev);
        prev = g;
    }
    CHECK(prev < 1e-5);
    CHECK_THROWS_AS(kramers(1.5, 0.2), DomainError);
}

TEST_CASE("exact Curie-Weiss crossover approaches the Kramers rate", "[analytics]") {
    double prev_gap = 1e9;
    for (std::size_t N : {100, 200, 400, 800}) {
        const auto c = cw_crossover(1.5, 0.1, N);
        REQUIRE(c.exact.reachable);
        const double gap = std::abs(static_cast<double>(c.exact.log_value) / c.log_kramers - 1.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.1);
}

TEST_CASE("exact Curie-Weiss crossover over the Kramers formula", "[kramers-band]") {
    for (std::size_t N : {100, 200, 400}) {
        const auto c = cw_crossover(1.5, 0.1, N);
        const double ratio = std::exp(static_cast<double>(c.exact.log_value) - c.log_kramers);
        INFO("N = " << N << ", ratio = " << ratio);
        CHECK(ratio >= 0.5);
        CHECK(ratio <= 2.0);
    }
}

TEST_CASE("I_delta", "[analytics]") {
    for (double x : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        for (double delta : {2.5, 3.0, 5.0, 10.0, 100.0, 1e4}) {
            const auto r = i_delta(x, delta);
            REQUIRE_FALSE(r.empty);
            CHECK(i_delta_log_margin(x, r.value, delta) > 0.0);
            const double below = r.value - 1e-6;
            if (below > 0.0) CHECK_FALSE(i_delta_log_margin(x, below, delta) > 0.0);
        }
    }
    CHECK(std::abs(i_delta(0.5, 1e6).value - 0.25) < 0.05);

    // Decays to 0 as x -> 0.
    double prev = 1.0;
    for (double x : {0.5, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001}) {
        const double v = i_delta(x, 10.0).value;
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-3);
    CHECK_THROWS_AS(i_delta(0.7, 3.0), DomainError);
    CHECK_THROWS_AS(i_delta(0.3, 1.0), DomainError);
}

namespace {

std::size_t brute_m_bar(const std::vector<std::size_t>& deg, double h_over_j) {
    auto d = deg;
    std::sort(d.begin(), d.end());
    const std::size_t N = d.size();
    std::vector<double> ell(N + 1, 0.0);
    for (std::size_t i = 0; i < N; ++i) ell[i + 1] = ell[i] + static_cast<double>(d[i]);
    for (std::size_t M = 1; M < N; ++M) {
        const double rhs = ell[M + 1] * (1.0 - ell[M + 1] / ell[N]) - ell[M] * (1.0 - ell[M] / ell[N]);
        if (h_over_j >= rhs) return M;
    }
    return N;
}

}  // namespace

TEST_CASE("barrier bounds on the configuration model", "[analytics]") {
    const std::vector<std::size_t> reg(10, 3);
    const auto b = gamma_bounds(reg, 1.0, 1.0);
    CHECK(b.M_bar == brute_m_bar(reg, 1.0));
    CHECK(b.M_tilde == 5);
    CHECK(b.M_bar < 5);
    for (std::size_t N : {7, 10, 11, 50}) CHECK(gamma_bounds(std::vector<std::size_t>(N, 4), 1.0, 0.5).M_tilde == (N + 1) / 2);

    Rng rng(31);
    for (int k = 0; k < 300; ++k) {
        const std::size_t N = 5 + rng.below(60);
        std::vector<std::size_t> deg(N);
        for (auto& d : deg) d = 1 + rng.below(12);
        const double J = 0.2 + rng.uniform(), h = 4.0 * rng.uniform_pos();
        CHECK(gamma_bounds(deg, J, h).M_bar == brute_m_bar(deg, h / J));
    }
    CHECK_THROWS_AS(gamma_bounds({}, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(gamma_bounds({3, 3}, 1.0, 0.0), DomainError);
}

TEST_CASE("upper and lower barriers meet for large degrees", "[analytics]") {
    double prev = 1e9;
    for (std::size_t d : {10, 100, 1000}) {
        const auto b = gamma_bounds(std::vector<std::size_t>(1000, d), 1.0, 1.0);
        const double gap = std::abs(b.Gamma_plus / b.Gamma_minus - 1.0);
        CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("upper and lower barrier ratio band", "[gamma-band]") {
    for (std::size_t d : {10, 100, 1000}) {
        const auto b = gamma_bounds(std::vector<std::size_t>(1000, d), 1.0, 1.0);
        const double ratio = b.Gamma_plus / b.Gamma_minus;
        INFO("d = " << d << ", ratio = " << ratio);
        CHECK(std::abs(ratio - 1.0) <= 5.0 / std::sqrt(static_cast<double>(d)));
    }
}

TEST_CASE("tree profile", "[analytics]") {
    for (double d : {3.0, 4.0, 10.0}) {
        CHECK(profile_f_d(d, 0.0) == Approx(1.0).margin(1e-10));
        CHECK(catalan_partial_sum(d, 2000) / d == Approx(1.0 - theta_d(d)).margin(1e-10));
    }
    CHECK(profile_f_d(3.0, 50.0) - 0.5 < 1e-3);
    CHECK(profile_f_d(3.0, 50.0) >= 0.5);
    double prev = 1.0;
    for (double t = 0.25; t <= 10.0; t += 0.25) {
        const double f = profile_f_d(3.0, t);
        CHECK(f <= prev + 1e-12);
        prev = f;
    }
}

TEST_CASE("rewiring diffusion constant", "[analytics]") {
    for (int d = 3; d <= 10; ++d) CHECK(std::abs(theta_d_nu(d, 0.0) - theta_d(d)) < 1e-10);
    const auto p = theta_d_nu_profile(3.0, 0.0);
    CHECK(p.Delta == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    double prev = 0.0;
    for (double nu : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double th = theta_d_nu(3.0, nu);
        CHECK(th > prev);
        prev = th;
    }
    CHECK(theta_d_nu(3.0, 1e6) > 0.999);
    CHECK_THROWS_AS(theta_d_nu(2.0, 1.0), DomainError);
}

TEST_CASE("directed Eulerian diffusion constant", "[analytics]") {
    CHECK(std::abs(theta_directed_eulerian(3.0, 9.0) - 1.224745) < 1e-6);
    CHECK(theta_directed_eulerian(1e6, 1e12) == Approx(1.0).margin(1e-6));
    CHECK(theta_directed_eulerian(3.0, 12.0) < theta_directed_eulerian(3.0, 10.0));
    CHECK_THROWS_AS(theta_directed_eulerian(3.0, 8.0), DomainError);
}

TEST_CASE("Fisher-Wright diffusion", "[analytics]") {
    for (double x0 : {0.0, 1.0}) {
        const auto e = fw_simulate(1.0, x0, 1.0, 1e-3, 1, 50, 0.5);
        for (double m : e.mean) CHECK(m == x0);
    }
    const auto e = fw_simulate(1.0, 0.3, 1.0, 1e-4, 7, 4000, 0.5);
    REQUIRE(e.s.size() == 3);
    for (std::size_t k = 0; k < e.s.size(); ++k) {
        CHECK(std::abs(e.mean[k] - 0.3) <= 3.0 * std::max(e.mean_se[k], 1e-12));
        if (k > 0)
            CHECK(std::abs(e.het[k] - fw_heterozygosity(1.0, 0.3, e.s[k])) <= 3.0 * e.het_se[k]);
    }
    CHECK_THROWS_AS(fw_simulate(1.0, 0.3, 1.0, 0.01, 1, 10, 0.5), ParameterError);
}

TEST_CASE("birth-death hitting times", "[analytics]") {
    const std::vector<double> up = {0.0, 1.0, 0.0}, down = {0.0, 1.0, 2.0};
    CHECK(bd_mean_absorption(up, down, 1, 1).value == 0.0);
    // Contact process on two vertices from both infected: 2 exactly.
    const auto cp2 = lumped_rates(model::CP{1.0}, 2);
    CHECK(bd_mean_absorption(cp2.up, cp2.down, 2, 0).value == Approx(2.0).epsilon(1e-15));

    const std::size_t K = 12;
    std::vector<double> zero(K + 1, 0.0), unit(K + 1, 1.0);
    unit[0] = 0.0;
    double harmonic = 0.0;
    std::vector<double> deaths(K + 1);
    for (std::size_t i = 1; i <= K; ++i) {
        deaths[i] = static_cast<double>(i);
        harmonic += 1.0 / static_cast<double>(i);
    }
    deaths[0] = 0.0;
    CHECK(bd_mean_absorption(zero, deaths, K, 0).value == Approx(harmonic));
    CHECK(bd_mean_absorption(zero, unit, K, 0).value == Approx(12.0));
    CHECK_FALSE(bd_mean_absorption(zero, unit, 0, K).reachable);
    CHECK_THROWS_AS(bd_mean_absorption(zero, unit, 0, K + 1), ParameterError);
}

TEST_CASE("lumped rates", "[analytics]") {
    const auto vm = lumped_rates(model::VM{}, 3);
    CHECK(vm.up[1] == 1.0);
    CHECK(vm.down[1] == 1.0);
    const auto cp = lumped_rates(model::CP{0.05}, 10);
    CHECK(cp.up[1] == Approx(0.45));
    CHECK(cp.down[1] == 1.0);
    CHECK(bd_mean_absorption(cp.up, cp.down, 10, 0).value == Approx(3.7216).margin(1e-4));

    model::SIM s;
    s.beta = 1.0;
    s.J = 0.0;
    s.h = 0.0;
    const auto free = lumped_rates(s, 5);
    for (std::size_t k = 0; k <= 5; ++k) {
        CHECK(free.up[k] == Approx(5.0 - k));
        CHECK(free.down[k] == Approx(static_cast<double>(k)));
    }
}

TEST_CASE("contact process asymptotics", "[analytics]") {
    CHECK(std::abs(extinction_asymptotic(100, 1.0) - 560.517) < 1e-3);
    CHECK(extinction_log_product(10, 1.0) == Approx(std::lgamma(10.0) - std::log(10.0)));
    const auto r = rho_exponent(2.25);
    CHECK(r.power == Approx(4.0 / 3.0));
    CHECK(r.log_power == 0.0);
    CHECK(rho_exponent(2.5).power == Approx(2.0));
    CHECK(rho_exponent(2.5 + 1e-12).power == Approx(2.0).margin(1e-9));
    CHECK(rho_exponent(3.5).log_power == Approx(-3.0));
    CHECK_THROWS_AS(rho_exponent(2.0), DomainError);
}
