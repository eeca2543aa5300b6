#include <catch_amalgamated.hpp>

#include <cmath>

#include "ipslab/graphgen.hpp"
#include "ipslab/obsstats.hpp"
#include "ipslab/rng.hpp"

using namespace ipslab;
using Catch::Approx;

TEST_CASE("discordant fraction", "[obsstats]") {
    const auto k4 = generate(spec::Complete{4}, 0);
    CHECK(discordant_fraction(k4, Configuration(4, 1)) == 0.0);
    CHECK(discordant_fraction(k4, Configuration(4, 0)) == 0.0);
    CHECK(discordant_fraction(k4, Configuration{1, 1, 0, 0}) == Approx(4.0 / 6.0));
    CHECK(discordant_fraction(Topology(k4), Configuration{1, 0, 1, 0}) == Approx(4.0 / 6.0));

    Graph loop;
    loop.n = 2;
    loop.edges = {{0, 0}, {0, 1}};
    CHECK(discordant_fraction(loop, Configuration{1, 0}) == 0.5);

    Graph empty;
    empty.n = 3;
    CHECK_THROWS_AS(discordant_fraction(empty, Configuration(3, 0)), DomainError);
}

TEST_CASE("complete-graph discordance identity", "[obsstats]") {
    for (std::size_t N = 2; N <= 8; ++N) {
        const auto g = generate(spec::Complete{N}, 0);
        const Topology t(g);
        for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
            Configuration c(N);
            for (std::size_t i = 0; i < N; ++i) c[i] = (mask >> i) & 1;
            const double x = ones_fraction(c);
            const double n = static_cast<double>(N);
            // Edge-normalised count: discordant pairs over C(N, 2).
            CHECK(discordant_fraction(t, c) == Approx(2.0 * n / (n - 1.0) * x * (1.0 - x)).margin(1e-14));
        }
    }
}

TEST_CASE("magnetisation and fractions", "[obsstats]") {
    CHECK(magnetisation(Configuration(6, 1)) == 1.0);
    CHECK(magnetisation(Configuration(6, -1)) == -1.0);
    CHECK(magnetisation(Configuration{1, -1, 1, -1}) == 0.0);
    CHECK(ones_fraction(Configuration{1, 0, 0, 0}) == 0.25);
    CHECK(infected_fraction(Configuration{1, 1, 0, 0}) == 0.5);
    CHECK(ones_fraction(Configuration{1, -1, -1, -1}) == 0.25);
    CHECK_THROWS_AS(magnetisation(Configuration{}), DomainError);

    const auto g = generate(spec::Torus{1, 4}, 0);
    const Topology t(g);
    const Configuration c = {1, 0, 0, 0};
    CHECK(observe(Observable::ones_fraction, t, c) == 0.25);
    CHECK(observe(Observable::discordant_fraction, t, c) == 0.5);
    CHECK(observable_from_string(to_string(Observable::discordant_fraction)) == Observable::discordant_fraction);
    CHECK(observable_from_string("magnetization") == Observable::magnetisation);
    CHECK_THROWS_AS(observable_from_string("energy"), ConfigError);
}

TEST_CASE("mean and confidence interval", "[obsstats]") {
    const std::vector<double> flat(10, 3.5);
    const auto f = mean_ci(flat);
    CHECK(f.mean == 3.5);
    CHECK(f.sd == 0.0);
    CHECK(f.ci95 == 0.0);

    const std::vector<double> x = {1, 2, 3, 4};
    const auto s = mean_ci(x);
    CHECK(s.mean == 2.5);
    CHECK(s.sd == Approx(std::sqrt(5.0 / 3.0)));
    CHECK(s.se == Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(s.ci95 == Approx(1.959963984540054 * s.se));
    CHECK(s.count == 4);

    std::vector<double> rev(x.rbegin(), x.rend());
    CHECK(mean_ci(rev).mean == s.mean);
    CHECK_THROWS_AS(mean_ci(std::vector<double>{1.0}), DomainError);
}

TEST_CASE("Kolmogorov-Smirnov distances", "[obsstats]") {
    const std::size_t n = 10000;
    const double bound = 1.63 / std::sqrt(static_cast<double>(n));
    Rng rng(12);
    std::vector<double> u(n), e(n);
    for (auto& v : u) v = rng.uniform();
    for (auto& v : e) v = rng.exponential(1.0);
    CHECK(ks_distance(u, [](double x) { return std::clamp(x, 0.0, 1.0); }) < bound);
    CHECK(ks_distance(e, [](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x); }) < bound);
    CHECK(ks_distance(e, [](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-2.0 * x); }) > 0.2);

    CHECK(ks_distance(std::vector<double>{0.5}, [](double x) { return x; }) == 0.5);
    CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(ks_two_sample({1, 2}, {3, 4}) == 1.0);
    std::vector<double> e2(n);
    for (auto& v : e2) v = rng.exponential(1.0);
    CHECK(ks_two_sample(e, e2) < 1.63 * std::sqrt(2.0 / n));
}

TEST_CASE("median", "[obsstats]") {
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 3, 2}) == 2.5);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(median({1, inf, inf}) == inf);
    CHECK(median({1, 2, inf}) == 2.0);
    CHECK_THROWS_AS(median({}), DomainError);
}
