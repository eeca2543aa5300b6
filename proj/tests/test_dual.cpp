#include <catch_amalgamated.hpp>

#include <cmath>

#include "ipslab/analytics/voter_profile.hpp"
#include "ipslab/annealed.hpp"
#include "ipslab/dual.hpp"
#include "ipslab/graphgen.hpp"
#include "ipslab/graphical.hpp"
#include "ipslab/obsstats.hpp"

using namespace ipslab;

TEST_CASE("coalescing walk edge cases", "[dual]") {
    const auto g = generate(spec::Torus{1, 10}, 0);
    const auto one = coalescing_walks(g, {3}, 50.0, 1);
    CHECK(one.events.empty());
    CHECK(one.alive_count() == 1);

    const auto same = coalescing_walks(g, {4, 4}, 50.0, 1);
    REQUIRE(same.events.size() == 1);
    CHECK(same.events[0].t == 0.0);
    CHECK(same.events[0].survivor == 0);
    CHECK(same.events[0].absorbed == 1);

    CHECK(meeting_time(g, 2, 2, 1, 10.0).tau == 0.0);
    CHECK_THROWS(coalescing_walks(g, {}, 1.0, 1));
    CHECK_THROWS(meeting_time(g, 0, 10, 1, 1.0));
}

TEST_CASE("meeting time on the complete graph", "[dual]") {
    const auto g = generate(spec::Complete{5}, 0);
    std::vector<double> t;
    for (std::size_t r = 0; r < 100000; ++r) t.push_back(meeting_time(g, 0, 3, derive_seed(7, r), 1e6).tau);
    const auto s = mean_ci(t);
    CHECK(std::abs(s.mean - 2.0) <= 3.0 * s.se);
}

TEST_CASE("stationary meeting time", "[dual]") {
    // Degree-proportional starts on Complete{5} coincide with probability 1/5.
    const auto g = generate(spec::Complete{5}, 0);
    std::vector<double> t;
    for (std::size_t r = 0; r < 100000; ++r) t.push_back(meeting_time_stationary(g, derive_seed(8, r), 1e6).tau);
    const auto s = mean_ci(t);
    CHECK(std::abs(s.mean - 0.8 * 2.0) <= 3.0 * s.se);
}

TEST_CASE("adjacent walkers on the random 3-regular graph follow the tree profile", "[dual]") {
    const std::vector<double> grid = {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0};
    const std::size_t R = 20000;
    std::vector<double> alive(grid.size(), 0.0);
    for (std::size_t r = 0; r < R; ++r) {
        const auto g = generate(spec::Regular{1000, 3}, derive_seed(11, r));
        std::size_t i = 0;
        while (g.edges[i].u == g.edges[i].v) ++i;
        const auto& e = g.edges[i];
        const double tau = meeting_time(g, e.u, e.v, derive_seed(12, r), 10.0).tau;
        for (std::size_t k = 0; k < grid.size(); ++k) alive[k] += tau > grid[k] ? 1.0 : 0.0;
    }
    for (std::size_t k = 0; k < grid.size(); ++k)
        CHECK(std::abs(alive[k] / R - analytics::profile_f_d(3.0, grid[k])) <= 0.02);
}

TEST_CASE("tree survival oracle", "[dual]") {
    const std::vector<double> t = {0.5, 1.0, 2.0, 5.0};
    const auto s = tree_pair_survival(3, t, 5, 100000);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(std::abs(s[k] - analytics::profile_f_d(3.0, t[k])) <= 0.01);
    const auto zero = tree_pair_survival(4, {0.0}, 5, 1000);
    CHECK(zero[0] == 1.0);
}

TEST_CASE("full coalescence", "[dual]") {
    Graph single;
    single.n = 1;
    CHECK(coalescence_time_full(single, 1, 10.0).tau == 0.0);

    const auto k4 = generate(spec::Complete{4}, 0);
    std::vector<double> t;
    for (std::size_t r = 0; r < 20000; ++r) t.push_back(coalescence_time_full(k4, derive_seed(3, r), 1e6).tau);
    CHECK(mean_ci(t).mean / 1.5 == Catch::Approx(1.5).epsilon(0.05));

    const auto k200 = generate(spec::Complete{200}, 0);
    std::vector<double> u;
    for (std::size_t r = 0; r < 2000; ++r) u.push_back(coalescence_time_full(k200, derive_seed(4, r), 1e7).tau);
    CHECK(mean_ci(u).mean / 99.5 == Catch::Approx(1.99).epsilon(0.05));
}

TEST_CASE("Kingman ratio", "[dual]") {
    CHECK(kingman_ratio(2) == Rational(1));
    CHECK(kingman_ratio(4) == Rational(3, 2));
    CHECK(kingman_ratio(200) == Rational(199, 100));
    Rational prev(0);
    for (std::int64_t n = 2; n <= 500; ++n) {
        const auto r = kingman_ratio(n);
        CHECK(r > prev);
        CHECK(r < Rational(2));
        prev = r;
    }
    CHECK_THROWS_AS(kingman_ratio(1), DomainError);
}

TEST_CASE("tracing back arrows", "[dual]") {
    Configuration labels(8);
    for (std::size_t i = 0; i < 8; ++i) labels[i] = static_cast<std::int8_t>(i);
    GraphicalRep empty(8, 1.0);
    CHECK(trace_back(empty, labels) == labels);

    // Opinion 4 spreads along 5, 6, 7 in time order.
    GraphicalRep rep(8, 1.0);
    rep.add(5, 0.2, 4);
    rep.add(6, 0.4, 5);
    rep.add(7, 0.6, 6);
    rep.add(1, 0.3, 0);
    rep.add(0, 0.5, 7);  // copies 7 before 7 carries opinion 4
    const auto anc = ancestors(rep);
    for (Vertex v : {4u, 5u, 6u, 7u}) CHECK(anc[v] == 4);
    CHECK(anc[1] == 0);
    CHECK(anc[0] == 7);
    CHECK(trace_back(rep, labels) == evolve_forward(rep, labels));
}

TEST_CASE("duality on random graphs", "[dual]") {
    const std::vector<double> pmf = {0.0, 0.25, 0.25, 0.25, 0.25};
    Configuration labels(20);
    for (std::size_t i = 0; i < 20; ++i) labels[i] = static_cast<std::int8_t>(i);
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto deg = sample_degrees(pmf, 20, s);
        const auto g = generate(spec::ConfigModel{deg.degrees}, s);
        const auto rep = build_graphical_rep(g, 3.0, derive_seed(s, 1));
        CHECK(trace_back(rep, labels) == evolve_forward(rep, labels));
    }
    const auto c8 = generate(spec::Torus{1, 8}, 0);
    Configuration l8(8);
    for (std::size_t i = 0; i < 8; ++i) l8[i] = static_cast<std::int8_t>(i);
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto rep = build_graphical_rep(c8, 3.0, s);
        CHECK(trace_back(rep, l8) == evolve_forward(rep, l8));
    }
}

TEST_CASE("annealed meeting on the 3-regular configuration model", "[dual]") {
    const std::vector<double> pmf = {0, 0, 0, 1};
    CHECK(annealed_meet4_formula(pmf) == Catch::Approx(1.0 / 96.0).epsilon(1e-14));

    const std::size_t R = 1000000;
    const auto nb = annealed_meeting_cm(pmf, 100000, 4, WalkRule::non_backtracking, 3, R);
    CHECK(nb.meet_at[0] == 0.0);
    CHECK(nb.meet_at[1] == Catch::Approx(0.0).margin(1e-4));
    const double p = nb.meet_at_x_first[4];
    CHECK(std::abs(p - 1.0 / 96.0) <= 3.0 * std::sqrt(p * (1.0 - p) / R));
    // Either walker moving first doubles the count.
    const double q = nb.meet_at[4];
    CHECK(std::abs(q - 1.0 / 48.0) <= 3.0 * std::sqrt(q * (1.0 - q) / R));
    CHECK_FALSE(nb.outside_local_regime);

    const auto sw = annealed_meeting_cm(pmf, 100000, 4, WalkRule::simple, 4, 100000);
    CHECK(sw.meet_by >= sw.meet_at[4]);
}
