#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "ipslab/graph_io.hpp"
#include "ipslab/graphgen.hpp"

using namespace ipslab;

namespace {

bool all_equal(const std::vector<std::size_t>& v, std::size_t x) {
    return std::all_of(v.begin(), v.end(), [&](auto d) { return d == x; });
}

}  // namespace

TEST_CASE("complete graph counts", "[graphgen]") {
    const auto g = generate(spec::Complete{4}, 1);
    CHECK(g.n == 4);
    CHECK(g.edges.size() == 6);
    CHECK(all_equal(degrees(g), 3));
    std::set<std::pair<Vertex, Vertex>> pairs;
    for (const auto& e : g.edges) pairs.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
    CHECK(pairs.size() == 6);
}

TEST_CASE("torus counts and wraparound", "[graphgen]") {
    const auto g = generate(spec::Torus{2, 3}, 1);
    CHECK(g.n == 9);
    CHECK(g.edges.size() == 18);
    CHECK(all_equal(degrees(g), 4));

    const auto c = generate(spec::Torus{1, 8}, 1);
    CHECK(c.edges.size() == 8);
    CHECK(all_equal(degrees(c), 2));
    const Topology t(c);
    std::set<Vertex> nb;
    for (auto h : t.slots(0)) nb.insert(t.across(h));
    CHECK(nb == std::set<Vertex>{1, 7});
}

TEST_CASE("configuration model keeps the degree sequence", "[graphgen]") {
    const std::vector<std::size_t> deg = {1, 3, 1, 3, 2, 4};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto g = generate(spec::ConfigModel{deg}, seed);
        REQUIRE(g.edges.size() == 7);
        CHECK(degrees(g) == deg);
    }
    CHECK_THROWS_AS(generate(spec::ConfigModel{{1, 2}}, 0), PreconditionError);
}

TEST_CASE("configuration model pairs half-edges uniformly", "[graphgen]") {
    // Two vertices of degree 2: loops at both (prob 1/3) or a double edge (2/3).
    std::size_t loops = 0;
    const std::size_t R = 30000;
    for (std::uint64_t s = 0; s < R; ++s) {
        const auto g = generate(spec::ConfigModel{{2, 2}}, s);
        loops += g.edges[0].u == g.edges[0].v ? 1 : 0;
    }
    const double p = static_cast<double>(loops) / R;
    CHECK(std::abs(p - 1.0 / 3.0) < 4.0 * std::sqrt(2.0 / 9.0 / R));
}

TEST_CASE("Erdos-Renyi edge count", "[graphgen]") {
    const auto g = generate(spec::ER{1000, 0.01}, 7);
    const double mean = 1000.0 * 999.0 / 2.0 * 0.01;
    const double sd = std::sqrt(mean * 0.99);
    CHECK(std::abs(static_cast<double>(g.edges.size()) - mean) <= 4.0 * sd);
    for (const auto& e : g.edges) CHECK(e.u != e.v);
    CHECK_THROWS_AS(generate(spec::ER{10, 1.5}, 0), ParameterError);
}

TEST_CASE("graphon clipping and constant kernel", "[graphgen]") {
    // v = 2 everywhere: every product clips to 1, giving the complete graph.
    const auto full = generate(spec::Graphon{12, spec::Rank1Kernel{{2.0, 2.0}}}, 3);
    CHECK(full.edges.size() == 66);
    const auto none = generate(spec::Graphon{12, spec::ConstantKernel{0.0}}, 3);
    CHECK(none.edges.empty());
    const auto half = generate(spec::Graphon{400, spec::ConstantKernel{0.5}}, 3);
    const double mean = 400.0 * 399.0 / 4.0;
    CHECK(std::abs(static_cast<double>(half.edges.size()) - mean) <= 4.0 * std::sqrt(mean * 0.5));
}

TEST_CASE("random regular graph", "[graphgen]") {
    const auto g = generate(spec::Regular{1000, 3}, 11);
    CHECK(g.edges.size() == 1500);
    CHECK(all_equal(degrees(g), 3));
    CHECK_THROWS_AS(generate(spec::Regular{5, 3}, 0), ParameterError);
}

TEST_CASE("preferential attachment size and seed clique", "[graphgen]") {
    for (double gamma : {0.0, 0.3, 0.9}) {
        const spec::PrefAttach s{200, 3, gamma};
        const auto g = generate(s, 5);
        const std::size_t n0 = s.m + 1;
        CHECK(g.n == 200);
        CHECK(g.edges.size() == n0 * (n0 - 1) / 2 + s.m * (s.n - n0));
        for (std::size_t e = n0 * (n0 - 1) / 2; e < g.edges.size(); ++e) CHECK(g.edges[e].v < g.edges[e].u);
    }
    CHECK_THROWS_AS(generate(spec::PrefAttach{3, 3, 0.0}, 0), ParameterError);
}

TEST_CASE("preferential attachment favours early vertices", "[graphgen]") {
    const auto g = generate(spec::PrefAttach{5000, 2, 0.0}, 9);
    const auto d = degrees(g);
    double early = 0.0, late = 0.0;
    for (std::size_t v = 0; v < 50; ++v) early += d[v];
    for (std::size_t v = 4950; v < 5000; ++v) late += d[v];
    CHECK(early > 5.0 * late);
}

TEST_CASE("directed configuration model", "[graphgen]") {
    const std::vector<std::size_t> din = {2, 0, 1, 3}, dout = {1, 2, 2, 1};
    const auto g = generate(spec::DirectedCM{din, dout}, 4);
    CHECK(g.directed);
    CHECK(in_degrees(g) == din);
    CHECK(out_degrees(g) == dout);
    CHECK_THROWS_AS(generate(spec::DirectedCM{{1, 1}, {1, 0}}, 0), ParameterError);
}

TEST_CASE("generation is deterministic in the seed", "[graphgen]") {
    const GraphSpec s = spec::ER{300, 0.05};
    CHECK(generate(s, 42) == generate(s, 42));
    CHECK_FALSE(generate(s, 42) == generate(s, 43));
    const GraphSpec r = spec::Regular{100, 4};
    CHECK(generate(r, 1) == generate(r, 1));
}

TEST_CASE("sample_degrees", "[graphgen]") {
    const std::vector<double> delta3 = {0, 0, 0, 1};
    const auto d = sample_degrees(delta3, 10, 1);
    CHECK(all_equal(d.degrees, 3));
    CHECK(d.total() == 30);

    const std::vector<double> odd = {0, 0.5, 0.2, 0.3};
    for (std::uint64_t s = 0; s < 200; ++s) CHECK(sample_degrees(odd, 11, s).total() % 2 == 0);

    // Truncated power law k^-2.5 on 3..100.
    std::vector<double> f(101, 0.0);
    double z = 0.0;
    for (int k = 3; k <= 100; ++k) z += std::pow(k, -2.5);
    double mean = 0.0, second = 0.0;
    for (int k = 3; k <= 100; ++k) {
        f[k] = std::pow(k, -2.5) / z;
        mean += k * f[k];
        second += double(k) * k * f[k];
    }
    const std::size_t n = 10000;
    const auto pl = sample_degrees(f, n, 3);
    const double sample_mean = static_cast<double>(pl.total()) / n;
    const double se = std::sqrt((second - mean * mean) / n);
    CHECK(std::abs(sample_mean - mean) <= 3.0 * se);

    CHECK_THROWS_AS(sample_degrees({0.5, 0.4}, 5, 0), ParameterError);
    CHECK_THROWS_AS(sample_degrees({0.0, 1.0}, 5, 0), PreconditionError);
}

TEST_CASE("degree statistics", "[graphgen]") {
    const auto s = degree_stats(generate(spec::Complete{4}, 0));
    CHECK(s.d_min == 3);
    CHECK(s.d_max == 3);
    CHECK(s.m1 == Rational(3));
    CHECK(s.m2 == Rational(9));

    const auto cm = degree_stats(generate(spec::ConfigModel{{1, 3, 1, 3, 2, 4}}, 2));
    CHECK(cm.d_ave == Rational(14, 6));
    CHECK(cm.d_min == 1);
    CHECK(cm.d_max == 4);

    for (std::size_t d : {3, 4, 7}) CHECK(degree_stats(generate(spec::Regular{100, d}, 1)).m2 == Rational(d * d));

    const auto dd = directed_degree_stats(generate(spec::DirectedCM{{1, 2, 3}, {3, 2, 1}}, 0));
    CHECK(dd.in.m1 == Rational(2));
    CHECK(dd.out.m2 == Rational(14, 3));
}

TEST_CASE("graph JSON round trip", "[graphgen]") {
    const auto g = generate(spec::ConfigModel{{1, 3, 1, 3, 2, 4}}, 8);
    CHECK(graph_from_json(nlohmann::json::parse(graph_to_json(g).dump())) == g);
    const auto dg = generate(spec::DirectedCM{{1, 1}, {1, 1}}, 8);
    const auto path = (std::filesystem::temp_directory_path() / "ipslab_graph_roundtrip.json").string();
    write_graph(dg, path);
    CHECK(read_graph(path) == dg);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"n":2})")), ConfigError);
    CHECK_THROWS_AS(
        graph_from_json(nlohmann::json::parse(R"({"format":"ipslab-graph-v1","directed":false,"n":2,"edges":[[0,5]]})")),
        ParameterError);
}

TEST_CASE("graph spec JSON", "[graphgen]") {
    using nlohmann::json;
    CHECK(generate(graph_spec_from_json(json::parse(R"({"family":"regular","n":10,"d":3})")), 1) ==
          generate(spec::Regular{10, 3}, 1));
    CHECK(std::holds_alternative<spec::Torus>(
        graph_spec_from_json(json::parse(R"({"family":"torus","dim":2,"side":4})"))));
    CHECK_THROWS_AS(graph_spec_from_json(json::parse(R"({"family":"complete","n":3,"p":1})")), ConfigError);
    CHECK_THROWS_AS(graph_spec_from_json(json::parse(R"({"family":"lattice"})")), ConfigError);
}
