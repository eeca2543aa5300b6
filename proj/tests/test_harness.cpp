#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ipslab/harness/config.hpp"
#include "ipslab/harness/experiments.hpp"
#include "ipslab/harness/predict.hpp"
#include "ipslab/rng.hpp"

using namespace ipslab;
using namespace ipslab::harness;
namespace fs = std::filesystem;

namespace {

std::uint64_t splitmix_reference(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("ipslab_harness_" + name);
    fs::remove_all(p);
    return p;
}

ExperimentConfig small_ensemble(const fs::path& out, std::size_t reps, std::size_t workers) {
    auto c = config_from_json(nlohmann::json::parse(R"({
        "id": "ensemble", "seed": 99,
        "graph": {"family": "er", "n": 40, "p": 0.15},
        "model": {"type": "cp", "lambda": 0.4},
        "init": "bernoulli:0.5", "tmax": 6, "sample_dt": 0.5
    })"));
    c.replicas = reps;
    c.workers = workers;
    c.out_dir = out.string();
    return c;
}

int run_cli(const std::string& args) {
    const char* cli = std::getenv("IPSLAB_CLI");
    REQUIRE(cli != nullptr);
    const int rc = std::system((std::string("\"") + cli + "\" " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("seed derivation", "[harness]") {
    for (std::uint64_t m : {0ull, 1ull, 20240601ull, ~0ull})
        for (std::uint64_t r : {0ull, 1ull, 77ull})
            CHECK(derive_seed(m, r) == splitmix_reference(splitmix_reference(m) + (r + 1) * 0x9E3779B97F4A7C15ULL));

    Rng rng(5);
    for (int i = 0; i < 1000000; ++i) {
        const auto s = rng.next();
        if (derive_seed(s, 0) == derive_seed(s, 1)) FAIL("replica seeds coincide for master " << s);
    }

    // 3000 masters x 3000 replicas.
    std::vector<std::uint64_t> all;
    all.reserve(9000000);
    for (std::uint64_t m = 0; m < 3000; ++m)
        for (std::uint64_t r = 0; r < 3000; ++r) all.push_back(derive_seed(m, r));
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
}

TEST_CASE("init specs", "[harness]") {
    CHECK(parse_init("all-one").kind == InitSpec::Kind::all_one);
    CHECK(parse_init("all-zero").kind == InitSpec::Kind::all_zero);
    const auto b = parse_init("bernoulli:0.25");
    CHECK(b.kind == InitSpec::Kind::bernoulli);
    CHECK(b.u == 0.25);
    CHECK(parse_init("explicit:1,0,1").states == std::vector<int>{1, 0, 1});
    for (const char* bad : {"bernoulli:1.5", "bernoulli:", "bernoulli:0.5x", "explicit:1,,0", "ones", ""})
        CHECK_THROWS_AS(parse_init(bad), ConfigError);

    const ModelParams ising = model::SIM{0.5, 1.0, 0.0, {}};
    const auto z = make_init(parse_init("all-zero"), 4, ising, 0);
    CHECK(z == Configuration(4, -1));
    CHECK_THROWS(make_init(parse_init("explicit:1,0,1"), 3, ising, 0));
    CHECK_THROWS_AS(make_init(parse_init("explicit:1,0"), 3, model::VM{}, 0), ConfigError);
}

TEST_CASE("model and experiment config parsing", "[harness]") {
    using nlohmann::json;
    const auto sim = model_from_json(json::parse(R"({"type":"sim","beta":0.7,"h":0.2})"));
    REQUIRE(std::holds_alternative<model::SIM>(sim));
    CHECK(std::get<model::SIM>(sim).J == 1.0);
    CHECK(std::get<model::SIM>(sim).h == 0.2);
    CHECK(std::get<model::CP>(model_from_json(json::parse(R"({"type":"cp","lambda":2})"))).lambda == 2.0);
    CHECK_THROWS_AS(model_from_json(json::parse(R"({"type":"vm","lambda":2})")), ConfigError);
    CHECK_THROWS_AS(model_from_json(json::parse(R"({"type":"glauber"})")), ConfigError);
    CHECK_THROWS_AS(model_from_json(json::parse(R"({"type":"cp"})")), ConfigError);
    CHECK(model_to_json(sim).dump() == R"({"type":"sim","beta":0.7,"J":1.0,"h":0.2})");

    const auto c = config_from_json(json::parse(R"({"id":"cw-kramers","seed":3,"replicas":2})"));
    CHECK(c.id == "cw-kramers");
    CHECK(c.seed == 3);
    CHECK(c.replicas == std::optional<std::size_t>(2));
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"id":"x","replica":2})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"id":"x","replicas":0})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"id":"x","tmax":1,"time_cap":1})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"seed":1})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"id":"x","graph_file":"/nonexistent/g.json"})")), ConfigError);
    CHECK_THROWS_AS(read_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("prediction output layout", "[harness]") {
    const auto p = predict("kingman_ratio", nlohmann::json::parse(R"({"n":4})"));
    std::vector<std::string> keys;
    for (auto it = p.begin(); it != p.end(); ++it) keys.push_back(it.key());
    REQUIRE(keys.size() >= 4);
    CHECK(keys.front() == "quantity");
    CHECK(keys[1] == "inputs");
    CHECK(keys[2] == "value");
    CHECK(keys.back() == "tolerances");
    CHECK(p["value"].get<double>() == Catch::Approx(1.5));
    CHECK_THROWS_AS(predict("kingman_ratio", nlohmann::json::parse(R"({"m":4})")), ConfigError);
    CHECK_THROWS_AS(predict("no_such_thing", nlohmann::json::object()), ConfigError);
    for (const auto& q : quantity_names()) CHECK_FALSE(q.empty());
}

TEST_CASE("single-replica manifest", "[harness]") {
    const auto out = scratch("manifest");
    ExperimentConfig cfg;
    cfg.id = "cp-exponential-law";
    cfg.seed = 4242;
    cfg.replicas = 1;
    cfg.out_dir = out.string();
    run_experiment(cfg);
    const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
    REQUIRE(m["replica_seeds"].size() == 1);
    CHECK(m["replica_seeds"][0].get<std::uint64_t>() == derive_seed(4242, 0));
    CHECK(m["master_seed"].get<std::uint64_t>() == 4242);
    const auto v = nlohmann::json::parse(slurp(out / "verdict.json"));
    for (const auto& c : v["checks"])
        for (const char* k : {"reference value", "predicted value", "measured value", "tolerance", "pass"})
            CHECK(c.contains(k));
    fs::remove_all(out);
}

TEST_CASE("reproducibility of ensemble runs", "[harness]") {
    const auto a = scratch("rep_a"), b = scratch("rep_b"), c = scratch("rep_c"), d = scratch("rep_d");
    run_experiment(small_ensemble(a, 6, 1));
    run_experiment(small_ensemble(b, 6, 1));
    run_experiment(small_ensemble(c, 6, 3));
    run_experiment(small_ensemble(d, 7, 2));
    for (const char* f : {"trajectories.csv", "absorption.csv", "summary.json", "manifest.json", "verdict.json"}) {
        CHECK(slurp(a / f) == slurp(b / f));
        CHECK(slurp(a / f) == slurp(c / f));
    }
    // One more replica leaves the first six untouched.
    const auto t6 = slurp(a / "trajectories.csv"), t7 = slurp(d / "trajectories.csv");
    CHECK(t7.size() > t6.size());
    CHECK(t7.compare(0, t6.size(), t6) == 0);
    const auto a6 = slurp(a / "absorption.csv"), a7 = slurp(d / "absorption.csv");
    CHECK(a7.compare(0, a6.size(), a6) == 0);
    for (const auto& p : {a, b, c, d}) fs::remove_all(p);
}

TEST_CASE("experiment registry", "[harness]") {
    ExperimentConfig cfg;
    cfg.id = "no-such-experiment";
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
    cfg.id = "cw-kramers";
    cfg.tmax = 10.0;
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
    for (int n = 1; n <= 12; ++n) CHECK(registry().at(id_for_criterion(n)).criterion == n);
    CHECK_THROWS_AS(id_for_criterion(13), ConfigError);
}

TEST_CASE("command line", "[harness][cli]") {
    if (!std::getenv("IPSLAB_CLI")) SKIP("IPSLAB_CLI not set");
    const auto out = scratch("cli");
    fs::create_directories(out);
    const auto graph = (out / "g.json").string();
    CHECK(run_cli(R"(gen --spec '{"family":"regular","n":50,"d":3}' --seed 2 --out )" + graph) == 0);
    CHECK(fs::exists(graph));
    CHECK(run_cli("sim --graph " + graph + " --model vm --init bernoulli:0.5 --tmax 5 --reps 2 --out " +
                  (out / "sim").string()) == 0);
    CHECK(fs::exists(out / "sim" / "trajectories.csv"));
    CHECK(run_cli("dual --graph " + graph + " --mode all --reps 3 --out " + (out / "dual").string()) == 0);
    CHECK(fs::exists(out / "dual" / "coalescence.csv"));
    CHECK(run_cli(R"(predict --quantity theta_d --params '{"d":3}')") == 0);
    CHECK(run_cli("experiment --list") == 0);

    CHECK(run_cli("sim --graph " + graph + " --model cp --tmax 1") == 1);  // missing lambda
    CHECK(run_cli("gen --spec '{\"family\":\"lattice\"}'") == 1);
    CHECK(run_cli("predict --quantity nothing") == 1);
    CHECK(run_cli("experiment --id nothing") == 1);
    CHECK(run_cli("frobnicate") == 1);
    fs::remove_all(out);
}

TEST_CASE("shipped configs parse", "[harness][cli]") {
    const char* dir = std::getenv("IPSLAB_CONFIGS");
    if (!dir) SKIP("IPSLAB_CONFIGS not set");
    std::size_t count = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        ++count;
        const auto c = read_config(e.path().string());
        CHECK(registry().count(c.id) == 1);
    }
    CHECK(count > 0);
}
