// ipslab command line: gen, sim, dual, predict, experiment.
// Exit codes: 0 pass, 2 a quantitative check failed, 1 error.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipslab/ipslab.hpp"

namespace {

using namespace ipslab;
using ojson = nlohmann::ordered_json;

/// A JSON document given inline or as a file path.
nlohmann::json json_arg(const std::string& text, const std::string& what) {
    std::string body = text;
    if (!text.empty() && text.front() != '{' && text.front() != '[') {
        std::ifstream f(text);
        if (!f) throw ConfigError("cannot open " + what + " file " + text);
        std::stringstream ss;
        ss << f.rdbuf();
        body = ss.str();
    }
    try {
        return nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed " + what + ": " + e.what());
    }
}

struct GenArgs {
    std::string spec, out;
    std::uint64_t seed = 1;
};

int cmd_gen(const GenArgs& a) {
    const auto g = generate(graph_spec_from_json(json_arg(a.spec, "graph spec")), a.seed);
    if (a.out.empty() || a.out == "-")
        std::cout << graph_to_json(g).dump() << '\n';
    else
        write_graph(g, a.out);
    return 0;
}

struct SimArgs {
    std::string graph, model, init = "all-one", out = ".", record;
    std::optional<double> beta, J, h, lambda, nu, sample_dt;
    double tmax = 1.0;
    std::size_t reps = 1, workers = 0;
    std::uint64_t seed = 1;
};

int cmd_sim(const SimArgs& a) {
    harness::ExperimentConfig cfg;
    cfg.id = "ensemble";
    cfg.seed = a.seed;
    cfg.replicas = a.reps;
    cfg.out_dir = a.out;
    cfg.workers = a.workers;
    if (!std::filesystem::exists(a.graph)) throw ConfigError("graph file " + a.graph + " does not exist");
    cfg.graph_file = a.graph;
    nlohmann::json m = {{"type", a.model}};
    if (a.model == "sim") {
        if (!a.beta) throw ConfigError("--model sim needs --beta");
        if (a.lambda) throw ConfigError("--lambda applies to cp only");
        m["beta"] = *a.beta;
        m["J"] = a.J.value_or(1.0);
        m["h"] = a.h.value_or(0.0);
    } else if (a.model == "cp") {
        if (!a.lambda) throw ConfigError("--model cp needs --lambda");
        if (a.beta || a.J || a.h) throw ConfigError("--beta/--J/--h apply to sim only");
        m["lambda"] = *a.lambda;
    } else if (a.beta || a.J || a.h || a.lambda) {
        throw ConfigError("the voter model takes no parameters");
    }
    cfg.model = m;
    cfg.init = a.init;
    cfg.tmax = a.tmax;
    cfg.sample_dt = a.sample_dt;
    cfg.nu = a.nu;
    std::stringstream ss(a.record);
    for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) cfg.record.push_back(tok);
    const auto res = harness::run_experiment(cfg);
    std::cout << harness::to_json(res).dump(2) << '\n';
    return res.pass ? 0 : 2;
}

struct DualArgs {
    std::string graph, mode = "pair", out = ".";
    std::size_t reps = 1, workers = 0;
    std::uint64_t seed = 1;
    Vertex x = 0, y = 1;
    double cap = 1e9;
};

int cmd_dual(const DualArgs& a) {
    const auto g = read_graph(a.graph);
    std::filesystem::create_directories(a.out);
    const auto path = [&](const char* f) { return (std::filesystem::path(a.out) / f).string(); };
    ojson manifest;
    manifest["mode"] = a.mode;
    manifest["master_seed"] = a.seed;
    manifest["replica_seed_rule"] = "derive_seed(master_seed, r)";
    ojson seeds = ojson::array();
    for (std::size_t r = 0; r < a.reps; ++r) seeds.push_back(derive_seed(a.seed, r));
    manifest["replica_seeds"] = seeds;
    ojson summary;
    if (a.mode == "pair" || a.mode == "stationary-pair") {
        const bool stationary = a.mode == "stationary-pair";
        const auto runs = harness::run_replicas(
            a.reps,
            [&](std::size_t r) {
                const auto s = derive_seed(a.seed, r);
                return stationary ? meeting_time_stationary(g, s, a.cap) : meeting_time(g, a.x, a.y, s, a.cap);
            },
            a.workers);
        auto f = harness::open_out(path("meeting.csv"));
        harness::write_meeting(f, runs);
        std::vector<double> taus;
        std::size_t capped = 0;
        for (const auto& m : runs) {
            taus.push_back(m.tau);
            capped += m.capped ? 1 : 0;
        }
        summary["mean_tau"] = taus.empty() ? 0.0 : std::accumulate(taus.begin(), taus.end(), 0.0) / taus.size();
        summary["capped"] = capped;
        manifest["files"] = {"meeting.csv"};
    } else if (a.mode == "all") {
        std::vector<Vertex> starts(g.n);
        std::iota(starts.begin(), starts.end(), Vertex{0});
        const auto runs = harness::run_replicas(
            a.reps, [&](std::size_t r) { return coalescing_walks(g, starts, a.cap, derive_seed(a.seed, r)); },
            a.workers);
        auto f = harness::open_out(path("coalescence.csv"));
        harness::write_coalescence(f, runs);
        double total = 0.0;
        std::size_t capped = 0;
        for (const auto& w : runs) {
            total += w.end_time;
            capped += w.capped ? 1 : 0;
        }
        summary["mean_coalescence_time"] = runs.empty() ? 0.0 : total / runs.size();
        summary["capped"] = capped;
        manifest["files"] = {"coalescence.csv"};
    } else {
        throw ConfigError("unknown dual mode \"" + a.mode + "\" (pair | all | stationary-pair)");
    }
    std::ofstream(path("manifest.json")) << manifest.dump(2) << '\n';
    summary["replicas"] = a.reps;
    std::cout << summary.dump(2) << '\n';
    return 0;
}

struct PredictArgs {
    std::string quantity, params = "{}";
    bool list = false;
};

int cmd_predict(const PredictArgs& a) {
    if (a.list) {
        for (const auto& q : harness::quantity_names()) std::cout << q << '\n';
        return 0;
    }
    if (a.quantity.empty()) throw ConfigError("--quantity is required");
    std::cout << harness::predict(a.quantity, json_arg(a.params, "params")).dump(2) << '\n';
    return 0;
}

struct ExperimentArgs {
    std::string id, config, out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicas, workers;
    bool list = false;
};

int cmd_experiment(const ExperimentArgs& a) {
    if (a.list) {
        for (const auto& [id, reg] : harness::registry()) std::cout << id << '\n';
        return 0;
    }
    harness::ExperimentConfig cfg;
    if (!a.config.empty()) {
        cfg = harness::read_config(a.config);
        if (!a.id.empty() && a.id != cfg.id) throw ConfigError("--id disagrees with the config file");
    } else {
        if (a.id.empty()) throw ConfigError("give --id or --config");
        cfg.id = a.id;
    }
    if (a.seed) cfg.seed = *a.seed;
    if (a.replicas) cfg.replicas = *a.replicas;
    if (a.workers) cfg.workers = *a.workers;
    if (!a.out.empty()) cfg.out_dir = a.out;
    const auto res = harness::run_experiment(cfg);
    std::cout << harness::to_json(res).dump(2) << '\n';
    return res.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interacting particle systems on graphs"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "generate a graph");
    g->add_option("--spec", gen.spec, "graph spec: JSON file or inline JSON")->required();
    g->add_option("--seed", gen.seed, "seed");
    g->add_option("--out", gen.out, "output graph file (stdout when omitted)");

    SimArgs sim;
    auto* s = app.add_subcommand("sim", "simulate an ensemble");
    s->add_option("--graph", sim.graph, "graph file")->required();
    s->add_option("--model", sim.model, "sim | vm | cp")->required()->check(CLI::IsMember({"sim", "vm", "cp"}));
    s->add_option("--beta", sim.beta, "inverse temperature");
    s->add_option("--J", sim.J, "coupling");
    s->set_help_flag("--help", "print this help and exit");  // -h would clash with --h
    s->add_option("--h", sim.h, "external field");
    s->add_option("--lambda", sim.lambda, "infection rate");
    s->add_option("--nu", sim.nu, "rewiring intensity");
    s->add_option("--init", sim.init, "all-one | all-zero | bernoulli:u | explicit:s0,s1,...");
    s->add_option("--tmax", sim.tmax, "time horizon")->required();
    s->add_option("--reps", sim.reps, "replicas")->check(CLI::PositiveNumber);
    s->add_option("--seed", sim.seed, "master seed");
    s->add_option("--sample-dt", sim.sample_dt, "sampling interval");
    s->add_option("--record", sim.record, "comma-separated observables");
    s->add_option("--workers", sim.workers, "worker threads (0: all cores)");
    s->add_option("--out", sim.out, "output directory");

    DualArgs dual;
    auto* d = app.add_subcommand("dual", "coalescing random walks");
    d->add_option("--graph", dual.graph, "graph file")->required();
    d->add_option("--mode", dual.mode, "pair | all | stationary-pair")
        ->check(CLI::IsMember({"pair", "all", "stationary-pair"}));
    d->add_option("--reps", dual.reps, "replicas")->check(CLI::PositiveNumber);
    d->add_option("--seed", dual.seed, "master seed");
    d->add_option("--x", dual.x, "first start vertex (pair mode)");
    d->add_option("--y", dual.y, "second start vertex (pair mode)");
    d->add_option("--cap", dual.cap, "time cap");
    d->add_option("--workers", dual.workers, "worker threads (0: all cores)");
    d->add_option("--out", dual.out, "output directory");

    PredictArgs pred;
    auto* p = app.add_subcommand("predict", "evaluate an analytic quantity");
    p->add_option("--quantity", pred.quantity, "quantity name");
    p->add_option("--params", pred.params, "parameters: JSON file or inline JSON");
    p->add_flag("--list", pred.list, "list quantities");

    ExperimentArgs ex;
    auto* e = app.add_subcommand("experiment", "run a registered experiment");
    e->add_option("--id", ex.id, "experiment id");
    e->add_option("--config", ex.config, "experiment config file");
    e->add_option("--seed", ex.seed, "master seed");
    e->add_option("--replicas", ex.replicas, "override every ensemble size")->check(CLI::PositiveNumber);
    e->add_option("--workers", ex.workers, "worker threads (0: all cores)");
    e->add_option("--out", ex.out, "output directory");
    e->add_flag("--list", ex.list, "list experiment ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }
    try {
        if (*g) return cmd_gen(gen);
        if (*s) return cmd_sim(sim);
        if (*d) return cmd_dual(dual);
        if (*p) return cmd_predict(pred);
        if (*e) return cmd_experiment(ex);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 1;
}
