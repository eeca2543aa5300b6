#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ipslab/error.hpp"
#include "ipslab/graph_io.hpp"
#include "ipslab/model.hpp"
#include "ipslab/rng.hpp"

namespace ipslab::harness {

/// Initial condition: all-one | all-zero | bernoulli:u | explicit:s0,s1,...
/// For the Ising model "one" is +1 and "zero" is -1.
struct InitSpec {
    enum class Kind { all_one, all_zero, bernoulli, explicit_states };
    Kind kind = Kind::all_one;
    double u = 0.5;
    std::vector<int> states;
};

inline InitSpec parse_init(const std::string& s) {
    InitSpec r;
    if (s == "all-one") return r;
    if (s == "all-zero") {
        r.kind = InitSpec::Kind::all_zero;
        return r;
    }
    auto tail = [&](const std::string& prefix) { return s.substr(prefix.size()); };
    try {
        if (s.rfind("bernoulli:", 0) == 0) {
            r.kind = InitSpec::Kind::bernoulli;
            std::size_t used = 0;
            const auto rest = tail("bernoulli:");
            r.u = std::stod(rest, &used);
            if (used != rest.size() || !(r.u >= 0.0 && r.u <= 1.0)) throw ConfigError("");
            return r;
        }
        if (s.rfind("explicit:", 0) == 0) {
            r.kind = InitSpec::Kind::explicit_states;
            std::string rest = tail("explicit:");
            std::size_t pos = 0;
            while (pos <= rest.size()) {
                const auto comma = rest.find(',', pos);
                const auto tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
                std::size_t used = 0;
                r.states.push_back(std::stoi(tok, &used));
                if (used != tok.size()) throw ConfigError("");
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            return r;
        }
    } catch (const std::logic_error&) {
    } catch (const ConfigError&) {
    }
    throw ConfigError("bad init spec \"" + s + "\" (all-one | all-zero | bernoulli:u | explicit:s0,s1,...)");
}

/// Builds the configuration on n vertices; Bernoulli draws use `seed`.
inline Configuration make_init(const InitSpec& spec, std::size_t n, const ModelParams& m, std::uint64_t seed) {
    const std::int8_t one = 1;
    const std::int8_t zero = is_sim(m) ? -1 : 0;
    Configuration c(n, zero);
    switch (spec.kind) {
        case InitSpec::Kind::all_one:
            std::fill(c.begin(), c.end(), one);
            break;
        case InitSpec::Kind::all_zero:
            break;
        case InitSpec::Kind::bernoulli: {
            Rng rng(seed);
            for (auto& s : c) s = rng.bernoulli(spec.u) ? one : zero;
            break;
        }
        case InitSpec::Kind::explicit_states:
            if (spec.states.size() != n) throw ConfigError("explicit init has the wrong length");
            for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<std::int8_t>(spec.states[i]);
            break;
    }
    validate_configuration(m, c, n);
    return c;
}

/// {"type":"sim","beta":..,"J":..,"h":..} | {"type":"vm"} | {"type":"cp","lambda":..}
inline ModelParams model_from_json(const nlohmann::json& j) {
    using detail::only_keys;
    try {
        const auto type = j.at("type").get<std::string>();
        if (type == "sim") {
            only_keys(j, {"type", "beta", "J", "h", "couplings"}, "sim model");
            model::SIM s;
            s.beta = j.at("beta").get<double>();
            s.J = j.value("J", 1.0);
            s.h = j.value("h", 0.0);
            if (j.contains("couplings")) s.couplings = j.at("couplings").get<std::vector<double>>();
            return s;
        }
        if (type == "vm") {
            only_keys(j, {"type"}, "vm model");
            return model::VM{};
        }
        if (type == "cp") {
            only_keys(j, {"type", "lambda"}, "cp model");
            return model::CP{j.at("lambda").get<double>()};
        }
        throw ConfigError("unknown model type \"" + type + "\"");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed model: ") + e.what());
    }
}

inline nlohmann::ordered_json model_to_json(const ModelParams& m) {
    nlohmann::ordered_json j;
    j["type"] = model_name(m);
    if (const auto* s = std::get_if<model::SIM>(&m)) {
        j["beta"] = s->beta;
        j["J"] = s->J;
        j["h"] = s->h;
        if (!s->couplings.empty()) j["couplings"] = s->couplings;
    } else if (const auto* c = std::get_if<model::CP>(&m)) {
        j["lambda"] = c->lambda;
    }
    return j;
}

/// One experiment run. Registered experiments carry their own graph, model and
/// horizon; only the "ensemble" experiment reads graph/model/init/tmax.
struct ExperimentConfig {
    std::string id;
    std::uint64_t seed = 1;
    std::optional<std::size_t> replicas;  // overrides every ensemble size of the experiment
    std::string out_dir = ".";
    std::size_t workers = 0;               // 0: one per hardware thread

    std::optional<nlohmann::json> graph;   // graph spec
    std::optional<std::string> graph_file;
    std::optional<nlohmann::json> model;
    std::optional<std::string> init;
    std::optional<double> tmax;
    std::optional<double> sample_dt;
    std::optional<double> nu;
    std::vector<std::string> record;       // observable names; empty picks a default
};

inline ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base = {}) {
    detail::only_keys(j,
                      {"id", "seed", "replicas", "out", "workers", "graph", "graph_file", "model", "init", "tmax",
                       "time_cap", "sample_dt", "nu", "record"},
                      "experiment config");
    ExperimentConfig c;
    try {
        c.id = j.at("id").get<std::string>();
        c.seed = j.value("seed", std::uint64_t{1});
        if (j.contains("replicas")) {
            const auto r = j.at("replicas").get<std::int64_t>();
            if (r < 1) throw ConfigError("replicas must be >= 1");
            c.replicas = static_cast<std::size_t>(r);
        }
        if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
        c.workers = j.value("workers", std::size_t{0});
        if (j.contains("graph")) c.graph = j.at("graph");
        if (j.contains("graph_file")) {
            std::filesystem::path p = j.at("graph_file").get<std::string>();
            if (p.is_relative() && !base.empty()) p = base / p;
            if (!std::filesystem::exists(p)) throw ConfigError("graph file " + p.string() + " does not exist");
            c.graph_file = p.string();
        }
        if (c.graph && c.graph_file) throw ConfigError("give either graph or graph_file, not both");
        if (j.contains("model")) c.model = j.at("model");
        if (j.contains("init")) c.init = j.at("init").get<std::string>();
        if (j.contains("tmax") && j.contains("time_cap")) throw ConfigError("give either tmax or time_cap");
        if (j.contains("tmax")) c.tmax = j.at("tmax").get<double>();
        if (j.contains("time_cap")) c.tmax = j.at("time_cap").get<double>();
        if (j.contains("sample_dt")) c.sample_dt = j.at("sample_dt").get<double>();
        if (j.contains("nu")) c.nu = j.at("nu").get<double>();
        if (j.contains("record")) c.record = j.at("record").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed experiment config: ") + e.what());
    }
    return c;
}

inline ExperimentConfig read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed config " + path + ": " + e.what());
    }
    return config_from_json(j, std::filesystem::path(path).parent_path());
}

}  // namespace ipslab::harness
