#pragma once

#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

#include <json.hpp>

#include "ipslab/error.hpp"
#include "ipslab/graph.hpp"
#include "ipslab/graphgen.hpp"

namespace ipslab {

inline constexpr const char* kGraphFormat = "ipslab-graph-v1";

/// {"format":"ipslab-graph-v1","directed":bool,"n":int,"edges":[[u,v],...]}
inline nlohmann::ordered_json graph_to_json(const Graph& g) {
    nlohmann::ordered_json j;
    j["format"] = kGraphFormat;
    j["directed"] = g.directed;
    j["n"] = g.n;
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : g.edges) edges.push_back({e.u, e.v});
    j["edges"] = std::move(edges);
    return j;
}

inline Graph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("format", "") != kGraphFormat)
        throw ConfigError(std::string("graph document must have format \"") + kGraphFormat + "\"");
    Graph g;
    g.directed = j.at("directed").get<bool>();
    g.n = j.at("n").get<std::size_t>();
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw ConfigError("each edge must be a [u, v] pair");
        g.edges.push_back({e[0].get<Vertex>(), e[1].get<Vertex>()});
    }
    g.validate();
    return g;
}

inline void write_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << graph_to_json(g).dump() << '\n';
}

inline Graph read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open graph file " + path);
    try {
        return graph_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed graph file " + path + ": " + e.what());
    }
}

namespace detail {

inline void only_keys(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& where) {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

inline spec::Kernel kernel_from_json(const nlohmann::json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "rank1") {
        only_keys(j, {"type", "v"}, "rank1 kernel");
        return spec::Rank1Kernel{j.at("v").get<std::vector<double>>()};
    }
    if (type == "grid") {
        only_keys(j, {"type", "k", "values"}, "grid kernel");
        return spec::GridKernel{j.at("k").get<std::size_t>(), j.at("values").get<std::vector<double>>()};
    }
    if (type == "constant") {
        only_keys(j, {"type", "p"}, "constant kernel");
        return spec::ConstantKernel{j.at("p").get<double>()};
    }
    throw ConfigError("unknown kernel type \"" + type + "\"");
}

}  // namespace detail

/// Graph family from JSON, e.g. {"family":"regular","n":1000,"d":3}.
/// Families: complete, torus, er, graphon, config_model, regular, pref_attach, directed_cm.
inline GraphSpec graph_spec_from_json(const nlohmann::json& j) {
    using detail::only_keys;
    try {
        const auto family = j.at("family").get<std::string>();
        if (family == "complete") {
            only_keys(j, {"family", "n"}, family);
            return spec::Complete{j.at("n").get<std::size_t>()};
        }
        if (family == "torus") {
            only_keys(j, {"family", "dim", "side"}, family);
            return spec::Torus{j.at("dim").get<std::size_t>(), j.at("side").get<std::size_t>()};
        }
        if (family == "er") {
            only_keys(j, {"family", "n", "p"}, family);
            return spec::ER{j.at("n").get<std::size_t>(), j.at("p").get<double>()};
        }
        if (family == "graphon") {
            only_keys(j, {"family", "n", "kernel"}, family);
            return spec::Graphon{j.at("n").get<std::size_t>(), detail::kernel_from_json(j.at("kernel"))};
        }
        if (family == "config_model") {
            only_keys(j, {"family", "degrees"}, family);
            return spec::ConfigModel{j.at("degrees").get<std::vector<std::size_t>>()};
        }
        if (family == "regular") {
            only_keys(j, {"family", "n", "d"}, family);
            return spec::Regular{j.at("n").get<std::size_t>(), j.at("d").get<std::size_t>()};
        }
        if (family == "pref_attach") {
            only_keys(j, {"family", "n", "m", "gamma"}, family);
            return spec::PrefAttach{j.at("n").get<std::size_t>(), j.at("m").get<std::size_t>(),
                                    j.value("gamma", 0.0)};
        }
        if (family == "directed_cm") {
            only_keys(j, {"family", "din", "dout"}, family);
            return spec::DirectedCM{j.at("din").get<std::vector<std::size_t>>(),
                                    j.at("dout").get<std::vector<std::size_t>>()};
        }
        throw ConfigError("unknown graph family \"" + family + "\"");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed graph spec: ") + e.what());
    }
}

}  // namespace ipslab
