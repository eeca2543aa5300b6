#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipslab/analytics/birth_death.hpp"
#include "ipslab/analytics/cm_bounds.hpp"
#include "ipslab/analytics/contact.hpp"
#include "ipslab/analytics/curie_weiss.hpp"
#include "ipslab/analytics/cw_chain.hpp"
#include "ipslab/analytics/fisher_wright.hpp"
#include "ipslab/analytics/voter_profile.hpp"
#include "ipslab/annealed.hpp"
#include "ipslab/dual.hpp"
#include "ipslab/error.hpp"
#include "ipslab/harness/config.hpp"

namespace ipslab::harness {

using ojson = nlohmann::ordered_json;

namespace detail {

template <class T>
T param(const nlohmann::json& p, const char* key) {
    if (!p.contains(key)) throw ConfigError(std::string("missing parameter \"") + key + "\"");
    try {
        return p.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("parameter \"") + key + "\" has the wrong type");
    }
}

template <class T>
T param_or(const nlohmann::json& p, const char* key, T fallback) {
    return p.contains(key) ? param<T>(p, key) : fallback;
}

inline ojson triple_json(const analytics::MetastableTriple& t, bool with_barrier) {
    ojson v;
    v["m_minus"] = t.m_minus;
    v["m_star"] = t.m_star;
    v["m_plus"] = t.m_plus;
    if (with_barrier) {
        v["Gamma"] = t.Gamma;
        v["K"] = t.K;
    }
    return v;
}

struct Quantity {
    std::vector<const char*> keys;
    std::function<void(const nlohmann::json&, ojson&)> eval;  // fills value, bands, tolerances
};

inline const std::map<std::string, Quantity>& quantities() {
    using namespace analytics;
    static const std::map<std::string, Quantity> table = {
        {"entropy_I",
         {{"m"}, [](const auto& p, ojson& o) { o["value"] = entropy_I(param<double>(p, "m")); }}},
        {"entropy_IN",
         {{"m", "N"},
          [](const auto& p, ojson& o) {
              o["value"] = entropy_IN(param<double>(p, "m"), param<std::size_t>(p, "N"));
          }}},
        {"free_energy",
         {{"m", "beta", "h"},
          [](const auto& p, ojson& o) {
              o["value"] = free_energy(param<double>(p, "m"), param<double>(p, "beta"), param<double>(p, "h"));
          }}},
        {"chi", {{"beta"}, [](const auto& p, ojson& o) { o["value"] = chi(param<double>(p, "beta")); }}},
        {"stationary_points",
         {{"beta", "h"},
          [](const auto& p, ojson& o) {
              const auto roots = stationary_roots(param<double>(p, "beta"), param<double>(p, "h"));
              if (roots.size() == 3) {
                  o["value"] = triple_json({roots[0], roots[1], roots[2], 0.0, 0.0}, false);
              } else {
                  o["value"] = {{"roots", roots}};
              }
              o["tolerances"] = {{"bisection_width", 1e-14}};
          }}},
        {"kramers",
         {{"beta", "h", "N"},
          [](const auto& p, ojson& o) {
              const double beta = param<double>(p, "beta"), h = param<double>(p, "h");
              const auto t = kramers(beta, h);
              auto v = triple_json(t, true);
              if (p.contains("N")) {
                  const auto N = param<std::size_t>(p, "N");
                  v["mean_crossover"] = t.K * std::exp(static_cast<double>(N) * t.Gamma);
                  const auto c = cw_crossover(beta, h, N);
                  v["exact_lumped_crossover"] = c.exact.value;
              }
              o["value"] = v;
              o["tolerances"] = {{"bisection_width", 1e-14}};
          }}},
        {"i_delta",
         {{"x", "delta"},
          [](const auto& p, ojson& o) {
              const auto r = i_delta(param<double>(p, "x"), param<double>(p, "delta"));
              o["value"] = r.value;
              if (r.empty) o["empty"] = true;
              o["tolerances"] = {{"grid_points", 10000}, {"bisection_width", 1e-10}};
          }}},
        {"gamma_bounds",
         {{"degrees", "J", "h"},
          [](const auto& p, ojson& o) {
              const auto b = gamma_bounds(param<std::vector<std::size_t>>(p, "degrees"), param<double>(p, "J"),
                                          param<double>(p, "h"));
              o["value"] = {{"M_bar", b.M_bar},           {"M_bar_degenerate", b.M_bar_degenerate},
                            {"M_tilde", b.M_tilde},       {"d_ave", b.d_ave},
                            {"I_half", b.I_half},         {"Gamma_plus", b.Gamma_plus},
                            {"Gamma_minus", b.Gamma_minus}};
              o["bands"] = {{"Gamma_plus", {{"order", b.Gamma_plus_band}}}, {"Gamma_minus", "o(N), unquantified"}};
          }}},
        {"theta_d", {{"d"}, [](const auto& p, ojson& o) { o["value"] = theta_d(param<double>(p, "d")); }}},
        {"profile_f_d",
         {{"d", "t", "tail_tol"},
          [](const auto& p, ojson& o) {
              const double tol = param_or(p, "tail_tol", 1e-12);
              o["value"] = profile_f_d(param<double>(p, "d"), param<double>(p, "t"), tol);
              o["tolerances"] = {{"tail_tol", tol}};
          }}},
        {"theta_d_nu",
         {{"d", "nu", "tol"},
          [](const auto& p, ojson& o) {
              const double tol = param_or(p, "tol", 1e-12);
              const auto r = theta_d_nu_profile(param<double>(p, "d"), param<double>(p, "nu"), tol);
              o["value"] = r.theta;
              o["details"] = {{"Delta", r.Delta}, {"beta_d", r.beta_d}, {"rho_d", r.rho_d}, {"depth", r.depth}};
              o["tolerances"] = {{"tol", tol}};
          }}},
        {"theta_directed_eulerian",
         {{"m1", "m2"},
          [](const auto& p, ojson& o) {
              o["value"] = theta_directed_eulerian(param<double>(p, "m1"), param<double>(p, "m2"));
          }}},
        {"bd_mean_absorption",
         {{"up", "down", "start", "target"},
          [](const auto& p, ojson& o) {
              const auto r = bd_mean_absorption(param<std::vector<double>>(p, "up"),
                                                param<std::vector<double>>(p, "down"),
                                                param<std::size_t>(p, "start"), param<std::size_t>(p, "target"));
              if (std::isfinite(r.value))
                  o["value"] = r.value;
              else
                  o["value"] = nullptr;
              o["log_value"] = static_cast<double>(r.log_value);
              o["reachable"] = r.reachable;
          }}},
        {"lumped_mean_absorption",
         {{"model", "N", "start", "target"},
          [](const auto& p, ojson& o) {
              const auto rates = lumped_rates(model_from_json(p.at("model")), param<std::size_t>(p, "N"));
              const auto r = bd_mean_absorption(rates.up, rates.down, param<std::size_t>(p, "start"),
                                                param<std::size_t>(p, "target"));
              if (std::isfinite(r.value))
                  o["value"] = r.value;
              else
                  o["value"] = nullptr;
              o["log_value"] = static_cast<double>(r.log_value);
              o["reachable"] = r.reachable;
          }}},
        {"extinction_asymptotic",
         {{"N", "lambda"},
          [](const auto& p, ojson& o) {
              o["value"] = extinction_asymptotic(param<double>(p, "N"), param<double>(p, "lambda"));
          }}},
        {"extinction_log_product",
         {{"N", "lambda"},
          [](const auto& p, ojson& o) {
              o["value"] = extinction_log_product(param<double>(p, "N"), param<double>(p, "lambda"));
          }}},
        {"rho_exponent",
         {{"tau"},
          [](const auto& p, ojson& o) {
              const auto r = rho_exponent(param<double>(p, "tau"));
              o["value"] = {{"power", r.power}, {"log_power", r.log_power}};
          }}},
        {"kingman_ratio",
         {{"n"},
          [](const auto& p, ojson& o) {
              const auto r = kingman_ratio(param<std::int64_t>(p, "n"));
              o["value"] = to_double(r);
              o["exact"] = std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
          }}},
        {"annealed_meet4_formula",
         {{"pmf"},
          [](const auto& p, ojson& o) {
              o["value"] = annealed_meet4_formula(param<std::vector<double>>(p, "pmf"));
          }}},
        {"fw_heterozygosity",
         {{"theta", "x0", "s"},
          [](const auto& p, ojson& o) {
              o["value"] = fw_heterozygosity(param<double>(p, "theta"), param<double>(p, "x0"), param<double>(p, "s"));
          }}},
    };
    return table;
}

}  // namespace detail

inline std::vector<std::string> quantity_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : detail::quantities()) names.push_back(k);
    return names;
}

/// {quantity, inputs, value, bands?, tolerances} with a fixed key order.
inline ojson predict(const std::string& quantity, const nlohmann::json& params) {
    const auto& table = detail::quantities();
    const auto it = table.find(quantity);
    if (it == table.end()) throw ConfigError("unknown quantity \"" + quantity + "\"");
    if (!params.is_object()) throw ConfigError("params must be a JSON object");
    for (auto p = params.begin(); p != params.end(); ++p) {
        bool known = false;
        for (const char* k : it->second.keys) known = known || p.key() == k;
        if (!known) throw ConfigError("unknown parameter \"" + p.key() + "\" for " + quantity);
    }
    ojson scratch;
    it->second.eval(params, scratch);
    ojson out;
    out["quantity"] = quantity;
    out["inputs"] = ojson::parse(params.dump());
    out["value"] = scratch["value"];
    for (const char* extra : {"exact", "empty", "log_value", "reachable", "details"})
        if (scratch.contains(extra)) out[extra] = scratch[extra];
    if (scratch.contains("bands")) out["bands"] = scratch["bands"];
    out["tolerances"] = scratch.contains("tolerances") ? scratch["tolerances"] : ojson::object();
    return out;
}

}  // namespace ipslab::harness
