#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipslab/analytics/birth_death.hpp"
#include "ipslab/analytics/cm_bounds.hpp"
#include "ipslab/analytics/contact.hpp"
#include "ipslab/analytics/cw_chain.hpp"
#include "ipslab/analytics/fisher_wright.hpp"
#include "ipslab/analytics/voter_profile.hpp"
#include "ipslab/annealed.hpp"
#include "ipslab/dual.hpp"
#include "ipslab/dynamics.hpp"
#include "ipslab/graph_io.hpp"
#include "ipslab/graphgen.hpp"
#include "ipslab/graphical.hpp"
#include "ipslab/harness/config.hpp"
#include "ipslab/harness/csv.hpp"
#include "ipslab/harness/parallel.hpp"
#include "ipslab/obsstats.hpp"

namespace ipslab::harness {

using ojson = nlohmann::ordered_json;

/// One quantitative comparison in a verdict.
struct Check {
    std::string name;
    ojson reference;  // value stated by the theory being tested, null if none
    ojson predicted;  // value computed by the analytics module (or the exact oracle)
    ojson measured;
    ojson tolerance;
    bool pass = false;
};

struct ExperimentResult {
    std::string id;
    std::string claim;
    bool pass = true;
    std::vector<Check> checks;
    ojson details = ojson::object();  // supporting numbers, not part of the verdict
};

inline ojson to_json(const Check& c) {
    ojson j;
    j["name"] = c.name;
    j["reference value"] = c.reference;
    j["predicted value"] = c.predicted;
    j["measured value"] = c.measured;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    return j;
}

inline ojson to_json(const ExperimentResult& r) {
    ojson j;
    j["id"] = r.id;
    j["claim"] = r.claim;
    j["pass"] = r.pass;
    j["checks"] = ojson::array();
    for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
    j["details"] = r.details;
    return j;
}

namespace checks {

inline ojson num_or_null(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

/// |measured - predicted| <= tol
inline Check absolute(std::string name, ojson reference, double predicted, double measured, double tol) {
    return {std::move(name), std::move(reference), predicted, num_or_null(measured),
            {{"kind", "absolute"}, {"value", tol}}, std::abs(measured - predicted) <= tol};
}

/// |measured / predicted - 1| <= rel
inline Check relative(std::string name, ojson reference, double predicted, double measured, double rel) {
    return {std::move(name), std::move(reference), predicted, num_or_null(measured),
            {{"kind", "relative"}, {"value", rel}}, std::abs(measured / predicted - 1.0) <= rel};
}

/// |measured - predicted| <= k standard errors
inline Check standard_errors(std::string name, ojson reference, double predicted, double measured, double se,
                             double k) {
    return {std::move(name),
            std::move(reference),
            predicted,
            num_or_null(measured),
            {{"kind", "standard errors"}, {"value", k}, {"standard error", se}},
            std::abs(measured - predicted) <= k * se};
}

/// lo <= measured <= hi
inline Check range(std::string name, ojson reference, ojson predicted, double measured, double lo, double hi) {
    return {std::move(name), std::move(reference), std::move(predicted), num_or_null(measured),
            {{"kind", "range"}, {"low", lo}, {"high", hi}}, measured >= lo && measured <= hi};
}

/// measured <= bound
inline Check at_most(std::string name, ojson reference, ojson predicted, double measured, double bound) {
    return {std::move(name), std::move(reference), std::move(predicted), num_or_null(measured),
            {{"kind", "upper bound"}, {"value", bound}}, measured <= bound};
}

inline Check at_least(std::string name, ojson reference, ojson predicted, double measured, double bound) {
    return {std::move(name), std::move(reference), std::move(predicted), num_or_null(measured),
            {{"kind", "lower bound"}, {"value", bound}}, measured >= bound};
}

/// A property that must hold; measured is whatever evidence summarises it.
inline Check property(std::string name, ojson measured, bool holds, std::string tolerance = "exact") {
    return {std::move(name), nullptr, true, std::move(measured), std::move(tolerance), holds};
}

}  // namespace checks

/// Seeds, replica counts and output files of one experiment run.
/// Replica r of ensemble `part` uses derive_seed(derive_seed(master, r), part).
class Context {
  public:
    explicit Context(const ExperimentConfig& cfg) : cfg_(cfg) {}

    std::size_t reps(std::size_t fallback) const { return cfg_.replicas.value_or(fallback); }

    std::uint64_t replica_seed(std::uint64_t r) const { return derive_seed(cfg_.seed, r); }
    std::uint64_t seed(std::uint64_t part, std::uint64_t r) const { return derive_seed(replica_seed(r), part); }

    /// Registers an ensemble of `count` replica streams under part index `part`.
    void ensemble(const std::string& name, std::uint64_t part, std::size_t count) {
        parts_.push_back({{"name", name}, {"part", part}, {"replicas", count}});
        max_replicas_ = std::max(max_replicas_, count);
    }

    template <class F>
    auto run(std::size_t count, F&& f) const {
        return run_replicas(count, std::forward<F>(f), cfg_.workers);
    }

    void write(const std::string& file, const std::function<void(std::ostream&)>& body) {
        std::filesystem::create_directories(cfg_.out_dir);
        auto f = open_out((std::filesystem::path(cfg_.out_dir) / file).string());
        body(f);
        files_.push_back(file);
    }

    ojson manifest(const std::string& id) const {
        ojson m;
        m["id"] = id;
        m["master_seed"] = cfg_.seed;
        m["replica_seed_rule"] = "derive_seed(master_seed, r)";
        m["stream_rule"] = "derive_seed(replica_seed, part)";
        m["ensembles"] = parts_.empty() ? ojson::array() : ojson(parts_);
        const std::size_t listed = std::max(max_replicas_, cfg_.replicas.value_or(0));
        ojson seeds = ojson::array();
        for (std::size_t r = 0; r < listed; ++r) seeds.push_back(replica_seed(r));
        m["replica_seeds"] = seeds;
        m["files"] = files_;
        return m;
    }

    const ExperimentConfig& config() const { return cfg_; }

  private:
    const ExperimentConfig& cfg_;
    std::vector<ojson> parts_;
    std::size_t max_replicas_ = 0;
    std::vector<std::string> files_;
};

namespace detail {

inline double mean_of(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

/// Mean over replicas of observable 0 at each grid time, plus the summary rows.
struct TimeSeries {
    std::vector<double> t;
    std::vector<MeanCI> stats;
};

inline TimeSeries series(const std::vector<RunRecord>& runs, const std::vector<double>& times, std::size_t k = 0) {
    TimeSeries s;
    s.t = times;
    for (double t : times) {
        std::vector<double> v;
        v.reserve(runs.size());
        for (const auto& r : runs) v.push_back(r.value_at(k, t));
        if (v.size() >= 2) {
            s.stats.push_back(mean_ci(v));
        } else {
            MeanCI one;
            one.mean = v.empty() ? 0.0 : v[0];
            one.count = v.size();
            s.stats.push_back(one);
        }
    }
    return s;
}

inline void append_summary(ojson& rows, Observable o, const TimeSeries& s) {
    for (std::size_t i = 0; i < s.t.size(); ++i)
        rows.push_back({{"observable", to_string(o)},
                        {"t", s.t[i]},
                        {"mean", s.stats[i].mean},
                        {"sd", s.stats[i].sd},
                        {"ci95", s.stats[i].ci95},
                        {"replicas", s.stats[i].count}});
}

inline void write_summary(Context& ctx, const std::string& file, Observable o, const TimeSeries& s) {
    ojson rows = ojson::array();
    append_summary(rows, o, s);
    ctx.write(file, [&](std::ostream& os) { os << rows.dump(2) << '\n'; });
}

inline std::vector<double> grid(double step, double last) {
    std::vector<double> g;
    for (std::size_t k = 1;; ++k) {
        const double t = static_cast<double>(k) * step;
        if (t > last * (1.0 + 1e-12)) break;
        g.push_back(t);
    }
    return g;
}

inline Configuration first_ones(std::size_t n, std::size_t ones, std::int8_t zero = 0) {
    Configuration c(n, zero);
    for (std::size_t i = 0; i < ones && i < n; ++i) c[i] = 1;
    return c;
}

inline Configuration bernoulli_config(std::size_t n, double u, std::uint64_t seed) {
    InitSpec s;
    s.kind = InitSpec::Kind::bernoulli;
    s.u = u;
    return make_init(s, n, model::VM{}, seed);
}

/// Componentwise order low <= high at every shared sample time. After a copy
/// absorbs its final configuration stands in for later samples.
inline bool ordered_at_samples(const RunRecord& low, const RunRecord& high) {
    const std::size_t k = std::max(low.snapshots.size(), high.snapshots.size());
    for (std::size_t i = 0; i < k; ++i) {
        const auto& a = i < low.snapshots.size() ? low.snapshots[i] : low.final_config;
        const auto& b = i < high.snapshots.size() ? high.snapshots[i] : high.final_config;
        for (std::size_t v = 0; v < a.size(); ++v)
            if (a[v] > b[v]) return false;
    }
    const auto& a = low.final_config;
    const auto& b = high.final_config;
    for (std::size_t v = 0; v < a.size(); ++v)
        if (a[v] > b[v]) return false;
    return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Registered experiments, one per acceptance criterion.

/// Forward evolution and backward tracing agree on every realisation.
inline ExperimentResult exp_vm_duality(Context& ctx) {
    ExperimentResult res{"vm-duality", "forward voter evolution equals coalescing-walk tracing, per realisation", true,
                         {}, ojson::object()};
    const double t0 = 3.0;
    const std::size_t R = ctx.reps(1000);
    const std::size_t graphs = 50;

    const auto cycle = generate(spec::Torus{1, 8}, 0);
    Configuration labels8(8);
    for (std::size_t i = 0; i < 8; ++i) labels8[i] = static_cast<std::int8_t>(i);
    ctx.ensemble("cycle-8", 0, R);
    const auto cycle_ok = ctx.run(R, [&](std::size_t r) -> int {
        const auto rep = build_graphical_rep(cycle, t0, ctx.seed(0, r));
        const auto fwd = evolve_forward(rep, labels8);
        return fwd == trace_back(rep, labels8) ? 1 : 0;
    });

    // Fifty configuration-model graphs on 20 vertices, degrees uniform on {1,2,3,4}.
    const std::vector<double> pmf = {0.0, 0.25, 0.25, 0.25, 0.25};
    std::vector<Graph> cms;
    ctx.ensemble("cm-graphs", 1, graphs);
    for (std::size_t k = 0; k < graphs; ++k) {
        const auto deg = sample_degrees(pmf, 20, ctx.seed(1, k));
        cms.push_back(generate(spec::ConfigModel{deg.degrees}, derive_seed(ctx.seed(1, k), 1)));
    }
    Configuration labels20(20);
    for (std::size_t i = 0; i < 20; ++i) labels20[i] = static_cast<std::int8_t>(i);
    ctx.ensemble("cm-realisations", 2, R);
    const auto cm_ok = ctx.run(R, [&](std::size_t r) -> int {
        int ok = 0;
        for (std::size_t k = 0; k < graphs; ++k) {
            const auto rep = build_graphical_rep(cms[k], t0, derive_seed(ctx.seed(2, r), k));
            ok += evolve_forward(rep, labels20) == trace_back(rep, labels20) ? 1 : 0;
        }
        return ok;
    });
    const long a = std::count(cycle_ok.begin(), cycle_ok.end(), 1);
    long b = 0;
    for (int x : cm_ok) b += x;
    res.checks.push_back(checks::property("cycle-8 exact agreement",
                                          std::to_string(a) + "/" + std::to_string(R), a == static_cast<long>(R)));
    res.checks.push_back(checks::property("configuration-model exact agreement",
                                          std::to_string(b) + "/" + std::to_string(R * graphs),
                                          b == static_cast<long>(R * graphs)));
    res.details["t0"] = t0;
    return res;
}

/// Discordant-edge density on the random 3-regular graph against 2u(1-u) f_3(t).
inline ExperimentResult exp_vm_rrg_discordant(Context& ctx) {
    ExperimentResult res{"vm-rrg-discordant",
                         "E[D_t] on Regular{1000,3} from Bernoulli(1/2) follows (1/2) f_3(t) at short times", true, {},
                         ojson::object()};
    const std::size_t n = 1000, d = 3, R = ctx.reps(500);
    const double u = 0.5, tmax = 5.0, dt = 0.25;
    ctx.ensemble("voter-runs", 0, R);
    SimOptions opt;
    opt.tmax = tmax;
    opt.sample_dt = dt;
    opt.observables = {Observable::discordant_fraction};
    const auto runs = ctx.run(R, [&](std::size_t r) {
        const auto s = ctx.seed(0, r);
        const auto g = generate(spec::Regular{n, d}, derive_seed(s, 1));
        const auto init = detail::bernoulli_config(n, u, derive_seed(s, 2));
        auto o = opt;
        o.master_seed = ctx.config().seed;
        o.replica = r;
        return simulate(g, model::VM{}, init, derive_seed(s, 3), o);
    });
    const auto times = detail::grid(dt, tmax);
    const auto ts = detail::series(runs, times);
    double worst = 0.0, worst_t = 0.0;
    ojson profile = ojson::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double pred = 2.0 * u * (1.0 - u) * analytics::profile_f_d(3.0, times[i]);
        const double gap = std::abs(ts.stats[i].mean - pred);
        if (gap > worst) {
            worst = gap;
            worst_t = times[i];
        }
        profile.push_back({{"t", times[i]}, {"mean", ts.stats[i].mean}, {"se", ts.stats[i].se}, {"predicted", pred}});
    }
    res.checks.push_back(checks::at_most("sup_t |E[D_t] - f_3(t)/2|", nullptr, 0.0, worst, 0.02));
    res.details["profile"] = profile;
    res.details["worst_t"] = worst_t;

    // The series itself against the tree oracle.
    const std::size_t tree_reps = ctx.reps(100000);
    ctx.ensemble("tree-oracle", 1, 1);
    const auto surv = tree_pair_survival(d, times, ctx.seed(1, 0), tree_reps);
    double tree_worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        tree_worst = std::max(tree_worst, std::abs(surv[i] - analytics::profile_f_d(3.0, times[i])));
    res.checks.push_back(checks::at_most("sup_t |tree survival - f_3(t)|", nullptr, 0.0, tree_worst, 0.01));
    res.details["tree_runs"] = tree_reps;

    ctx.write("trajectories.csv", [&](std::ostream& os) { write_trajectories(os, runs); });
    detail::write_summary(ctx, "summary.json", Observable::discordant_fraction, ts);
    return res;
}

/// Continued-fraction diffusion constant under rewiring.
inline ExperimentResult exp_rewiring_theta(Context& ctx) {
    ExperimentResult res{"rewiring-theta",
                         "theta_{d,nu} reduces to (d-2)/(d-1) at nu = 0, increases in nu and tends to 1", true, {},
                         ojson::object()};
    double worst = 0.0;
    for (int d = 3; d <= 10; ++d)
        worst = std::max(worst, std::abs(analytics::theta_d_nu(d, 0.0) - analytics::theta_d(d)));
    res.checks.push_back(checks::at_most("max_d |theta_{d,0} - (d-2)/(d-1)|", 0.0, 0.0, worst, 1e-10));

    const std::vector<double> nus = {0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
    ojson values = ojson::array();
    bool increasing = true;
    double prev = -1.0;
    for (double nu : nus) {
        const double th = analytics::theta_d_nu(3.0, nu);
        values.push_back({{"nu", nu}, {"theta", th}});
        increasing = increasing && th > prev;
        prev = th;
    }
    res.checks.push_back(checks::property("theta_{3,nu} strictly increasing on the nu grid", values, increasing));
    const double big = analytics::theta_d_nu(3.0, 1e6);
    res.checks.push_back(checks::at_least("theta_{3,1e6}", 1.0, 1.0, big, 0.999));

    // The swap process behind nu: per-edge involvement rate on Regular{500,3}.
    const std::size_t R = ctx.reps(4);
    const double horizon = 100.0, nu = 1.0;
    ctx.ensemble("rewiring", 0, R);
    const auto rates = ctx.run(R, [&](std::size_t r) {
        const auto s = ctx.seed(0, r);
        const auto g = generate(spec::Regular{500, 3}, derive_seed(s, 1));
        RewiringProcess proc(g, nu);
        Rng rng(derive_seed(s, 2));
        proc.advance_to(horizon, rng);
        double total = 0.0;
        for (auto k : proc.edge_swaps()) total += k;
        return total / static_cast<double>(g.edges.size()) / horizon;
    });
    const double m = 750.0;
    res.checks.push_back(checks::range("per-edge swap involvement rate", nu, nu * (m - 1.0) / m,
                                       detail::mean_of(rates), 0.9, 1.1));
    return res;
}

/// Kingman coalescence on the complete graph and the consensus sandwich.
inline ExperimentResult exp_moran_kingman(Context& ctx) {
    ExperimentResult res{"moran-kingman",
                         "E[tau_coal]/((n-1)/2) = 2(1-1/n) on Complete{200}; 2u(1-u)E[tau_coal] <= E[tau_cons] <= "
                         "E[tau_coal]",
                         true,
                         {},
                         ojson::object()};
    const std::size_t n = 200, R = ctx.reps(2000);
    const double u = 0.3, cap = 1e7;
    const auto g = generate(spec::Complete{n}, 0);
    ctx.ensemble("coalescence", 0, R);
    const auto coal = ctx.run(R, [&](std::size_t r) { return coalescence_time_full(g, ctx.seed(0, r), cap); });
    ctx.ensemble("consensus", 1, R);
    const auto cons = ctx.run(R, [&](std::size_t r) {
        const auto s = ctx.seed(1, r);
        const auto init = detail::bernoulli_config(n, u, derive_seed(s, 1));
        SimOptions o;
        o.tmax = cap;
        o.master_seed = ctx.config().seed;
        o.replica = r;
        return simulate(g, model::VM{}, init, derive_seed(s, 2), o);
    });
    std::vector<double> tc, tk;
    for (const auto& c : coal) tc.push_back(c.tau);
    for (const auto& c : cons) tk.push_back(c.absorbed ? c.absorption_time : cap);
    const double m = (static_cast<double>(n) - 1.0) / 2.0;
    const double kr = to_double(kingman_ratio(static_cast<std::int64_t>(n)));
    if (R >= 2) {
        const auto sc = mean_ci(tc), sk = mean_ci(tk);
        res.checks.push_back(checks::relative("E[tau_coal] / ((n-1)/2)", 2.0, kr, sc.mean / m, 0.05));
        const double k = 2.0 * u * (1.0 - u);
        const double lo_se = std::sqrt(sk.se * sk.se + k * k * sc.se * sc.se);
        const double hi_se = std::sqrt(sk.se * sk.se + sc.se * sc.se);
        res.checks.push_back(checks::at_least("E[tau_cons] above 2u(1-u) E[tau_coal]", nullptr, k * sc.mean, sk.mean,
                                              k * sc.mean - 2.0 * lo_se));
        res.checks.push_back(
            checks::at_most("E[tau_cons] below E[tau_coal]", nullptr, sc.mean, sk.mean, sc.mean + 2.0 * hi_se));
        res.details = {{"mean_tau_coal", sc.mean}, {"se_tau_coal", sc.se}, {"mean_tau_cons", sk.mean},
                       {"se_tau_cons", sk.se}};
    } else {
        res.checks.push_back(checks::property("enough replicas for a standard error", static_cast<double>(R), false));
    }
    ctx.write("coalescence.csv", [&](std::ostream& os) { write_meeting(os, coal); });
    ctx.write("absorption.csv", [&](std::ostream& os) { write_absorption(os, absorption_rows(cons)); });
    return res;
}

/// Discordance decay on the complete graph against the Fisher-Wright heterozygosity.
inline ExperimentResult exp_vm_fisher_wright(Context& ctx) {
    ExperimentResult res{"vm-fisher-wright",
                         "E[D_{sN}] on Complete{1000} decays like u(1-u) e^{-2s}; the diffusion reproduces the decay",
                         true, {}, ojson::object()};
    const std::size_t N = 1000, R = ctx.reps(10000);
    const double u = 0.5, n = static_cast<double>(N);
    const auto g = generate(spec::Complete{N}, 0);
    const auto init = detail::first_ones(N, static_cast<std::size_t>(u * n));
    ctx.ensemble("voter-runs", 0, R);
    SimOptions opt;
    opt.tmax = n;
    opt.sample_dt = n / 4.0;
    opt.observables = {Observable::discordant_fraction};
    const auto runs = ctx.run(R, [&](std::size_t r) {
        auto o = opt;
        o.master_seed = ctx.config().seed;
        o.replica = r;
        return simulate(g, model::VM{}, init, ctx.seed(0, r), o);
    });
    const std::vector<double> ss = {0.25, 0.5, 1.0};
    std::vector<double> times;
    for (double s : ss) times.push_back(s * n);
    const auto ts = detail::series(runs, times);
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < ss.size(); ++i) {
        const double stated = n / (n - 1.0) * u * (1.0 - u) * std::exp(-2.0 * ss[i]);
        // Direct edge counting on Complete{N} gives D = 2 N/(N-1) x (1-x).
        const double pred = 2.0 * stated;
        res.checks.push_back(checks::relative("E[D] at s=" + checks::num_or_null(ss[i]).dump(), stated, pred,
                                              ts.stats[i].mean, 0.05));
        rows.push_back({{"s", ss[i]}, {"mean", ts.stats[i].mean}, {"se", ts.stats[i].se},
                        {"ratio_to_stated_formula", ts.stats[i].mean / stated}});
    }
    res.details["voter"] = rows;

    const std::size_t fw_reps = ctx.reps(4000);
    ctx.ensemble("fisher-wright", 1, 1);
    const auto fw = analytics::fw_simulate(1.0, u, 1.0, 1e-4, ctx.seed(1, 0), std::max<std::size_t>(fw_reps, 2), 0.25);
    for (double s : ss) {
        const auto k = static_cast<std::size_t>(std::llround(s / 0.25));
        res.checks.push_back(checks::standard_errors("diffusion E[chi(1-chi)] at s=" + checks::num_or_null(s).dump(),
                                                     u * (1.0 - u) * std::exp(-2.0 * s),
                                                     analytics::fw_heterozygosity(1.0, u, s), fw.het[k], fw.het_se[k],
                                                     3.0));
    }
    res.details["diffusion_reps"] = fw.reps;
    ctx.write("trajectories.csv", [&](std::ostream& os) { write_trajectories(os, runs); });
    detail::write_summary(ctx, "summary.json", Observable::discordant_fraction, ts);
    return res;
}

/// Contact process on the complete graph: exact lumped chain and simulation.
inline ExperimentResult exp_cp_complete_extinction(Context& ctx) {
    ExperimentResult res{"cp-complete-extinction",
                         "log E[tau] / (N (1 + log(lambda N))) -> 1 on Complete{N}, lambda = 1", true, {},
                         ojson::object()};
    ojson rows = ojson::array();
    std::vector<double> ratios;
    for (std::size_t N : {20, 40, 60}) {
        const auto r = analytics::lumped_rates(model::CP{1.0}, N);
        const auto e = analytics::bd_mean_absorption(r.up, r.down, N, 0);
        const double logt = static_cast<double>(e.log_value);
        const double nn = static_cast<double>(N);
        const double ratio = logt / analytics::extinction_asymptotic(nn, 1.0);
        ratios.push_back(ratio);
        rows.push_back({{"N", N},
                        {"log_mean_extinction", logt},
                        {"ratio_to_N(1+log N)", ratio},
                        {"ratio_to_N(log N - 1)", logt / (nn * (std::log(nn) - 1.0))},
                        {"ratio_to_log_product", logt / analytics::extinction_log_product(nn, 1.0)}});
    }
    res.checks.push_back(checks::range("log E[tau] / (N(1+log N)) at N=60", 1.0, 1.0, ratios[2], 0.85, 1.15));
    const bool monotone = std::abs(ratios[1] - 1.0) < std::abs(ratios[0] - 1.0) &&
                          std::abs(ratios[2] - 1.0) < std::abs(ratios[1] - 1.0);
    res.checks.push_back(checks::property("ratio approaches 1 monotonically over N = 20, 40, 60", ratios, monotone));
    res.details["lumped"] = rows;

    const std::size_t N = 10, R = ctx.reps(10000);
    const double lambda = 0.05;
    const auto r = analytics::lumped_rates(model::CP{lambda}, N);
    const auto exact = analytics::bd_mean_absorption(r.up, r.down, N, 0);
    const auto g = generate(spec::Complete{N}, 0);
    ctx.ensemble("extinction-runs", 0, R);
    const auto runs = ctx.run(R, [&](std::size_t k) {
        SimOptions o;
        o.tmax = 1e7;
        o.master_seed = ctx.config().seed;
        o.replica = k;
        return simulate(g, model::CP{lambda}, Configuration(N, 1), ctx.seed(0, k), o);
    });
    std::vector<double> taus;
    for (const auto& x : runs) taus.push_back(x.absorbed ? x.absorption_time : x.end_time);
    res.checks.push_back(checks::relative("mean extinction time, Complete{10}, lambda=0.05", nullptr, exact.value,
                                          detail::mean_of(taus), 0.05));
    ctx.write("absorption.csv", [&](std::ostream& os) { write_absorption(os, absorption_rows(runs)); });
    return res;
}

/// Extinction time of the supercritical contact process is asymptotically exponential.
inline ExperimentResult exp_cp_exponential_law(Context& ctx) {
    ExperimentResult res{"cp-exponential-law",
                         "tau / E[tau] on Complete{30}, lambda = 2/30, is close to a unit exponential", true, {},
                         ojson::object()};
    const std::size_t N = 30, R = ctx.reps(1000);
    const double lambda = 2.0 / 30.0;
    const auto g = generate(spec::Complete{N}, 0);
    ctx.ensemble("extinction-runs", 0, R);
    const auto runs = ctx.run(R, [&](std::size_t k) {
        SimOptions o;
        o.tmax = 1e9;
        o.master_seed = ctx.config().seed;
        o.replica = k;
        return simulate(g, model::CP{lambda}, Configuration(N, 1), ctx.seed(0, k), o);
    });
    std::vector<double> taus;
    for (const auto& x : runs) taus.push_back(x.absorbed ? x.absorption_time : x.end_time);
    const double mean = detail::mean_of(taus);
    std::vector<double> scaled;
    for (double t : taus) scaled.push_back(t / mean);
    const double ks = ks_distance(scaled, [](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x); });
    res.checks.push_back(checks::at_most("KS distance of tau/mean to Exp(1)", 0.0, 0.0, ks, 0.08));
    const auto r = analytics::lumped_rates(model::CP{lambda}, N);
    res.details["exact_mean"] = analytics::bd_mean_absorption(r.up, r.down, N, 0).value;
    res.details["sample_mean"] = mean;
    ctx.write("absorption.csv", [&](std::ostream& os) { write_absorption(os, absorption_rows(runs)); });
    return res;
}

/// Metastable crossover of the Curie-Weiss chain against the Kramers formula.
inline ExperimentResult exp_cw_kramers(Context& ctx) {
    ExperimentResult res{"cw-kramers",
                         "log E[crossover] / (log K + N Gamma) -> 1 at beta = 1.5, h = 0.1; lumping is exact", true,
                         {}, ojson::object()};
    const double beta = 1.5, h = 0.1;
    ojson rows = ojson::array();
    std::vector<double> lr;
    for (std::size_t N : {100, 200, 400, 800}) {
        const auto c = analytics::cw_crossover(beta, h, N);
        const double ratio = static_cast<double>(c.exact.log_value) / c.log_kramers;
        lr.push_back(ratio);
        rows.push_back({{"N", N},
                        {"start", c.counts.start},
                        {"target", c.counts.target},
                        {"log_exact", static_cast<double>(c.exact.log_value)},
                        {"log_kramers", c.log_kramers},
                        {"log_ratio", ratio},
                        {"exact_over_kramers", std::exp(static_cast<double>(c.exact.log_value) - c.log_kramers)}});
    }
    res.checks.push_back(checks::relative("log ratio at N=800", 1.0, 1.0, lr.back(), 0.10));
    bool monotone = true;
    for (std::size_t i = 1; i < lr.size(); ++i) monotone = monotone && std::abs(lr[i] - 1.0) < std::abs(lr[i - 1] - 1.0);
    res.checks.push_back(checks::property("log ratio approaches 1 monotonically over N = 100..800", lr, monotone));
    const auto t = analytics::kramers(beta, h);
    res.details = {{"m_minus", t.m_minus}, {"m_star", t.m_star}, {"m_plus", t.m_plus}, {"Gamma", t.Gamma},
                   {"K", t.K},             {"lumped", rows}};

    // Full-graph simulation on Complete{20}.
    const std::size_t N = 20, R = ctx.reps(2000);
    const auto c = analytics::cw_crossover(beta, h, N);
    const auto g = generate(spec::Complete{N}, 0);
    model::SIM sim;
    sim.beta = beta;
    sim.J = 1.0 / static_cast<double>(N);
    sim.h = h;
    const auto init = detail::first_ones(N, c.counts.start, -1);
    StopRule stop;
    stop.ones_at_least = c.counts.target;
    ctx.ensemble("crossover-runs", 0, R);
    const auto runs = ctx.run(R, [&](std::size_t k) {
        SimOptions o;
        o.tmax = 1e7;
        o.stop = stop;
        o.master_seed = ctx.config().seed;
        o.replica = k;
        return simulate(g, sim, init, ctx.seed(0, k), o);
    });
    std::vector<double> taus;
    for (const auto& x : runs) taus.push_back(x.stopped ? x.stop_time : x.end_time);
    res.checks.push_back(checks::relative("mean crossover on Complete{20} vs lumped chain", nullptr, c.exact.value,
                                          detail::mean_of(taus), 0.10));
    std::vector<AbsorptionRow> rows_csv;
    for (const auto& x : runs)
        rows_csv.push_back({x.stopped, x.stopped ? x.stop_time : x.end_time, to_string(x.final_state)});
    ctx.write("absorption.csv", [&](std::ostream& os) { write_absorption(os, rows_csv); });
    return res;
}

/// Ordered coupling, detailed balance and absorbing traps.
inline ExperimentResult exp_attractive_traps(Context& ctx) {
    ExperimentResult res{"attractive-traps",
                         "coupled VM/CP keep their order; Glauber rates are reversible; VM/CP traps have zero exit rate",
                         true, {}, ojson::object()};
    const std::size_t R = ctx.reps(1000);
    SimOptions opt;
    opt.sample_dt = 0.5;
    opt.record_configs = true;

    ctx.ensemble("cp-er", 0, R);
    const auto cp_ok = ctx.run(R, [&](std::size_t r) -> int {
        const auto s = ctx.seed(0, r);
        const auto g = generate(spec::ER{50, 0.1}, derive_seed(s, 1));
        Configuration low(50, 0), high(50, 1);
        low[0] = 1;
        auto o = opt;
        o.tmax = 20.0;
        const auto [a, b] = coupled_simulate(g, model::CP{1.0}, low, high, derive_seed(s, 2), o);
        return detail::ordered_at_samples(a, b) ? 1 : 0;
    });
    ctx.ensemble("vm-cycle", 1, R);
    const auto vm_ok = ctx.run(R, [&](std::size_t r) -> int {
        const auto s = ctx.seed(1, r);
        const auto g = generate(spec::Torus{1, 20}, 0);
        auto low = detail::bernoulli_config(20, 0.5, derive_seed(s, 1));
        auto high = low;
        const auto extra = detail::bernoulli_config(20, 0.5, derive_seed(s, 2));
        for (std::size_t i = 0; i < 20; ++i) high[i] = std::max(high[i], extra[i]);
        auto o = opt;
        o.tmax = 50.0;
        const auto [a, b] = coupled_simulate(g, model::VM{}, low, high, derive_seed(s, 3), o);
        return detail::ordered_at_samples(a, b) ? 1 : 0;
    });
    const long a = std::count(cp_ok.begin(), cp_ok.end(), 1);
    const long b = std::count(vm_ok.begin(), vm_ok.end(), 1);
    res.checks.push_back(checks::property("CP on ER{50,0.1} ordered at every sample",
                                          std::to_string(a) + "/" + std::to_string(R), a == static_cast<long>(R)));
    res.checks.push_back(checks::property("VM on Torus{1,20} ordered at every sample",
                                          std::to_string(b) + "/" + std::to_string(R), b == static_cast<long>(R)));

    // Detailed balance over every configuration and vertex of small random graphs.
    ctx.ensemble("small-graphs", 2, 1);
    Rng rng(ctx.seed(2, 0));
    double worst = 0.0;
    std::size_t cases = 0;
    bool traps = true;
    double sim_min_total = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= 8; ++n) {
        for (int rep = 0; rep < 3; ++rep) {
            Graph g;
            if (rep == 0) {
                g = generate(spec::ER{n, 0.5}, rng.next());
            } else {
                std::vector<std::size_t> deg(n);
                for (auto& x : deg) x = rng.below(5);
                if ((std::accumulate(deg.begin(), deg.end(), std::size_t{0}) & 1) != 0) ++deg[0];
                g = generate(spec::ConfigModel{deg}, rng.next());
            }
            model::SIM sim;
            sim.beta = 0.7;
            sim.J = 1.3;
            sim.h = 0.4;
            if (rep == 2) {
                sim.couplings.resize(g.edges.size());
                for (auto& j : sim.couplings) j = 2.0 * rng.uniform();
            }
            const Topology topo(g);
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                Configuration c(n), z(n), o(n, 0);
                for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i) & 1 ? 1 : -1;
                double total = 0.0;
                for (Vertex v = 0; v < n; ++v) {
                    auto cv = c;
                    cv[v] = static_cast<std::int8_t>(-cv[v]);
                    const double fwd = flip_rate(sim, topo, c, v);
                    const double back = flip_rate(sim, topo, cv, v);
                    const double expect = std::exp(-sim.beta * (hamiltonian(g, cv, sim) - hamiltonian(g, c, sim)));
                    worst = std::max(worst, std::abs(fwd / back / expect - 1.0));
                    total += fwd;
                    ++cases;
                }
                sim_min_total = std::min(sim_min_total, total);
            }
            Configuration zeros(n, 0), ones(n, 1);
            for (Vertex v = 0; v < n; ++v) {
                traps = traps && flip_rate(model::VM{}, topo, zeros, v) == 0.0 &&
                        flip_rate(model::VM{}, topo, ones, v) == 0.0 &&
                        flip_rate(model::CP{2.0}, topo, zeros, v) == 0.0;
            }
        }
    }
    res.checks.push_back(checks::at_most("max relative detailed-balance defect", 0.0, 0.0, worst, 1e-12));
    res.checks.push_back(checks::property("VM consensus and CP all-healthy have zero exit rate", traps, traps));
    res.checks.push_back(checks::property("Ising total rate positive in every configuration", sim_min_total,
                                          sim_min_total > 0.0, "strictly positive"));
    res.details["detailed_balance_cases"] = cases;
    return res;
}

/// I_delta and the barrier bounds on the configuration model.
inline ExperimentResult exp_cm_barrier_bounds(Context& ctx) {
    ExperimentResult res{"cm-barrier-bounds",
                         "I_delta solves its defining inequality; Gamma^+ and Gamma^- follow their definitions", true,
                         {}, ojson::object()};
    std::size_t good = 0, total = 0;
    for (double x : {0.1, 0.2, 0.3, 0.4, 0.5}) {
        for (double delta : {3.0, 5.0, 10.0, 100.0}) {
            ++total;
            const auto r = analytics::i_delta(x, delta);
            const bool inside = !r.empty && analytics::i_delta_log_margin(x, r.value, delta) > 0.0;
            const double below = r.value - 1e-6;
            const bool tight = below <= 0.0 || !(analytics::i_delta_log_margin(x, below, delta) > 0.0);
            good += inside && tight ? 1 : 0;
        }
    }
    res.checks.push_back(checks::property("I_delta oracle on the 20-point grid",
                                          std::to_string(good) + "/" + std::to_string(total), good == total));
    const double big = analytics::i_delta(0.5, 1e6).value;
    res.checks.push_back(checks::absolute("I_{1e6}(1/2)", 0.25, 0.25, big, 0.05));

    // Brute-force scan of the defining inequalities.
    const std::size_t R = ctx.reps(100);
    ctx.ensemble("degree-sequences", 0, R);
    const auto agree = ctx.run(R, [&](std::size_t r) -> int {
        Rng rng(ctx.seed(0, r));
        const std::size_t N = 5 + rng.below(56);
        std::vector<std::size_t> deg(N);
        for (auto& d : deg) d = 1 + rng.below(10);
        const double J = 0.5 + rng.uniform(), h = 3.0 * rng.uniform_pos();
        const auto b = analytics::gamma_bounds(deg, J, h);
        auto sorted = deg;
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> ell(N + 1, 0.0);
        for (std::size_t i = 0; i < N; ++i) ell[i + 1] = ell[i] + static_cast<double>(sorted[i]);
        const double L = ell[N];
        std::size_t m_bar = N;
        for (std::size_t M = 1; M < N; ++M) {
            const double rhs = ell[M + 1] * (1.0 - ell[M + 1] / L) - ell[M] * (1.0 - ell[M] / L);
            if (h / J >= rhs) {
                m_bar = M;
                break;
            }
        }
        std::size_t m_tilde = N;
        for (std::size_t M = 1; M <= N; ++M)
            if (ell[M] >= L / 2.0) {
                m_tilde = M;
                break;
            }
        return b.M_bar == m_bar && b.M_tilde == m_tilde ? 1 : 0;
    });
    const long ok = std::count(agree.begin(), agree.end(), 1);
    res.checks.push_back(checks::property("gamma_bounds matches brute-force M_bar and M_tilde",
                                          std::to_string(ok) + "/" + std::to_string(R), ok == static_cast<long>(R)));

    // d-regular sequences: Gamma^+ / Gamma^- tends to 1.
    ojson rows = ojson::array();
    std::vector<double> ratios;
    for (std::size_t d : {10, 100, 1000}) {
        const std::vector<std::size_t> deg(1000, d);
        const auto b = analytics::gamma_bounds(deg, 1.0, 1.0);
        const double ratio = b.Gamma_plus / b.Gamma_minus;
        ratios.push_back(ratio);
        rows.push_back({{"d", d},
                        {"M_bar", b.M_bar},
                        {"Gamma_plus", b.Gamma_plus},
                        {"Gamma_minus", b.Gamma_minus},
                        {"I_half", b.I_half},
                        {"ratio", ratio}});
    }
    const bool trend = std::abs(ratios[1] - 1.0) < std::abs(ratios[0] - 1.0) &&
                       std::abs(ratios[2] - 1.0) < std::abs(ratios[1] - 1.0);
    res.checks.push_back(checks::property("Gamma+/Gamma- approaches 1 over d = 10, 100, 1000", ratios, trend));
    res.details["regular"] = rows;
    return res;
}

/// Median extinction time on the cycle: slow growth below criticality, fast above.
inline ExperimentResult exp_cp_torus_regimes(Context& ctx) {
    ExperimentResult res{"cp-torus-regimes",
                         "median extinction time on Torus{1,N} grows sub-linearly at lambda = 0.8 and super-linearly "
                         "at lambda = 2.5",
                         true,
                         {},
                         ojson::object()};
    const std::vector<std::size_t> sizes = {50, 100, 200};
    const std::vector<double> lambdas = {0.8, 2.5};
    const std::vector<double> caps = {1e6, 2000.0};
    const std::size_t R = ctx.reps(200);
    const double inf = std::numeric_limits<double>::infinity();
    // taus[l][k][r], with +inf for runs that reached the cap.
    std::vector<std::vector<std::vector<double>>> taus(lambdas.size());
    std::vector<AbsorptionRow> rows_csv;
    ojson table = ojson::array();
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            const std::size_t part = l * sizes.size() + k;
            const std::size_t N = sizes[k];
            const auto g = generate(spec::Torus{1, N}, 0);
            ctx.ensemble("lambda=" + checks::num_or_null(lambdas[l]).dump() + ",N=" + std::to_string(N), part, R);
            const auto runs = ctx.run(R, [&](std::size_t r) {
                SimOptions o;
                o.tmax = caps[l];
                o.master_seed = ctx.config().seed;
                o.replica = r;
                return simulate(g, model::CP{lambdas[l]}, Configuration(N, 1), ctx.seed(part, r), o);
            });
            std::vector<double> t;
            std::size_t capped = 0;
            for (const auto& x : runs) {
                t.push_back(x.absorbed ? x.absorption_time : inf);
                capped += x.absorbed ? 0 : 1;
                rows_csv.push_back({x.absorbed, x.absorbed ? x.absorption_time : x.end_time, to_string(x.final_state)});
            }
            taus[l].push_back(t);
            const double med = t.empty() ? 0.0 : median(t);
            table.push_back({{"lambda", lambdas[l]},
                             {"N", N},
                             {"median", checks::num_or_null(med)},
                             {"median_lower_bound", std::isfinite(med) ? med : caps[l]},
                             {"capped", capped},
                             {"cap", caps[l]}});
        }
    }
    res.details["medians"] = table;

    // Bootstrap the ordering of medians; a censored median is only a lower bound,
    // so a ratio involving one is never counted as established.
    const std::size_t B = 1000;
    ctx.ensemble("bootstrap", 6, 1);
    Rng rng(ctx.seed(6, 0));
    std::size_t sub_ok = 0, super_ok = 0;
    std::vector<double> buf;
    auto resampled_median = [&](const std::vector<double>& x) {
        buf.resize(x.size());
        for (auto& v : buf) v = x[rng.below(x.size())];
        return median(buf);
    };
    for (std::size_t b = 0; b < B; ++b) {
        double m[2][3];
        for (std::size_t l = 0; l < 2; ++l)
            for (std::size_t k = 0; k < 3; ++k) m[l][k] = R == 0 ? inf : resampled_median(taus[l][k]);
        auto sub = [&](double a, double c) { return std::isfinite(a) && std::isfinite(c) && c < 2.0 * a; };
        auto super = [&](double a, double c) { return std::isfinite(a) && c > 2.0 * a; };
        sub_ok += sub(m[0][0], m[0][1]) && sub(m[0][1], m[0][2]) ? 1 : 0;
        super_ok += super(m[1][0], m[1][1]) && super(m[1][1], m[1][2]) ? 1 : 0;
    }
    const double fs = static_cast<double>(sub_ok) / B, fp = static_cast<double>(super_ok) / B;
    res.checks.push_back(checks::at_least("sub-linear growth at lambda=0.8 (bootstrap fraction)", nullptr, 1.0, fs, 0.95));
    res.checks.push_back(
        checks::at_least("super-linear growth at lambda=2.5 (bootstrap fraction)", nullptr, 1.0, fp, 0.95));
    res.details["bootstrap_resamples"] = B;
    ctx.write("absorption.csv", [&](std::ostream& os) { write_absorption(os, rows_csv); });
    return res;
}

/// Annealed meeting probability at step 4 on the 3-regular configuration model.
inline ExperimentResult exp_annealed_meeting(Context& ctx) {
    ExperimentResult res{"annealed-meeting",
                         "P(tau_meet = 4) for walkers from a common root matches (1/2)^4 sum p_k/k sum mu(k)/k", true,
                         {}, ojson::object()};
    const std::vector<double> pmf = {0.0, 0.0, 0.0, 1.0};
    const std::size_t n = 100000, R = ctx.reps(1000000), steps = 4;
    const double formula = annealed_meet4_formula(pmf);
    ctx.ensemble("non-backtracking", 0, 1);
    const auto nb = annealed_meeting_cm(pmf, n, steps, WalkRule::non_backtracking, ctx.seed(0, 0), R);
    ctx.ensemble("simple", 1, 1);
    const auto sw = annealed_meeting_cm(pmf, n, steps, WalkRule::simple, ctx.seed(1, 0), R);
    const double p = nb.meet_at_x_first[4];
    const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(R));
    res.checks.push_back(checks::standard_errors("P(tau=4, X moves first), forward-degree steps", 1.0 / 96.0, formula, p,
                                                 se, 3.0));
    res.details = {{"formula", formula},
                   {"non_backtracking_tau4_either_first", nb.meet_at[4]},
                   {"non_backtracking_tau4_x_first", nb.meet_at_x_first[4]},
                   {"simple_tau4_either_first", sw.meet_at[4]},
                   {"simple_tau4_x_first", sw.meet_at_x_first[4]},
                   {"non_backtracking_meet_by_4", nb.meet_by},
                   {"simple_meet_by_4", sw.meet_by},
                   {"runs", R},
                   {"n", n},
                   {"outside_local_regime", nb.outside_local_regime}};
    return res;
}

/// Plain ensemble driven by the graph, model, init and horizon in the config.
inline ExperimentResult exp_ensemble(Context& ctx) {
    const auto& cfg = ctx.config();
    ExperimentResult res{"ensemble", "user-specified simulation ensemble", true, {}, ojson::object()};
    if (!cfg.model || !cfg.init || !cfg.tmax || !(cfg.graph || cfg.graph_file))
        throw ConfigError("the ensemble experiment needs graph or graph_file, model, init and tmax");
    const Graph g = cfg.graph_file ? read_graph(*cfg.graph_file) : generate(graph_spec_from_json(*cfg.graph), cfg.seed);
    const auto m = model_from_json(*cfg.model);
    const auto init = parse_init(*cfg.init);
    const std::size_t R = ctx.reps(1);
    SimOptions opt;
    opt.tmax = *cfg.tmax;
    opt.sample_dt = cfg.sample_dt.value_or(kInf);
    if (cfg.record.empty()) {
        opt.observables = {is_sim(m) ? Observable::magnetisation : Observable::ones_fraction};
        if (g.edges.size() > 0) opt.observables.push_back(Observable::discordant_fraction);
    } else {
        for (const auto& name : cfg.record) opt.observables.push_back(observable_from_string(name));
    }
    const double nu = cfg.nu.value_or(0.0);
    ctx.ensemble("runs", 0, R);
    const auto runs = ctx.run(R, [&](std::size_t r) {
        const auto s = ctx.seed(0, r);
        auto o = opt;
        o.master_seed = cfg.seed;
        o.replica = r;
        const auto c = make_init(init, g.n, m, derive_seed(s, 1));
        return simulate_with_rewiring(g, m, nu, c, derive_seed(s, 2), o);
    });
    ctx.write("trajectories.csv", [&](std::ostream& os) { write_trajectories(os, runs); });
    ctx.write("absorption.csv", [&](std::ostream& os) { write_absorption(os, absorption_rows(runs)); });
    ojson rows = ojson::array();
    std::vector<double> times = {0.0};
    if (std::isfinite(opt.sample_dt))
        for (double t : detail::grid(opt.sample_dt, opt.tmax)) times.push_back(t);
    for (std::size_t k = 0; k < opt.observables.size(); ++k)
        detail::append_summary(rows, opt.observables[k], detail::series(runs, times, k));
    ctx.write("summary.json", [&](std::ostream& os) { os << rows.dump(2) << '\n'; });
    std::size_t absorbed = 0;
    for (const auto& r : runs) absorbed += r.absorbed ? 1 : 0;
    res.details = {{"replicas", R}, {"absorbed", absorbed}, {"graph_n", g.n}, {"graph_edges", g.edges.size()}};
    return res;
}

struct Registered {
    int criterion = 0;  // acceptance criterion number, 0 if none
    std::function<ExperimentResult(Context&)> run;
};

inline const std::map<std::string, Registered>& registry() {
    static const std::map<std::string, Registered> r = {
        {"vm-duality", {1, exp_vm_duality}},
        {"vm-rrg-discordant", {2, exp_vm_rrg_discordant}},
        {"rewiring-theta", {3, exp_rewiring_theta}},
        {"moran-kingman", {4, exp_moran_kingman}},
        {"vm-fisher-wright", {5, exp_vm_fisher_wright}},
        {"cp-complete-extinction", {6, exp_cp_complete_extinction}},
        {"cp-exponential-law", {7, exp_cp_exponential_law}},
        {"cw-kramers", {8, exp_cw_kramers}},
        {"attractive-traps", {9, exp_attractive_traps}},
        {"cm-barrier-bounds", {10, exp_cm_barrier_bounds}},
        {"cp-torus-regimes", {11, exp_cp_torus_regimes}},
        {"annealed-meeting", {12, exp_annealed_meeting}},
        {"ensemble", {0, exp_ensemble}},
    };
    return r;
}

inline std::string id_for_criterion(int criterion) {
    for (const auto& [id, reg] : registry())
        if (reg.criterion == criterion) return id;
    throw ConfigError("no experiment for criterion " + std::to_string(criterion));
}

/// Runs a registered experiment and writes verdict.json and manifest.json
/// (plus the experiment's CSV and summary files) into cfg.out_dir.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const auto& reg = registry();
    const auto it = reg.find(cfg.id);
    if (it == reg.end()) throw ConfigError("unknown experiment id \"" + cfg.id + "\"");
    if (cfg.id != "ensemble" && (cfg.graph || cfg.graph_file || cfg.model || cfg.init || cfg.tmax || cfg.nu ||
                                 !cfg.record.empty()))
        throw ConfigError("experiment \"" + cfg.id + "\" fixes its own graph, model, init and horizon");
    Context ctx(cfg);
    auto res = it->second.run(ctx);
    res.pass = std::all_of(res.checks.begin(), res.checks.end(), [](const Check& c) { return c.pass; });
    const auto verdict = to_json(res);
    ctx.write("verdict.json", [&](std::ostream& os) { os << verdict.dump(2) << '\n'; });
    const auto manifest = ctx.manifest(cfg.id);
    std::filesystem::create_directories(cfg.out_dir);
    auto f = open_out((std::filesystem::path(cfg.out_dir) / "manifest.json").string());
    f << manifest.dump(2) << '\n';
    return res;
}

}  // namespace ipslab::harness
