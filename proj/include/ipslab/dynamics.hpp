#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ipslab/error.hpp"
#include "ipslab/graph.hpp"
#include "ipslab/model.hpp"
#include "ipslab/obsstats.hpp"
#include "ipslab/rate_tree.hpp"
#include "ipslab/rng.hpp"

namespace ipslab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raw event logs are kept only for graphs up to this size.
inline constexpr std::size_t kEventLogMaxVertices = 64;

enum class FinalState { consensus0, consensus1, extinct, frozen, stopped, capped };

inline std::string to_string(FinalState s) {
    switch (s) {
        case FinalState::consensus0: return "consensus-0";
        case FinalState::consensus1: return "consensus-1";
        case FinalState::extinct: return "extinct";
        case FinalState::frozen: return "frozen";
        case FinalState::stopped: return "stopped";
        case FinalState::capped: return "capped";
    }
    return "?";
}

struct FlipEvent {
    double t = 0.0;
    Vertex v = 0;
    std::int8_t state = 0;
};

/// Halts a run once the number of vertices in state 1 (+1 for spins) crosses a threshold.
struct StopRule {
    std::optional<std::size_t> ones_at_least;
    std::optional<std::size_t> ones_at_most;

    bool hit(std::size_t ones) const noexcept {
        return (ones_at_least && ones >= *ones_at_least) || (ones_at_most && ones <= *ones_at_most);
    }
    bool active() const noexcept { return ones_at_least || ones_at_most; }
};

struct SimOptions {
    double tmax = 1.0;
    double sample_dt = kInf;  // samples at k * sample_dt <= tmax; kInf samples only t = 0
    std::vector<Observable> observables;
    bool record_events = false;
    bool record_configs = false;  // keep the full configuration at every sample time
    StopRule stop;
    std::uint64_t master_seed = 0;
    std::uint64_t replica = 0;
};

struct RunRecord {
    std::vector<double> times;
    std::vector<Observable> observables;
    std::vector<std::vector<double>> values;  // values[k][i]: observable k at times[i]
    std::vector<double> final_values;         // observables in the final state

    bool absorbed = false;
    double absorption_time = kInf;
    bool stopped = false;  // stop rule reached
    double stop_time = kInf;
    double end_time = 0.0;
    FinalState final_state = FinalState::capped;

    std::uint64_t master_seed = 0;
    std::uint64_t replica = 0;
    std::uint64_t seed = 0;

    std::uint64_t event_count = 0;
    Configuration final_config;
    std::vector<Configuration> snapshots;  // parallel to times when record_configs is set
    std::vector<FlipEvent> events;

    std::uint64_t swap_count = 0;
    std::vector<std::uint32_t> edge_swaps;  // per-edge rewiring involvement

    /// Observable k at time t <= end_time, last-event-holds. After absorption
    /// or a stop the final state holds.
    double value_at(std::size_t k, double t) const {
        if ((absorbed || stopped) && t >= end_time) return final_values[k];
        if (times.empty()) throw PreconditionError("record has no samples");
        std::size_t i = 0;
        while (i + 1 < times.size() && times[i + 1] <= t) ++i;
        return values[k][i];
    }
};

namespace detail {

inline std::size_t count_ones(const Configuration& c) {
    std::size_t k = 0;
    for (auto x : c) k += x == 1;
    return k;
}

/// Connected components with per-component counts of ones; a component is
/// mixed when it holds both states. Used to detect frozen voter states in O(1).
class ComponentTracker {
  public:
    ComponentTracker() = default;
    ComponentTracker(const Graph& g, const Configuration& c) {
        std::size_t count = 0;
        label_ = component_labels(g, &count);
        size_.assign(count, 0);
        ones_.assign(count, 0);
        for (std::size_t v = 0; v < g.n; ++v) {
            ++size_[label_[v]];
            ones_[label_[v]] += c[v] == 1;
        }
        for (std::size_t k = 0; k < count; ++k) mixed_ += is_mixed(k);
    }

    void on_flip(Vertex v, std::int8_t new_state) {
        const auto k = label_[v];
        mixed_ -= is_mixed(k);
        if (new_state == 1)
            ++ones_[k];
        else
            --ones_[k];
        mixed_ += is_mixed(k);
    }

    bool frozen() const noexcept { return mixed_ == 0; }

  private:
    bool is_mixed(std::size_t k) const noexcept { return ones_[k] != 0 && ones_[k] != size_[k]; }

    std::vector<std::uint32_t> label_;
    std::vector<std::size_t> size_;
    std::vector<std::size_t> ones_;
    std::size_t mixed_ = 0;
};

/// Exact next-event simulation with per-vertex rates in a sum tree. Each vertex
/// keeps a local field summarising its neighbourhood; a flip touches the
/// flipped vertex and the vertices that observe it. Optional degree-preserving
/// rewiring is a second event class with constant total rate.
class RateEngine {
  public:
    RateEngine(const Graph& g, const ModelParams& m, Configuration init)
        : topo_(g), model_(m), c_(std::move(init)) {
        if (const auto* s = std::get_if<model::SIM>(&model_)) {
            sim_ = s;
            weighted_ = !s->couplings.empty();
        }
        field_.assign(g.n, 0.0);
        loops_.assign(g.n, 0);
        for (Vertex v = 0; v < g.n; ++v) recompute_field(v);
        tree_.reset(g.n);
        tree_.build([&](std::size_t v) { return rate_of(static_cast<Vertex>(v)); });
        ones_ = count_ones(c_);
    }

    void enable_rewiring(double nu) {
        if (!(nu >= 0.0)) throw ParameterError("rewiring intensity must be >= 0");
        if (nu > 0.0 && topo_.directed()) throw PreconditionError("rewiring requires an undirected graph");
        const auto m = static_cast<double>(topo_.edge_count());
        // Each unordered pair of distinct edges fires at rate nu / M.
        rewire_rate_ = topo_.edge_count() >= 2 ? nu * (m - 1.0) / 2.0 : 0.0;
        edge_swaps_.assign(topo_.edge_count(), 0);
    }

    double particle_rate() const noexcept { return tree_.total(); }
    double total_rate() const noexcept { return tree_.total() + rewire_rate_; }

    /// No further state change is possible.
    bool absorbed() const {
        if (tree_.total() > 0.0) return false;
        if (rewire_rate_ == 0.0) return true;
        if (is_cp(model_)) return ones_ == 0;
        if (is_sim(model_)) return false;
        // Voter: rewiring can reconnect disagreeing vertices unless all
        // non-isolated vertices agree.
        std::int8_t seen = -1;
        for (Vertex v = 0; v < topo_.vertex_count(); ++v) {
            if (topo_.degree(v) == 0) continue;
            if (seen == -1) seen = c_[v];
            if (c_[v] != seen) return false;
        }
        return true;
    }

    /// Performs one event; returns the flipped vertex or nullopt for a rewiring swap.
    std::optional<Vertex> step(Rng& rng) {
        const double particle = tree_.total();
        if (rewire_rate_ > 0.0 && rng.uniform() * (particle + rewire_rate_) >= particle) {
            rewire(rng);
            return std::nullopt;
        }
        const auto v = static_cast<Vertex>(tree_.sample(rng));
        flip(v);
        return v;
    }

    void flip(Vertex v) {
        const std::int8_t old = c_[v];
        const std::int8_t now = flipped(model_, old);
        c_[v] = now;
        if (now == 1) ++ones_;
        if (old == 1) --ones_;
        auto touch = [&](std::uint32_t half) {
            const Vertex w = topo_.across(half);
            if (w == v) return;
            if (sim_) {
                const double wgt = weighted_ ? sim_->couplings[half >> 1] : 1.0;
                field_[w] += wgt * static_cast<double>(now - old);
            } else {
                field_[w] += static_cast<double>(now - old);
            }
            tree_.set(w, rate_of(w));
        };
        for (auto h : topo_.in_slots(v)) touch(h);
        if (sim_ && topo_.directed())
            for (auto h : topo_.slots(v)) touch(h);
        tree_.set(v, rate_of(v));
    }

    const Configuration& state() const noexcept { return c_; }
    const Topology& topology() const noexcept { return topo_; }
    std::size_t ones() const noexcept { return ones_; }
    std::uint64_t swaps() const noexcept { return swaps_; }
    const std::vector<std::uint32_t>& edge_swaps() const noexcept { return edge_swaps_; }

  private:
    void recompute_field(Vertex v) {
        double f = 0.0;
        std::size_t loops = 0;
        auto add = [&](std::uint32_t half) {
            const Vertex w = topo_.across(half);
            if (w == v) {
                ++loops;
                return;
            }
            if (sim_)
                f += (weighted_ ? sim_->couplings[half >> 1] : 1.0) * c_[w];
            else
                f += c_[w] == 1;
        };
        for (auto h : topo_.slots(v)) add(h);
        if (sim_ && topo_.directed())
            for (auto h : topo_.in_slots(v)) add(h);
        field_[v] = f;
        loops_[v] = static_cast<std::uint32_t>(loops);
    }

    double rate_of(Vertex v) const {
        if (sim_) {
            const double j = weighted_ ? 1.0 : sim_->J;
            return glauber_rate(sim_->beta, 2.0 * c_[v] * (j * field_[v] + sim_->h));
        }
        const auto deg = topo_.degree(v);
        if (is_vm(model_)) {
            if (deg == 0) return 0.0;
            const double ones = field_[v];
            const double others = static_cast<double>(deg - loops_[v]);
            const double opposite = c_[v] == 1 ? others - ones : ones;
            return opposite / static_cast<double>(deg);
        }
        const double lambda = std::get<model::CP>(model_).lambda;
        return c_[v] == 1 ? 1.0 : lambda * field_[v];
    }

    void rewire(Rng& rng) {
        const auto m = topo_.edge_count();
        const auto e = static_cast<std::uint32_t>(rng.below(m));
        auto f = static_cast<std::uint32_t>(rng.below(m - 1));
        if (f >= e) ++f;
        // {a,b},{c,d} -> {a,c},{b,d} or {a,d},{b,c}, uniformly.
        const std::uint32_t b = 2 * e + 1;
        const std::uint32_t other = rng.below(2) == 0 ? 2 * f : 2 * f + 1;
        const Vertex touched[4] = {topo_.owner(2 * e), topo_.owner(b), topo_.owner(2 * f), topo_.owner(2 * f + 1)};
        topo_.swap_halves(b, other);
        ++swaps_;
        ++edge_swaps_[e];
        ++edge_swaps_[f];
        for (int i = 0; i < 4; ++i) {
            bool seen = false;
            for (int j = 0; j < i; ++j) seen = seen || touched[j] == touched[i];
            if (seen) continue;
            recompute_field(touched[i]);
            tree_.set(touched[i], rate_of(touched[i]));
        }
    }

    Topology topo_;
    ModelParams model_;
    const model::SIM* sim_ = nullptr;
    bool weighted_ = false;
    Configuration c_;
    std::vector<double> field_;
    std::vector<std::uint32_t> loops_;
    RateTree tree_;
    std::size_t ones_ = 0;
    double rewire_rate_ = 0.0;
    std::uint64_t swaps_ = 0;
    std::vector<std::uint32_t> edge_swaps_;
};

/// Voter model by its graphical construction: every non-isolated vertex rings
/// at rate 1, picks a uniform incident half-edge and copies the vertex across
/// it. Total rate is constant, so events cost O(1) regardless of degree.
class VoterClockEngine {
  public:
    VoterClockEngine(const Graph& g, Configuration init)
        : topo_(g), c_(std::move(init)), comps_(g, c_) {
        off_.assign(g.n + 1, 0);
        for (Vertex v = 0; v < g.n; ++v) {
            if (topo_.degree(v) > 0) active_.push_back(v);
            for (auto h : topo_.slots(v)) adj_.push_back(topo_.across(h));
            off_[v + 1] = adj_.size();
        }
        ones_ = count_ones(c_);
    }

    double total_rate() const noexcept { return absorbed() ? 0.0 : static_cast<double>(active_.size()); }
    bool absorbed() const noexcept { return comps_.frozen(); }

    std::optional<Vertex> step(Rng& rng) {
        const Vertex v = active_[rng.below(active_.size())];
        const Vertex w = adj_[off_[v] + rng.below(off_[v + 1] - off_[v])];
        if (c_[w] == c_[v]) return std::nullopt;
        c_[v] = c_[w];
        if (c_[v] == 1)
            ++ones_;
        else
            --ones_;
        comps_.on_flip(v, c_[v]);
        return v;
    }

    const Configuration& state() const noexcept { return c_; }
    const Topology& topology() const noexcept { return topo_; }
    std::size_t ones() const noexcept { return ones_; }

  private:
    Topology topo_;
    Configuration c_;
    ComponentTracker comps_;
    std::vector<Vertex> active_;
    std::vector<Vertex> adj_;  // neighbour across each slot, in slot order
    std::vector<std::size_t> off_;
    std::size_t ones_ = 0;
};

inline FinalState absorbing_tag(const ModelParams& m, const Configuration& c) {
    if (is_cp(m)) return FinalState::extinct;
    const auto ones = count_ones(c);
    if (ones == 0) return FinalState::consensus0;
    if (ones == c.size()) return FinalState::consensus1;
    return FinalState::frozen;
}

class Sampler {
  public:
    Sampler(RunRecord& rec, const SimOptions& opt) : rec_(rec), opt_(opt) {
        rec_.observables = opt.observables;
        rec_.values.assign(opt.observables.size(), {});
    }

    /// Records every grid time strictly before t (or at or before t if inclusive).
    template <class Engine>
    void until(double t, const Engine& e, bool inclusive) {
        for (;;) {
            if (k_ > 0 && !std::isfinite(opt_.sample_dt)) return;
            const double ts = k_ == 0 ? 0.0 : static_cast<double>(k_) * opt_.sample_dt;
            if (ts > opt_.tmax) return;
            if (inclusive ? ts > t : ts >= t) return;
            rec_.times.push_back(ts);
            for (std::size_t i = 0; i < opt_.observables.size(); ++i)
                rec_.values[i].push_back(observe(opt_.observables[i], e.topology(), e.state()));
            if (opt_.record_configs) rec_.snapshots.push_back(e.state());
            ++k_;
        }
    }

  private:
    RunRecord& rec_;
    const SimOptions& opt_;
    std::uint64_t k_ = 0;
};

template <class Engine>
RunRecord drive(Engine& engine, const ModelParams& m, std::uint64_t seed, const SimOptions& opt) {
    if (!(opt.tmax > 0.0)) throw ParameterError("tmax must be > 0");
    if (!(opt.sample_dt > 0.0)) throw ParameterError("sample_dt must be > 0");
    RunRecord rec;
    rec.seed = seed;
    rec.master_seed = opt.master_seed;
    rec.replica = opt.replica;
    const bool log = opt.record_events && engine.state().size() <= kEventLogMaxVertices;
    Sampler sampler(rec, opt);
    Rng rng(seed);
    double t = 0.0;

    auto finish = [&](double at, FinalState tag) {
        rec.end_time = at;
        rec.final_state = tag;
        rec.final_config = engine.state();
        for (auto o : opt.observables) rec.final_values.push_back(observe(o, engine.topology(), engine.state()));
    };

    for (;;) {
        if (opt.stop.hit(engine.ones())) {
            sampler.until(t, engine, true);
            rec.stopped = true;
            rec.stop_time = t;
            finish(t, FinalState::stopped);
            break;
        }
        if (engine.absorbed()) {
            sampler.until(t, engine, true);
            rec.absorbed = true;
            rec.absorption_time = t;
            finish(t, absorbing_tag(m, engine.state()));
            break;
        }
        const double next = t + rng.exponential(engine.total_rate());
        if (next > opt.tmax) {
            sampler.until(opt.tmax, engine, true);
            finish(opt.tmax, FinalState::capped);
            break;
        }
        sampler.until(next, engine, false);
        t = next;
        const auto flippedv = engine.step(rng);
        ++rec.event_count;
        if (log && flippedv) rec.events.push_back({t, *flippedv, engine.state()[*flippedv]});
    }
    return rec;
}

inline void check_inputs(const Graph& g, const ModelParams& m, const Configuration& init) {
    g.validate();
    validate_model(m, g.edges.size());
    validate_configuration(m, init, g.n);
}

}  // namespace detail

/// Exact trajectory of the continuous-time chain. VM on undirected graphs uses
/// the graphical clock engine; all other cases use the rate-tree engine. The
/// record stops at absorption, at the stop rule, or at opt.tmax.
inline RunRecord simulate(const Graph& g, const ModelParams& m, const Configuration& init, std::uint64_t seed,
                          const SimOptions& opt) {
    detail::check_inputs(g, m, init);
    if (is_vm(m) && !g.directed) {
        detail::VoterClockEngine engine(g, init);
        return detail::drive(engine, m, seed, opt);
    }
    detail::RateEngine engine(g, m, init);
    return detail::drive(engine, m, seed, opt);
}

inline RunRecord simulate(const Graph& g, const ModelParams& m, const Configuration& init, double tmax,
                          std::uint64_t seed, double sample_dt, const std::vector<Observable>& observables) {
    SimOptions opt;
    opt.tmax = tmax;
    opt.sample_dt = sample_dt;
    opt.observables = observables;
    return simulate(g, m, init, seed, opt);
}

/// Same as simulate but always on the rate-tree engine (used to cross-check engines).
inline RunRecord simulate_rate_engine(const Graph& g, const ModelParams& m, const Configuration& init,
                                      std::uint64_t seed, const SimOptions& opt) {
    detail::check_inputs(g, m, init);
    detail::RateEngine engine(g, m, init);
    return detail::drive(engine, m, seed, opt);
}

struct AbsorptionResult {
    bool absorbed = false;
    double tau = 0.0;
    FinalState final_state = FinalState::capped;
};

/// Time to enter a zero-rate state, or time_cap if none is reached. SIM never absorbs.
inline AbsorptionResult run_to_absorption(const Graph& g, const ModelParams& m, const Configuration& init,
                                          std::uint64_t seed, double time_cap) {
    if (!(time_cap > 0.0)) throw ParameterError("time_cap must be > 0");
    SimOptions opt;
    opt.tmax = time_cap;
    const auto rec = simulate(g, m, init, seed, opt);
    return {rec.absorbed, rec.absorbed ? rec.absorption_time : time_cap, rec.final_state};
}

struct PassageResult {
    bool reached = false;
    double time = 0.0;
};

/// First time the count of ones (up-spins) satisfies `rule`, or time_cap.
inline PassageResult first_passage(const Graph& g, const ModelParams& m, const Configuration& init,
                                   std::uint64_t seed, const StopRule& rule, double time_cap) {
    SimOptions opt;
    opt.tmax = time_cap;
    opt.stop = rule;
    const auto rec = simulate(g, m, init, seed, opt);
    return {rec.stopped, rec.stopped ? rec.stop_time : time_cap};
}

/// Particle dynamics on a graph whose unordered pairs of distinct edges swap
/// endpoints at rate nu / M each (total nu (M - 1) / 2), preserving degrees.
/// nu = 0 is exactly simulate().
inline RunRecord simulate_with_rewiring(const Graph& g, const ModelParams& m, double nu, const Configuration& init,
                                        std::uint64_t seed, const SimOptions& opt) {
    if (!(nu >= 0.0)) throw ParameterError("rewiring intensity must be >= 0");
    if (nu == 0.0) return simulate(g, m, init, seed, opt);
    if (g.directed) throw PreconditionError("rewiring requires an undirected graph");
    detail::check_inputs(g, m, init);
    detail::RateEngine engine(g, m, init);
    engine.enable_rewiring(nu);
    auto rec = detail::drive(engine, m, seed, opt);
    rec.swap_count = engine.swaps();
    rec.edge_swaps = engine.edge_swaps();
    return rec;
}

/// Stand-alone rewiring process on a topology (no particles).
class RewiringProcess {
  public:
    RewiringProcess(const Graph& g, double nu) : topo_(g) {
        if (!(nu >= 0.0)) throw ParameterError("rewiring intensity must be >= 0");
        if (g.directed) throw PreconditionError("rewiring requires an undirected graph");
        const auto m = static_cast<double>(g.edges.size());
        rate_ = g.edges.size() >= 2 ? nu * (m - 1.0) / 2.0 : 0.0;
        edge_swaps_.assign(g.edges.size(), 0);
    }

    double rate() const noexcept { return rate_; }
    const Topology& topology() const noexcept { return topo_; }
    const std::vector<std::uint32_t>& edge_swaps() const noexcept { return edge_swaps_; }

    /// Advances to time t; returns the number of swaps performed.
    std::uint64_t advance_to(double t, Rng& rng) {
        std::uint64_t swaps = 0;
        if (rate_ == 0.0) {
            now_ = t;
            return 0;
        }
        for (;;) {
            const double next = now_ + rng.exponential(rate_);
            if (next > t) break;
            now_ = next;
            const auto m = topo_.edge_count();
            const auto e = static_cast<std::uint32_t>(rng.below(m));
            auto f = static_cast<std::uint32_t>(rng.below(m - 1));
            if (f >= e) ++f;
            topo_.swap_halves(2 * e + 1, rng.below(2) == 0 ? 2 * f : 2 * f + 1);
            ++edge_swaps_[e];
            ++edge_swaps_[f];
            ++swaps;
        }
        // Memorylessness makes restarting the clock at t exact.
        now_ = t;
        return swaps;
    }

  private:
    Topology topo_;
    double rate_ = 0.0;
    double now_ = 0.0;
    std::vector<std::uint32_t> edge_swaps_;
};

/// Two runs driven by one shared graphical construction. VM: every vertex
/// rings at rate 1 and copies one shared uniform neighbour in both copies. CP:
/// every vertex carries a rate-1 recovery clock and every half-edge (out-half
/// for directed graphs) a rate-lambda infection arrow from the vertex across
/// it; both copies apply the same marks. Componentwise order is preserved.
inline std::pair<RunRecord, RunRecord> coupled_simulate(const Graph& g, const ModelParams& m,
                                                        const Configuration& low, const Configuration& high,
                                                        std::uint64_t seed, const SimOptions& opt) {
    if (is_sim(m)) throw PreconditionError("ordered coupling is provided for VM and CP only");
    detail::check_inputs(g, m, low);
    detail::check_inputs(g, m, high);
    for (std::size_t i = 0; i < g.n; ++i)
        if (low[i] > high[i]) throw PreconditionError("initial configurations are not ordered");
    if (!(opt.tmax > 0.0)) throw ParameterError("tmax must be > 0");

    struct Copy {
        Configuration c;
        std::size_t ones = 0;
        detail::ComponentTracker comps;
        RunRecord rec;
        bool done = false;
    };
    const Topology topo(g);
    const bool voter = is_vm(m);
    const double lambda = voter ? 0.0 : std::get<model::CP>(m).lambda;
    std::vector<Vertex> active;
    for (Vertex v = 0; v < g.n; ++v)
        if (topo.degree(v) > 0) active.push_back(v);
    // Infection arrows: half-edge h infects owner(h) from across(h).
    std::vector<std::uint32_t> arrows;
    for (Vertex v = 0; v < g.n; ++v)
        for (auto h : topo.slots(v)) arrows.push_back(h);

    Copy copies[2];
    copies[0].c = low;
    copies[1].c = high;
    for (auto& cp : copies) {
        cp.ones = detail::count_ones(cp.c);
        if (voter && !g.directed) cp.comps = detail::ComponentTracker(g, cp.c);
        cp.rec.seed = seed;
        cp.rec.master_seed = opt.master_seed;
        cp.rec.replica = opt.replica;
        cp.rec.observables = opt.observables;
        cp.rec.values.assign(opt.observables.size(), {});
    }

    auto absorbed = [&](const Copy& cp) {
        if (!voter) return cp.ones == 0;
        if (!g.directed) return cp.comps.frozen();
        for (Vertex v = 0; v < g.n; ++v)
            for (auto h : topo.slots(v))
                if (cp.c[topo.across(h)] != cp.c[v]) return false;
        return true;
    };
    std::uint64_t k = 0;
    auto sample_until = [&](double t, bool inclusive) {
        for (;;) {
            if (k > 0 && !std::isfinite(opt.sample_dt)) return;
            const double ts = k == 0 ? 0.0 : static_cast<double>(k) * opt.sample_dt;
            if (ts > opt.tmax || (inclusive ? ts > t : ts >= t)) return;
            for (auto& cp : copies) {
                if (cp.done) continue;
                cp.rec.times.push_back(ts);
                for (std::size_t i = 0; i < opt.observables.size(); ++i)
                    cp.rec.values[i].push_back(observe(opt.observables[i], topo, cp.c));
                if (opt.record_configs) cp.rec.snapshots.push_back(cp.c);
            }
            ++k;
        }
    };
    auto settle = [&](double t) {
        for (auto& cp : copies) {
            if (cp.done || !absorbed(cp)) continue;
            // Samples at exactly t still belong to this copy.
            cp.done = true;
            cp.rec.absorbed = true;
            cp.rec.absorption_time = t;
            cp.rec.end_time = t;
            cp.rec.final_state = detail::absorbing_tag(m, cp.c);
            cp.rec.final_config = cp.c;
            for (auto o : opt.observables) cp.rec.final_values.push_back(observe(o, topo, cp.c));
        }
    };
    auto apply = [&](Copy& cp, Vertex v, std::int8_t s) {
        if (cp.done || cp.c[v] == s) return;
        cp.c[v] = s;
        if (s == 1)
            ++cp.ones;
        else
            --cp.ones;
        if (voter && !g.directed) cp.comps.on_flip(v, s);
        ++cp.rec.event_count;
    };

    const double recovery_total = voter ? 0.0 : static_cast<double>(g.n);
    const double total = voter ? static_cast<double>(active.size())
                               : recovery_total + lambda * static_cast<double>(arrows.size());
    Rng rng(seed);
    double t = 0.0;
    // Samples at t = 0 precede any absorption bookkeeping.
    sample_until(0.0, true);
    settle(0.0);
    while (!(copies[0].done && copies[1].done) && total > 0.0) {
        const double next = t + rng.exponential(total);
        if (next > opt.tmax) break;
        sample_until(next, false);
        t = next;
        if (voter) {
            const Vertex v = active[rng.below(active.size())];
            const auto s = topo.slots(v);
            const Vertex w = topo.across(s[rng.below(s.size())]);
            const std::int8_t a = copies[0].c[w], b = copies[1].c[w];
            apply(copies[0], v, a);
            apply(copies[1], v, b);
        } else if (rng.uniform() * total < recovery_total) {
            const auto v = static_cast<Vertex>(rng.below(g.n));
            apply(copies[0], v, 0);
            apply(copies[1], v, 0);
        } else {
            const auto h = arrows[rng.below(arrows.size())];
            const Vertex v = topo.owner(h), w = topo.across(h);
            for (auto& cp : copies)
                if (cp.c[w] == 1) apply(cp, v, 1);
        }
        settle(t);
    }
    sample_until(opt.tmax, true);
    for (auto& cp : copies) {
        if (cp.done) continue;
        cp.rec.end_time = opt.tmax;
        cp.rec.final_state = FinalState::capped;
        cp.rec.final_config = cp.c;
        for (auto o : opt.observables) cp.rec.final_values.push_back(observe(o, topo, cp.c));
    }
    return {std::move(copies[0].rec), std::move(copies[1].rec)};
}

}  // namespace ipslab
