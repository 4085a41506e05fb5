#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vrd/random.hpp"

namespace vrd {

enum class Method { Steepest, RandomDescent, Tabu, Metropolis, ParallelTempering, Piped };

struct StopCriterion {
    std::optional<std::uint64_t> max_steps_no_improve;
    std::optional<double> max_runtime_ms;
};

struct SearchConfig {
    Method method = Method::ParallelTempering;
    StopCriterion stop;
    double min_temperature = 1e-6;  // tempering ladder
    double max_temperature = 10.0;
    int replicas = 3;
    int swap_interval = 50;  // rounds between swap attempts
    // Tempering stop counter: false counts one round of all replicas as a step, true counts
    // every replica's sampled neighbor.
    bool count_replica_samples = false;
    double temperature = 1.0;  // metropolis
    int tabu_tenure = 10;
    int batch = 16;  // samples per step when a neighborhood cannot be enumerated
    std::uint64_t seed = 0;
    std::vector<SearchConfig> stages;  // piped
};

template <class S>
struct Candidate {
    S state;
    double f = 0.0;
    std::uint64_t signature = 0;
    std::uint64_t inverse = 0;
};

/// A neighborhood: `sample` draws one neighbor (nullopt when the draw failed); `enumerate` lists
/// the full neighborhood and may be left empty, in which case a batch of samples stands in.
template <class S>
struct Neighborhood {
    std::function<std::optional<Candidate<S>>(const S&, double, Rng&)> sample;
    std::function<std::vector<Candidate<S>>(const S&, double, Rng&)> enumerate;
};

struct SearchStats {
    std::uint64_t steps = 0;
    std::uint64_t accepted = 0;
    std::uint64_t improvements = 0;
    std::uint64_t swap_attempts = 0;
    std::uint64_t swap_accepts = 0;
};

/// Accepts improvements always and a worsening delta with probability exp(-delta / temperature).
inline bool metropolis_accept(double delta, double temperature, Rng& rng) {
    if (delta <= 0.0) return true;
    return uniform01(rng) < std::exp(-delta / temperature);
}

/// Replica exchange between temperatures t_i and t_j holding objectives f_i and f_j.
inline bool swap_accept(double f_i, double f_j, double t_i, double t_j, Rng& rng) {
    const double x = (1.0 / t_i - 1.0 / t_j) * (f_i - f_j);
    if (x >= 0.0) return true;
    return uniform01(rng) < std::exp(x);
}

/// Geometric ladder from tmin to tmax.
inline std::vector<double> temperature_ladder(double tmin, double tmax, int replicas) {
    if (replicas < 1) throw std::invalid_argument("ladder needs at least one replica");
    std::vector<double> out(static_cast<std::size_t>(replicas));
    if (replicas == 1) {
        out[0] = tmin;
        return out;
    }
    const double ratio = std::pow(tmax / tmin, 1.0 / (replicas - 1));
    for (int i = 0; i < replicas; ++i) out[static_cast<std::size_t>(i)] = tmin * std::pow(ratio, i);
    out.back() = tmax;
    return out;
}

namespace detail {

inline bool improves(double f, double best) { return f < best - 1e-12 * std::max(1.0, std::abs(best)); }

// Stop bookkeeping: steps since the last strict improvement of the global best, and wall clock.
class StopWatch {
public:
    explicit StopWatch(const StopCriterion& c) : c_(c), start_(std::chrono::steady_clock::now()) {
        if (!c.max_steps_no_improve && !c.max_runtime_ms) throw std::invalid_argument("stop criterion needs a bound");
    }
    void step(bool improved) { idle_ = improved ? 0 : idle_ + 1; }
    bool done() const {
        if (c_.max_steps_no_improve && idle_ >= *c_.max_steps_no_improve) return true;
        if (c_.max_runtime_ms) {
            const std::chrono::duration<double, std::milli> el = std::chrono::steady_clock::now() - start_;
            if (el.count() >= *c_.max_runtime_ms) return true;
        }
        return false;
    }

private:
    StopCriterion c_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t idle_ = 0;
};

template <class S>
std::vector<Candidate<S>> neighbors(const Neighborhood<S>& nb, const Candidate<S>& cur, int batch, Rng& rng) {
    if (nb.enumerate) return nb.enumerate(cur.state, cur.f, rng);
    std::vector<Candidate<S>> out;
    for (int i = 0; i < batch; ++i)
        if (auto c = nb.sample(cur.state, cur.f, rng)) out.push_back(std::move(*c));
    return out;
}

template <class S>
Candidate<S> steepest(const SearchConfig& cfg, Candidate<S> cur, const Neighborhood<S>& nb, Rng& rng, SearchStats& st) {
    StopWatch sw(cfg.stop);
    while (!sw.done()) {
        auto ns = neighbors(nb, cur, cfg.batch, rng);
        ++st.steps;
        auto it = std::min_element(ns.begin(), ns.end(), [](const auto& a, const auto& b) { return a.f < b.f; });
        if (it == ns.end() || !improves(it->f, cur.f)) break;
        cur = std::move(*it);
        ++st.accepted;
        ++st.improvements;
        sw.step(true);
    }
    return cur;
}

template <class S>
Candidate<S> random_descent(const SearchConfig& cfg, Candidate<S> cur, const Neighborhood<S>& nb, Rng& rng, SearchStats& st) {
    StopWatch sw(cfg.stop);
    while (!sw.done()) {
        auto c = nb.sample(cur.state, cur.f, rng);
        ++st.steps;
        const bool better = c && improves(c->f, cur.f);
        if (better) {
            cur = std::move(*c);
            ++st.accepted;
            ++st.improvements;
        }
        sw.step(better);
    }
    return cur;
}

template <class S>
Candidate<S> metropolis(const SearchConfig& cfg, Candidate<S> cur, const Neighborhood<S>& nb, Rng& rng, SearchStats& st) {
    StopWatch sw(cfg.stop);
    Candidate<S> best = cur;
    while (!sw.done()) {
        auto c = nb.sample(cur.state, cur.f, rng);
        ++st.steps;
        bool improved = false;
        if (c && metropolis_accept(c->f - cur.f, cfg.temperature, rng)) {
            cur = std::move(*c);
            ++st.accepted;
            if (improves(cur.f, best.f)) {
                best = cur;
                improved = true;
                ++st.improvements;
            }
        }
        sw.step(improved);
    }
    return best;
}

template <class S>
Candidate<S> tabu(const SearchConfig& cfg, Candidate<S> cur, const Neighborhood<S>& nb, Rng& rng, SearchStats& st) {
    StopWatch sw(cfg.stop);
    Candidate<S> best = cur;
    std::deque<std::uint64_t> list;
    while (!sw.done()) {
        auto ns = neighbors(nb, cur, cfg.batch, rng);
        ++st.steps;
        const Candidate<S>* pick = nullptr;
        for (const auto& c : ns) {
            const bool forbidden = std::find(list.begin(), list.end(), c.signature) != list.end();
            if (forbidden && !improves(c.f, best.f)) continue;
            if (!pick || c.f < pick->f) pick = &c;
        }
        if (!pick) {
            sw.step(false);
            if (ns.empty()) break;
            continue;
        }
        cur = *pick;
        ++st.accepted;
        if (cfg.tabu_tenure > 0) {
            list.push_back(cur.inverse);
            while (list.size() > static_cast<std::size_t>(cfg.tabu_tenure)) list.pop_front();
        }
        const bool improved = improves(cur.f, best.f);
        if (improved) {
            best = cur;
            ++st.improvements;
        }
        sw.step(improved);
    }
    return best;
}

// Replicas advance in lockstep; one round samples one neighbor per replica.
template <class S>
Candidate<S> tempering(const SearchConfig& cfg, Candidate<S> init, const Neighborhood<S>& nb, Rng& rng, SearchStats& st) {
    const auto temps = temperature_ladder(cfg.min_temperature, cfg.max_temperature, cfg.replicas);
    const std::size_t k = temps.size();
    const std::uint64_t base = rng();
    std::vector<Rng> streams;
    for (std::size_t i = 0; i < k; ++i) streams.emplace_back(derive_seed(base, i));
    Rng swap_rng(derive_seed(base, k));
    std::vector<Candidate<S>> rep(k, init);  // rep[i] runs at temps[i]
    Candidate<S> best = init;
    StopWatch sw(cfg.stop);
    std::uint64_t round = 0;
    while (!sw.done()) {
        bool improved = false;
        for (std::size_t i = 0; i < k; ++i) {
            auto c = nb.sample(rep[i].state, rep[i].f, streams[i]);
            bool better = false;
            if (c && metropolis_accept(c->f - rep[i].f, temps[i], streams[i])) {
                rep[i] = std::move(*c);
                ++st.accepted;
                if (improves(rep[i].f, best.f)) {
                    best = rep[i];
                    better = true;
                    ++st.improvements;
                }
            }
            improved = improved || better;
            if (cfg.count_replica_samples) sw.step(better);
        }
        ++st.steps;
        ++round;
        if (k > 1 && cfg.swap_interval > 0 && round % static_cast<std::uint64_t>(cfg.swap_interval) == 0) {
            const std::size_t i = uniform_index(swap_rng, k - 1);
            ++st.swap_attempts;
            if (swap_accept(rep[i].f, rep[i + 1].f, temps[i], temps[i + 1], swap_rng)) {
                std::swap(rep[i], rep[i + 1]);
                ++st.swap_accepts;
            }
        }
        if (!cfg.count_replica_samples) sw.step(improved);
    }
    return best;
}

}  // namespace detail

/// Runs the configured engine from `init` and returns the best candidate seen.
template <class S>
Candidate<S> run_search(const SearchConfig& cfg, Candidate<S> init, const Neighborhood<S>& nb, Rng& rng,
                        SearchStats* stats = nullptr) {
    SearchStats local;
    SearchStats& st = stats ? *stats : local;
    Candidate<S> out;
    switch (cfg.method) {
        case Method::Steepest: out = detail::steepest(cfg, std::move(init), nb, rng, st); break;
        case Method::RandomDescent: out = detail::random_descent(cfg, std::move(init), nb, rng, st); break;
        case Method::Tabu: out = detail::tabu(cfg, std::move(init), nb, rng, st); break;
        case Method::Metropolis: out = detail::metropolis(cfg, std::move(init), nb, rng, st); break;
        case Method::ParallelTempering: out = detail::tempering(cfg, std::move(init), nb, rng, st); break;
        case Method::Piped:
            out = std::move(init);
            for (const auto& stage : cfg.stages) {
                auto next = run_search(stage, out, nb, rng, &st);
                if (next.f <= out.f) out = std::move(next);
            }
            break;
    }
    return out;
}

}  // namespace vrd
