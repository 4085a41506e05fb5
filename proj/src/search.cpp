#include "vrd/search.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <stdexcept>

namespace vrd {

using nlohmann::json;

namespace {

constexpr std::pair<Method, std::string_view> kMethods[] = {
    {Method::Steepest, "steepest"},
    {Method::RandomDescent, "random-descent"},
    {Method::Tabu, "tabu"},
    {Method::Metropolis, "metropolis"},
    {Method::ParallelTempering, "parallel-tempering"},
    {Method::Piped, "piped"},
};

SearchConfig tempering(std::uint64_t steps, double tmin, double tmax) {
    SearchConfig c;
    c.method = Method::ParallelTempering;
    c.stop.max_steps_no_improve = steps;
    c.min_temperature = tmin;
    c.max_temperature = tmax;
    c.replicas = 3;
    return c;
}

SearchConfig config_from_json(const json& j, SearchConfig c) {
    if (!j.is_object()) throw std::invalid_argument("search config must be an object");
    for (const auto& [key, v] : j.items()) {
        if (key == "method") {
            c.method = parse_method(v.get<std::string>());
        } else if (key == "stop") {
            if (!v.is_object()) throw std::invalid_argument("stop must be an object");
            c.stop = {};
            if (v.contains("max_steps_no_improve")) c.stop.max_steps_no_improve = v.at("max_steps_no_improve").get<std::uint64_t>();
            if (v.contains("max_runtime_ms")) c.stop.max_runtime_ms = v.at("max_runtime_ms").get<double>();
        } else if (key == "min_temperature") {
            c.min_temperature = v.get<double>();
        } else if (key == "max_temperature") {
            c.max_temperature = v.get<double>();
        } else if (key == "replicas") {
            c.replicas = v.get<int>();
        } else if (key == "swap_interval") {
            c.swap_interval = v.get<int>();
        } else if (key == "count_replica_samples") {
            c.count_replica_samples = v.get<bool>();
        } else if (key == "temperature") {
            c.temperature = v.get<double>();
        } else if (key == "tabu_tenure") {
            c.tabu_tenure = v.get<int>();
        } else if (key == "batch") {
            c.batch = v.get<int>();
        } else if (key == "seed") {
            c.seed = v.get<std::uint64_t>();
        } else if (key == "stages") {
            c.stages.clear();
            for (const auto& s : v) c.stages.push_back(config_from_json(s, SearchConfig{}));
        } else {
            throw std::invalid_argument("unknown search config key: " + key);
        }
    }
    validate(c);
    return c;
}

json config_to_json(const SearchConfig& c) {
    json j;
    j["method"] = std::string(method_name(c.method));
    json stop = json::object();
    if (c.stop.max_steps_no_improve) stop["max_steps_no_improve"] = *c.stop.max_steps_no_improve;
    if (c.stop.max_runtime_ms) stop["max_runtime_ms"] = *c.stop.max_runtime_ms;
    j["stop"] = stop;
    j["min_temperature"] = c.min_temperature;
    j["max_temperature"] = c.max_temperature;
    j["replicas"] = c.replicas;
    j["swap_interval"] = c.swap_interval;
    j["count_replica_samples"] = c.count_replica_samples;
    j["temperature"] = c.temperature;
    j["tabu_tenure"] = c.tabu_tenure;
    j["batch"] = c.batch;
    j["seed"] = c.seed;
    if (!c.stages.empty()) {
        j["stages"] = json::array();
        for (const auto& s : c.stages) j["stages"].push_back(config_to_json(s));
    }
    return j;
}

// Position of `area` among the areas of its drone.
int area_ordinal(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area) {
    const auto areas = find_speedup_areas(plan, inst, area.drone);
    const auto it = std::find(areas.begin(), areas.end(), area);
    if (it == areas.end()) throw std::invalid_argument("area does not belong to the plan");
    return static_cast<int>(it - areas.begin());
}

}  // namespace

std::string_view method_name(Method m) {
    for (const auto& [k, name] : kMethods)
        if (k == m) return name;
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (const auto& [k, n] : kMethods)
        if (n == name) return k;
    throw std::invalid_argument("unknown search method: " + std::string(name));
}

void validate(const SearchConfig& c) {
    if (c.method != Method::Piped && !c.stop.max_steps_no_improve && !c.stop.max_runtime_ms)
        throw std::invalid_argument("stop criterion needs a bound");
    switch (c.method) {
        case Method::ParallelTempering:
            if (!(c.min_temperature > 0.0) || !(c.min_temperature < c.max_temperature))
                throw std::invalid_argument("temperature ladder needs 0 < min < max");
            if (c.replicas < 2) throw std::invalid_argument("tempering needs at least two replicas");
            if (c.swap_interval < 1) throw std::invalid_argument("swap interval must be positive");
            break;
        case Method::Metropolis:
            if (!(c.temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
            break;
        case Method::Tabu:
            if (c.tabu_tenure < 0) throw std::invalid_argument("tabu tenure must be non-negative");
            break;
        case Method::Piped:
            if (c.stages.empty()) throw std::invalid_argument("pipe needs at least one stage");
            for (const auto& s : c.stages) validate(s);
            break;
        default:
            break;
    }
    if (c.batch < 1) throw std::invalid_argument("batch must be positive");
}

PhaseConfigs default_phase_configs() {
    PhaseConfigs c;
    c.tsp = tempering(1000000, 1e-6, 10.0);
    c.speedup1 = tempering(3000, 0.001, 1.0);
    c.outer = tempering(5, 1e-7, 10.0);
    c.speedup2 = tempering(5, 1e-6, 10.0);
    c.n_angles = 10;
    return c;
}

PhaseConfigs parse_phase_configs(std::string_view text) {
    PhaseConfigs c = default_phase_configs();
    try {
        const json j = json::parse(text.begin(), text.end());
        if (!j.is_object()) throw std::invalid_argument("config must be an object");
        for (const auto& [key, v] : j.items()) {
            if (key == "tsp") c.tsp = config_from_json(v, c.tsp);
            else if (key == "speedup1") c.speedup1 = config_from_json(v, c.speedup1);
            else if (key == "outer") c.outer = config_from_json(v, c.outer);
            else if (key == "speedup2") c.speedup2 = config_from_json(v, c.speedup2);
            else if (key == "n_angles") c.n_angles = v.get<int>();
            else throw std::invalid_argument("unknown config section: " + key);
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad config: ") + e.what());
    }
    if (c.n_angles < 1) throw std::invalid_argument("n_angles must be positive");
    return c;
}

std::string serialize_phase_configs(const PhaseConfigs& c) {
    json j;
    j["tsp"] = config_to_json(c.tsp);
    j["speedup1"] = config_to_json(c.speedup1);
    j["outer"] = config_to_json(c.outer);
    j["speedup2"] = config_to_json(c.speedup2);
    j["n_angles"] = c.n_angles;
    return j.dump(2);
}

SearchConfig scaled(SearchConfig cfg, double factor) {
    if (cfg.stop.max_steps_no_improve)
        cfg.stop.max_steps_no_improve = std::max<std::uint64_t>(
            1, static_cast<std::uint64_t>(std::llround(static_cast<double>(*cfg.stop.max_steps_no_improve) * factor)));
    if (cfg.stop.max_runtime_ms) cfg.stop.max_runtime_ms = std::max(1.0, std::round(*cfg.stop.max_runtime_ms * factor));
    for (auto& s : cfg.stages) s = scaled(s, factor);
    return cfg;
}

PhaseConfigs scaled(PhaseConfigs c, double factor) {
    c.tsp = scaled(c.tsp, factor);
    c.speedup1 = scaled(c.speedup1, factor);
    c.outer = scaled(c.outer, factor);
    c.speedup2 = scaled(c.speedup2, factor);
    return c;
}

RoutePlan run_speedup(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area, const SearchConfig& cfg,
                      Rng& rng, SearchStats* stats) {
    const auto f0 = evaluate(plan, inst);
    if (!f0) throw std::invalid_argument("speedup needs a feasible plan");
    const int ordinal = area_ordinal(plan, inst, area);
    const int drone = area.drone;
    Neighborhood<RoutePlan> nb;
    nb.sample = [&](const RoutePlan& s, double, Rng& r) -> std::optional<Candidate<RoutePlan>> {
        const auto areas = find_speedup_areas(s, inst, drone);
        if (ordinal >= static_cast<int>(areas.size())) return std::nullopt;
        auto out = sample_small_neighbor(s, inst, areas[static_cast<std::size_t>(ordinal)], r);
        if (out.status != SampleStatus::Ok) return std::nullopt;
        auto& m = *out.move;
        return Candidate<RoutePlan>{std::move(m.plan), m.objective, m.signature, m.inverse};
    };
    auto best = run_search(cfg, Candidate<RoutePlan>{plan, *f0, 0, 0}, nb, rng, stats);
    return best.f <= *f0 ? best.state : plan;
}

RoutePlan run_outer_search(const RoutePlan& plan, const Instance& inst, const SearchConfig& outer,
                           const SearchConfig& inner, Rng& rng, SearchStats* stats) {
    const auto f0 = evaluate(plan, inst);
    if (!f0) throw std::invalid_argument("outer search needs a feasible plan");
    const SpeedUpRunner runner = [&](const RoutePlan& p, const SpeedUpArea& area, Rng& r) {
        return run_speedup(p, inst, area, inner, r);
    };
    Neighborhood<RoutePlan> nb;
    nb.sample = [&](const RoutePlan& s, double, Rng& r) -> std::optional<Candidate<RoutePlan>> {
        auto out = sample_outer_neighbor(s, inst, runner, r);
        if (!out.plan) return std::nullopt;
        return Candidate<RoutePlan>{std::move(*out.plan), *out.objective, 0, 0};
    };
    auto best = run_search(outer, Candidate<RoutePlan>{plan, *f0, 0, 0}, nb, rng, stats);
    return best.f <= *f0 ? best.state : plan;
}

}  // namespace vrd
