#pragma once

#include <string>
#include <string_view>

#include "vrd/engines.hpp"
#include "vrd/neighborhoods.hpp"
#include "vrd/route_plan.hpp"

namespace vrd {

std::string_view method_name(Method m);
/// Throws std::invalid_argument for an unknown name.
Method parse_method(std::string_view name);

/// Throws std::invalid_argument when a field the method needs is missing or out of range.
void validate(const SearchConfig& cfg);

/// Settings of the four nested searches plus the mTSP sweep.
struct PhaseConfigs {
    SearchConfig tsp;
    SearchConfig speedup1;  // initial solution
    SearchConfig outer;
    SearchConfig speedup2;  // inside outer moves
    int n_angles = 10;
};

/// Parallel tempering everywhere, with the step budgets and ladders the experiments use.
PhaseConfigs default_phase_configs();

/// Reads a JSON document with optional sections tsp, speedup1, outer, speedup2 and n_angles.
/// Missing keys keep their defaults. Throws std::invalid_argument on malformed input.
PhaseConfigs parse_phase_configs(std::string_view text);
std::string serialize_phase_configs(const PhaseConfigs& c);

/// Multiplies the stop bounds by `factor`, rounding and keeping at least 1.
SearchConfig scaled(SearchConfig cfg, double factor);
PhaseConfigs scaled(PhaseConfigs c, double factor);

/// SpeedUp: the configured engine over small moves of one area. The area is tracked by its
/// ordinal among the drone's areas, which small moves preserve. Never worse than `plan`.
RoutePlan run_speedup(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area, const SearchConfig& cfg,
                      Rng& rng, SearchStats* stats = nullptr);

/// OuterSearch: the configured engine over drone and package changes, each followed by SpeedUp
/// with `inner`. Never worse than `plan`.
RoutePlan run_outer_search(const RoutePlan& plan, const Instance& inst, const SearchConfig& outer,
                           const SearchConfig& inner, Rng& rng, SearchStats* stats = nullptr);

}  // namespace vrd
