#include "vrd/pipeline.hpp"

#include <chrono>

#include "vrd/construct.hpp"
#include "vrd/route_plan.hpp"
#include "vrd/schedule.hpp"

namespace vrd {

namespace {

Rng stage_rng(std::uint64_t seed, const SearchConfig& cfg, std::uint64_t stage) {
    return Rng(derive_seed(seed ^ splitmix64(cfg.seed), stage));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Solution solve_pre_initial(const Instance& inst, const PhaseConfigs& cfg, std::uint64_t seed) {
    Rng rng = stage_rng(seed, cfg.tsp, 1);
    return solve_mtsp(inst, cfg.n_angles, cfg.tsp, rng);
}

SolveResult solve(const Instance& inst, const PhaseConfigs& cfg, std::uint64_t seed, Stage up_to) {
    inst.validate();
    SolveResult out;
    auto t0 = std::chrono::steady_clock::now();
    out.pre_initial.solution = solve_pre_initial(inst, cfg, seed);
    out.pre_initial.objective = objective(out.pre_initial.solution, inst);
    out.pre_initial.seconds = seconds_since(t0);
    if (up_to == Stage::PreInitial) return out;

    t0 = std::chrono::steady_clock::now();
    Rng r2 = stage_rng(seed, cfg.speedup1, 2);
    out.initial.solution = build_initial_solution(inst, out.pre_initial.solution, cfg.speedup1, r2);
    out.initial.objective = objective(out.initial.solution, inst);
    out.initial.seconds = seconds_since(t0);
    if (up_to == Stage::Initial) return out;

    t0 = std::chrono::steady_clock::now();
    Rng r3 = stage_rng(seed, cfg.outer, 3);
    const RoutePlan fin = run_outer_search(plan_from_solution(out.initial.solution), inst, cfg.outer, cfg.speedup2, r3);
    out.final.solution = *materialize(fin, inst.n_p);
    out.final.objective = objective(out.final.solution, inst);
    out.final.seconds = seconds_since(t0);
    return out;
}

}  // namespace vrd
