#pragma once

#include <vector>

#include "vrd/engines.hpp"
#include "vrd/model.hpp"

namespace vrd {

/// Packages sorted by angle around the depot, starting at `start_angle`, cut into n_t
/// contiguous groups whose sizes differ by at most one (larger groups first).
struct SectorAssignment {
    double start_angle = 0.0;
    std::vector<std::vector<int>> groups;
};

SectorAssignment sector_assignment(const Instance& inst, double start_angle);

/// Sum of the truck's arrival times at the packages of `order`; the return edge is free.
double latency_cost(const std::vector<int>& order, const Instance& inst);

/// Latency-TSP local search over 2-opt reversals and single-node relocations, starting from
/// `packages` in the given order.
std::vector<int> tsp_latency_search(const std::vector<int>& packages, const Instance& inst, const SearchConfig& cfg,
                                    Rng& rng);

/// Best sector sweep over n_angles evenly spaced start angles. Drones stay idle.
Solution solve_mtsp(const Instance& inst, int n_angles, const SearchConfig& tsp, Rng& rng);

/// Drone i rides the whole tour of truck 1 + (i - 1) mod n_t; drones of an empty truck stay idle.
Solution distribute_drones(const Solution& trucks_only, const Instance& inst);

/// Distributes the drones over `mtsp` and runs SpeedUp on each drone's full tour.
Solution build_initial_solution(const Instance& inst, const Solution& mtsp, const SearchConfig& speedup, Rng& rng);

/// Greedy dispatch baseline over the truck tours of `mtsp`.
Solution greedy_drones(const Instance& inst, const Solution& mtsp);

}  // namespace vrd
