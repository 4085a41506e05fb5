#pragma once

#include "vrd/model.hpp"

namespace vrd::testing {

inline Instance make_instance(int n_t, int n_d, std::vector<Point> pts, double range = 1e9) {
    Instance inst;
    inst.n_t = n_t;
    inst.n_d = n_d;
    inst.n_p = static_cast<int>(pts.size());
    inst.positions = std::move(pts);
    inst.drone_range = range;
    return inst;
}

/// Two trucks; drone 1 moves from truck 1 to truck 2 while drone 2 moves from truck 2 to truck 1,
/// and each truck waits at its pickup node for a drone that is still held by the other truck.
///   truck 1: 0 -> 1 -> 2 -> 0      truck 2: 0 -> 3 -> 4 -> 0
///   drone 1: rides t1 0->1->2, hops 2->3, rides t2 3->4->0
///   drone 2: rides t2 0->3->4, hops 4->1, rides t1 1->2->0
inline Instance deadlock_instance() { return make_instance(2, 2, {{5, 1}, {9, 2}, {-4, 3}, {-8, 1}}); }

inline Solution deadlock_solution() {
    Solution s;
    s.trucks = {TruckTour{{0, 1, 2, 0}, {{1}, {1, 2}, {2}}}, TruckTour{{0, 3, 4, 0}, {{2}, {1, 2}, {1}}}};
    s.drones = {DroneTour{{0, 1, 2, 3, 4, 0}, {1, 1, 0, 2, 2}}, DroneTour{{0, 3, 4, 1, 2, 0}, {2, 2, 0, 1, 1}}};
    return s;
}

/// Drone 1 flies from node 1 (truck 1) to node 3 (truck 2) while drone 2 flies the other way.
inline Instance swap_instance() { return make_instance(2, 2, {{5, 1}, {9, 2}, {-4, 3}, {-8, 1}}); }

inline Solution swap_solution() {
    Solution s;
    s.trucks = {TruckTour{{0, 1, 2, 0}, {{1}, {2}, {2}}}, TruckTour{{0, 3, 4, 0}, {{2}, {1}, {1}}}};
    s.drones = {DroneTour{{0, 1, 3, 4, 0}, {1, 0, 2, 2}}, DroneTour{{0, 3, 1, 2, 0}, {2, 0, 1, 1}}};
    return s;
}

/// Truck 0->1->2->0 over (10,0),(20,0); the drone leaves at node 1, delivers node 3 at (14,3)
/// and rejoins at node 2.
inline Instance sortie_instance() { return make_instance(1, 1, {{10, 0}, {20, 0}, {14, 3}}); }

inline Solution sortie_solution() {
    Solution s;
    s.trucks = {TruckTour{{0, 1, 2, 0}, {{1}, {}, {1}}}};
    s.drones = {DroneTour{{0, 1, 3, 2, 0}, {1, 0, 0, 1}}};
    return s;
}

}  // namespace vrd::testing
