#pragma once

#include <optional>
#include <vector>

#include "vrd/model.hpp"

namespace vrd {

/// One piece of a drone tour. A ride follows its truck's tour from `from` to `to`; a flight goes
/// from -> via -> to, or straight from -> to when via < 0. Node 0 as `from` is the start depot and
/// as `to` the end depot.
struct Leg {
    int truck = 0;  // 0 for flights
    int from = 0;
    int via = -1;
    int to = 0;

    bool ride() const { return truck > 0; }
    bool sortie() const { return truck == 0 && via >= 0; }
    friend bool operator==(const Leg&, const Leg&) = default;
};

inline Leg ride_leg(int truck, int from, int to) { return {truck, from, -1, to}; }
inline Leg flight_leg(int from, int via, int to) { return {0, from, via, to}; }

/// Editable form of a solution. Truck tours list packages only; drones are leg sequences, so a
/// drone riding a truck follows edits of that truck's tour without being touched.
struct RoutePlan {
    std::vector<std::vector<int>> trucks;
    std::vector<std::vector<Leg>> drones;

    friend bool operator==(const RoutePlan&, const RoutePlan&) = default;
};

/// Throws std::invalid_argument when a drone flies more than two edges in a row.
RoutePlan plan_from_solution(const Solution& s);

/// Expands the plan. Returns nullopt when a leg does not line up with its truck tour or with the
/// end of the previous leg.
std::optional<Solution> materialize(const RoutePlan& plan, int n_p);

/// Drops empty rides and merges consecutive rides on one truck.
void normalize_legs(std::vector<Leg>& legs);

/// Objective of a feasible solution, or nullopt when any feasibility rule fails.
std::optional<double> evaluate(const Solution& s, const Instance& inst);
std::optional<double> evaluate(const RoutePlan& plan, const Instance& inst);

/// Position lookups for the truck tours of a plan. Positions index the full tour
/// 0, p_1, ..., p_k, 0; the start depot is position 0 and the end depot k + 1.
class TruckIndex {
public:
    TruckIndex(const RoutePlan& plan, int n_p);

    int truck_of(int node) const { return node == 0 ? 0 : truck_of_[static_cast<std::size_t>(node)]; }
    /// Position of `node` on truck t; depot resolves to the start unless `end` is set. -1 if absent.
    int position(int t, int node, bool end = false) const;
    int end_position(int t) const;
    /// Node at full-tour position k of truck t.
    int node_at(int t, int k) const;

private:
    const RoutePlan& plan_;
    std::vector<int> truck_of_;
    std::vector<int> pos_;
};

}  // namespace vrd
