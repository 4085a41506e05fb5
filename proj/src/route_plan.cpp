#include "vrd/route_plan.hpp"

#include <stdexcept>

#include "vrd/feasibility.hpp"
#include "vrd/schedule.hpp"

namespace vrd {

RoutePlan plan_from_solution(const Solution& s) {
    RoutePlan plan;
    for (const auto& t : s.trucks) {
        std::vector<int> pk;
        for (std::size_t i = 1; i + 1 < t.nodes.size(); ++i) pk.push_back(t.nodes[i]);
        plan.trucks.push_back(std::move(pk));
    }
    for (const auto& d : s.drones) {
        std::vector<Leg> legs;
        std::size_t i = 0;
        const std::size_t m = d.carried.size();
        while (i < m) {
            const int c = d.carried[i];
            std::size_t j = i;
            while (j < m && d.carried[j] == c && (c != 0 || j - i < 3)) ++j;
            if (c != 0) {
                legs.push_back(ride_leg(c, d.nodes[i], d.nodes[j]));
            } else if (j - i == 1) {
                legs.push_back(flight_leg(d.nodes[i], -1, d.nodes[i + 1]));
            } else if (j - i == 2) {
                legs.push_back(flight_leg(d.nodes[i], d.nodes[i + 1], d.nodes[i + 2]));
            } else {
                throw std::invalid_argument("drone flies more than two edges in a row");
            }
            i = j;
        }
        plan.drones.push_back(std::move(legs));
    }
    return plan;
}

void normalize_legs(std::vector<Leg>& legs) {
    std::vector<Leg> out;
    out.reserve(legs.size());
    for (const auto& l : legs) {
        // 0 -> 0 is a ride over the whole tour, never an empty one.
        if (l.ride() && l.from == l.to && l.from != 0) continue;
        if (l.ride() && !out.empty() && out.back().ride() && out.back().truck == l.truck && out.back().to == l.from &&
            l.from != 0) {
            out.back().to = l.to;
            continue;
        }
        out.push_back(l);
    }
    legs = std::move(out);
}

std::optional<Solution> materialize(const RoutePlan& plan, int n_p) {
    Solution s;
    const std::size_t nt = plan.trucks.size();
    std::vector<std::vector<int>> pos(nt);
    s.trucks.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        auto& tour = s.trucks[t];
        tour.nodes.clear();
        tour.nodes.push_back(0);
        for (int v : plan.trucks[t]) {
            if (v < 1 || v > n_p) return std::nullopt;
            tour.nodes.push_back(v);
        }
        if (tour.nodes.size() > 1) tour.nodes.push_back(0);
        tour.carry.assign(tour.nodes.size() - 1, {});
        pos[t].assign(static_cast<std::size_t>(n_p) + 1, -1);
        for (std::size_t i = 1; i + 1 < tour.nodes.size(); ++i) pos[t][static_cast<std::size_t>(tour.nodes[i])] = static_cast<int>(i);
    }
    s.drones.resize(plan.drones.size());
    for (std::size_t d = 0; d < plan.drones.size(); ++d) {
        auto& tour = s.drones[d];
        for (const auto& l : plan.drones[d]) {
            if (tour.nodes.back() != l.from) return std::nullopt;
            if (l.from == 0 && tour.nodes.size() > 1) return std::nullopt;
            if (l.ride()) {
                const std::size_t t = static_cast<std::size_t>(l.truck - 1);
                if (t >= nt) return std::nullopt;
                const auto& tn = s.trucks[t].nodes;
                if (tn.size() == 1) return std::nullopt;
                const int a = l.from == 0 ? 0 : pos[t][static_cast<std::size_t>(l.from)];
                const int b = l.to == 0 ? static_cast<int>(tn.size()) - 1 : pos[t][static_cast<std::size_t>(l.to)];
                if (a < 0 || b < 0 || b <= a) return std::nullopt;
                for (int k = a; k < b; ++k) {
                    tour.nodes.push_back(tn[static_cast<std::size_t>(k) + 1]);
                    tour.carried.push_back(l.truck);
                    s.trucks[t].carry[static_cast<std::size_t>(k)].push_back(static_cast<int>(d + 1));
                }
            } else {
                if (l.via >= 0) {
                    tour.nodes.push_back(l.via);
                    tour.carried.push_back(0);
                }
                tour.nodes.push_back(l.to);
                tour.carried.push_back(0);
            }
        }
        if (tour.nodes.size() > 1 && tour.nodes.back() != 0) return std::nullopt;
    }
    return s;
}

std::optional<double> evaluate(const Solution& s, const Instance& inst) {
    if (!check_almost_feasible(s, inst).feasible()) return std::nullopt;
    try {
        return objective(s, inst);
    } catch (const ScheduleStall&) {
        return std::nullopt;
    }
}

std::optional<double> evaluate(const RoutePlan& plan, const Instance& inst) {
    const auto s = materialize(plan, inst.n_p);
    if (!s) return std::nullopt;
    return evaluate(*s, inst);
}

TruckIndex::TruckIndex(const RoutePlan& plan, int n_p) : plan_(plan) {
    truck_of_.assign(static_cast<std::size_t>(n_p) + 1, 0);
    pos_.assign(static_cast<std::size_t>(n_p) + 1, -1);
    for (std::size_t t = 0; t < plan.trucks.size(); ++t)
        for (std::size_t i = 0; i < plan.trucks[t].size(); ++i) {
            const auto v = static_cast<std::size_t>(plan.trucks[t][i]);
            truck_of_[v] = static_cast<int>(t + 1);
            pos_[v] = static_cast<int>(i + 1);
        }
}

int TruckIndex::position(int t, int node, bool end) const {
    if (node == 0) return end ? end_position(t) : 0;
    return truck_of_[static_cast<std::size_t>(node)] == t ? pos_[static_cast<std::size_t>(node)] : -1;
}

int TruckIndex::end_position(int t) const { return static_cast<int>(plan_.trucks[static_cast<std::size_t>(t - 1)].size()) + 1; }

int TruckIndex::node_at(int t, int k) const {
    const auto& pk = plan_.trucks[static_cast<std::size_t>(t - 1)];
    return k <= 0 || k > static_cast<int>(pk.size()) ? 0 : pk[static_cast<std::size_t>(k - 1)];
}

}  // namespace vrd
