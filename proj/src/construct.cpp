#include "vrd/construct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vrd/geometry.hpp"
#include "vrd/route_plan.hpp"
#include "vrd/schedule.hpp"
#include "vrd/search.hpp"

namespace vrd {

namespace {

std::uint64_t move_signature(int type, std::size_t i, std::size_t j) {
    return splitmix64(splitmix64(static_cast<std::uint64_t>(type)) ^ splitmix64(i * 1000003ULL + j));
}

// Reverse [i, j] (type 1) or move the node at i to index j (type 2).
std::vector<int> apply_tsp_move(std::vector<int> order, int type, std::size_t i, std::size_t j) {
    if (type == 1) {
        std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i), order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    } else {
        const int v = order[i];
        order.erase(order.begin() + static_cast<std::ptrdiff_t>(i));
        order.insert(order.begin() + static_cast<std::ptrdiff_t>(j), v);
    }
    return order;
}

Candidate<std::vector<int>> tsp_candidate(const std::vector<int>& order, const Instance& inst, int type, std::size_t i,
                                          std::size_t j) {
    auto next = apply_tsp_move(order, type, i, j);
    const double f = latency_cost(next, inst);
    // a reversal undoes itself; relocating back from j to i undoes a relocation
    return {std::move(next), f, move_signature(type, i, j), type == 1 ? move_signature(1, i, j) : move_signature(2, j, i)};
}

}  // namespace

SectorAssignment sector_assignment(const Instance& inst, double start_angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<std::pair<double, int>> keyed;
    for (int v = 1; v <= inst.n_p; ++v) {
        const Point p = inst.pos(v);
        double a = std::fmod(std::atan2(static_cast<double>(p.y), static_cast<double>(p.x)) - start_angle, two_pi);
        if (a < 0) a += two_pi;
        keyed.push_back({a, v});
    }
    std::sort(keyed.begin(), keyed.end());
    SectorAssignment out;
    out.start_angle = start_angle;
    out.groups.resize(static_cast<std::size_t>(inst.n_t));
    const std::size_t n = keyed.size(), k = out.groups.size();
    std::size_t at = 0;
    for (std::size_t g = 0; g < k; ++g) {
        const std::size_t size = n / k + (g < n % k ? 1 : 0);
        for (std::size_t i = 0; i < size; ++i) out.groups[g].push_back(keyed[at++].second);
    }
    return out;
}

double latency_cost(const std::vector<int>& order, const Instance& inst) {
    double t = 0.0, sum = 0.0;
    Point at{};
    for (int v : order) {
        const Point p = inst.pos(v);
        t += manhattan(at, p);
        sum += t;
        at = p;
    }
    return sum;
}

std::vector<int> tsp_latency_search(const std::vector<int>& packages, const Instance& inst, const SearchConfig& cfg,
                                    Rng& rng) {
    if (packages.size() < 2) return packages;
    const std::size_t n = packages.size();
    Neighborhood<std::vector<int>> nb;
    nb.sample = [&](const std::vector<int>& s, double, Rng& r) -> std::optional<Candidate<std::vector<int>>> {
        const std::size_t i = uniform_index(r, n);
        std::size_t j = uniform_index(r, n - 1);
        if (j >= i) ++j;
        if (std::bernoulli_distribution(0.5)(r)) return tsp_candidate(s, inst, 1, std::min(i, j), std::max(i, j));
        return tsp_candidate(s, inst, 2, i, j);
    };
    nb.enumerate = [&](const std::vector<int>& s, double, Rng&) {
        std::vector<Candidate<std::vector<int>>> out;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) out.push_back(tsp_candidate(s, inst, 1, i, j));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) out.push_back(tsp_candidate(s, inst, 2, i, j));
        return out;
    };
    auto best = run_search(cfg, Candidate<std::vector<int>>{packages, latency_cost(packages, inst), 0, 0}, nb, rng);
    return best.state;
}

Solution solve_mtsp(const Instance& inst, int n_angles, const SearchConfig& tsp, Rng& rng) {
    if (n_angles < 1) throw std::invalid_argument("n_angles must be positive");
    std::optional<Solution> best;
    double best_f = 0.0;
    for (int k = 0; k < n_angles; ++k) {
        const auto sectors = sector_assignment(inst, 2.0 * std::numbers::pi * k / n_angles);
        std::vector<std::vector<int>> orders;
        for (const auto& g : sectors.groups) orders.push_back(tsp_latency_search(g, inst, tsp, rng));
        auto s = make_truck_solution(inst, orders);
        const double f = objective(s, inst);
        if (!best || f < best_f) {
            best = std::move(s);
            best_f = f;
        }
    }
    return *best;
}

Solution distribute_drones(const Solution& trucks_only, const Instance& inst) {
    RoutePlan plan = plan_from_solution(trucks_only);
    plan.drones.assign(static_cast<std::size_t>(inst.n_d), {});
    for (int d = 1; d <= inst.n_d; ++d) {
        const int t = 1 + (d - 1) % inst.n_t;
        if (!plan.trucks[static_cast<std::size_t>(t - 1)].empty())
            plan.drones[static_cast<std::size_t>(d - 1)].push_back(ride_leg(t, 0, 0));
    }
    return *materialize(plan, inst.n_p);
}

Solution build_initial_solution(const Instance& inst, const Solution& mtsp, const SearchConfig& speedup, Rng& rng) {
    RoutePlan plan = plan_from_solution(distribute_drones(mtsp, inst));
    for (int d = 1; d <= inst.n_d; ++d) {
        const auto areas = find_speedup_areas(plan, inst, d);
        if (areas.empty()) continue;
        plan = run_speedup(plan, inst, areas.front(), speedup, rng);
    }
    return *materialize(plan, inst.n_p);
}

Solution greedy_drones(const Instance& inst, const Solution& mtsp) {
    RoutePlan plan = plan_from_solution(mtsp);
    plan.drones.assign(static_cast<std::size_t>(inst.n_d), {});
    for (int t = 1; t <= inst.n_t; ++t) {
        std::vector<int> drones;
        for (int d = 1; d <= inst.n_d; ++d)
            if (1 + (d - 1) % inst.n_t == t) drones.push_back(d);
        const auto tour = plan.trucks[static_cast<std::size_t>(t - 1)];
        if (drones.empty() || tour.empty()) continue;
        const int m = static_cast<int>(tour.size());
        const int k = static_cast<int>(drones.size());
        auto node = [&](int i) { return i <= 0 || i > m ? 0 : tour[static_cast<std::size_t>(i - 1)]; };
        std::vector<int> kept;
        struct Dispatch {
            int i, r;
        };
        std::vector<Dispatch> dispatches;
        int i = 0;
        while (i <= m) {
            const int r = i + k + 1;
            bool ok = r <= m + 1;
            for (int j = 1; ok && j <= k; ++j) {
                const Point a = inst.pos(node(i)), x = inst.pos(node(i + j)), c = inst.pos(node(r));
                ok = euclidean(a, x) + euclidean(x, c) <= inst.drone_range;
            }
            if (!ok) {
                if (i > 0) kept.push_back(node(i));
                ++i;
                continue;
            }
            if (i > 0) kept.push_back(node(i));
            dispatches.push_back({i, r});
            if (r == m + 1) break;
            kept.push_back(node(r));  // rendezvous, then one charging edge together
            i = r + 1;
        }
        plan.trucks[static_cast<std::size_t>(t - 1)] = kept;
        for (int j = 1; j <= k; ++j) {
            auto& legs = plan.drones[static_cast<std::size_t>(drones[static_cast<std::size_t>(j - 1)] - 1)];
            int cur = 0;
            bool started = false;  // cur == 0 means the start depot until the first dispatch
            for (const auto& dp : dispatches) {
                const int a = node(dp.i);
                if (started ? cur != a : dp.i > 0) legs.push_back(ride_leg(t, cur, a));
                const int c = dp.r == m + 1 ? 0 : node(dp.r);
                legs.push_back(flight_leg(a, node(dp.i + j), c));
                cur = c;
                started = true;
            }
            const bool home = !dispatches.empty() && dispatches.back().r == m + 1;
            if (!home) legs.push_back(ride_leg(t, cur, 0));
            normalize_legs(legs);
        }
    }
    return *materialize(plan, inst.n_p);
}

}  // namespace vrd
