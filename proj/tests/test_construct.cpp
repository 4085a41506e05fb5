#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <set>

#include "support/fixtures.hpp"
#include "support/plans.hpp"
#include "vrd/construct.hpp"
#include "vrd/feasibility.hpp"
#include "vrd/pipeline.hpp"
#include "vrd/schedule.hpp"

using namespace vrd;

namespace {

double brute_force(std::vector<int> order, const Instance& inst) {
    std::sort(order.begin(), order.end());
    double best = 1e300;
    do best = std::min(best, latency_cost(order, inst));
    while (std::next_permutation(order.begin(), order.end()));
    return best;
}

RoutePlan plan_of(const Solution& s) { return plan_from_solution(s); }

}  // namespace

TEST_CASE("sector sweep") {
    const auto inst = testing::make_instance(2, 0, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    const auto s = sector_assignment(inst, 0.0);
    CHECK(s.groups == std::vector<std::vector<int>>{{1, 2}, {3, 4}});
    const auto r = sector_assignment(inst, std::numbers::pi / 2 + 1e-9);
    CHECK(r.groups == std::vector<std::vector<int>>{{3, 4}, {1, 2}});

    Rng rng(1);
    const auto big = testing::random_instance(rng, 23, 3, 0);
    for (int k = 0; k < 10; ++k) {
        const auto g = sector_assignment(big, 2 * std::numbers::pi * k / 10).groups;
        std::set<int> seen;
        std::size_t lo = 1000, hi = 0;
        for (const auto& x : g) {
            seen.insert(x.begin(), x.end());
            lo = std::min(lo, x.size());
            hi = std::max(hi, x.size());
        }
        CHECK(seen.size() == 23);
        CHECK(hi - lo <= 1);
    }
}

TEST_CASE("latency TSP") {
    const auto inst = testing::make_instance(1, 0, {{3, 0}, {1, 0}, {2, 0}});
    const auto cfg = scaled(default_phase_configs(), 0.01).tsp;
    Rng rng(1);
    const auto order = tsp_latency_search({1, 2, 3}, inst, cfg, rng);
    CHECK(order == std::vector<int>{2, 3, 1});
    CHECK(latency_cost(order, inst) == 6.0);
    CHECK(tsp_latency_search({2}, inst, cfg, rng) == std::vector<int>{2});
}

TEST_CASE("latency TSP against exhaustive permutations") {
    const auto cfg = scaled(default_phase_configs(), 0.01).tsp;
    int optimal = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        const auto inst = testing::random_instance(rng, 7, 1, 0, 200);
        const std::vector<int> start{1, 2, 3, 4, 5, 6, 7};
        const double got = latency_cost(tsp_latency_search(start, inst, cfg, rng), inst);
        const double opt = brute_force(start, inst);
        CHECK(got <= opt * 1.1);
        optimal += got <= opt + 1e-9;
    }
    CHECK(optimal >= 18);
}

TEST_CASE("mTSP keeps drones idle and more angles never hurt") {
    Rng rng(2);
    const auto inst = testing::random_instance(rng, 30, 2, 2, 200);
    const auto cfg = scaled(default_phase_configs(), 0.001).tsp;
    Rng r1(7), r2(7);
    const auto one = solve_mtsp(inst, 1, cfg, r1);
    const auto ten = solve_mtsp(inst, 10, cfg, r2);
    CHECK(check_feasible(ten, inst).feasible());
    for (const auto& d : ten.drones) CHECK(d.idle());
    CHECK(objective(ten, inst) <= objective(one, inst));
}

TEST_CASE("drone distribution is round robin") {
    const auto inst = testing::make_instance(2, 5, {{1, 0}, {2, 0}, {-1, 0}, {-2, 0}});
    const auto s = distribute_drones(make_truck_solution(inst, {{1, 2}, {3, 4}}), inst);
    CHECK(check_feasible(s, inst).feasible());
    int on1 = 0, on2 = 0;
    for (const auto& d : s.drones) {
        REQUIRE(!d.idle());
        (d.carried[0] == 1 ? on1 : on2)++;
    }
    CHECK(on1 == 3);
    CHECK(on2 == 2);
    CHECK(objective(s, inst) == objective(make_truck_solution(inst, {{1, 2}, {3, 4}}), inst));
}

TEST_CASE("greedy: one drone") {
    const auto inst = testing::make_instance(1, 1, {{10, 0}, {20, 0}, {30, 0}});
    const auto g = greedy_drones(inst, make_truck_solution(inst, {{1, 2, 3}}));
    CHECK(check_feasible(g, inst).feasible());
    const auto p = plan_of(g);
    CHECK(p.trucks[0] == std::vector<int>{2, 3});
    CHECK(p.drones[0] == std::vector<Leg>{flight_leg(0, 1, 2), ride_leg(1, 2, 0)});
}

TEST_CASE("greedy: two drones, five packages") {
    const auto inst = testing::make_instance(1, 2, {{10, 0}, {20, 0}, {30, 0}, {40, 0}, {50, 0}});
    const auto g = greedy_drones(inst, make_truck_solution(inst, {{1, 2, 3, 4, 5}}));
    CHECK(check_feasible(g, inst).feasible());
    const auto p = plan_of(g);
    CHECK(p.trucks[0] == std::vector<int>{3, 4, 5});
    CHECK(p.drones[0] == std::vector<Leg>{flight_leg(0, 1, 3), ride_leg(1, 3, 0)});
    CHECK(p.drones[1] == std::vector<Leg>{flight_leg(0, 2, 3), ride_leg(1, 3, 0)});
}

TEST_CASE("greedy respects the range and is the identity without drones") {
    const auto inst = testing::make_instance(1, 1, {{10, 0}, {20, 0}, {30, 0}}, 5.0);
    const auto base = make_truck_solution(inst, {{1, 2, 3}});
    const auto g = greedy_drones(inst, base);
    CHECK(plan_of(g).trucks[0] == std::vector<int>{1, 2, 3});
    CHECK(objective(g, inst) == objective(base, inst));
    const auto none = testing::make_instance(1, 0, {{10, 0}, {20, 0}});
    const auto b0 = make_truck_solution(none, {{1, 2}});
    CHECK(greedy_drones(none, b0) == b0);
}

TEST_CASE("constructors on random instances") {
    const auto cfg = scaled(default_phase_configs(), 0.01);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        Rng rng(seed);
        const auto inst = testing::random_instance(rng, 25, 1 + static_cast<int>(seed % 3), static_cast<int>(seed % 4), 200, 10000);
        Rng r(seed);
        const auto mtsp = solve_mtsp(inst, 3, cfg.tsp, r);
        const auto g = greedy_drones(inst, mtsp);
        const auto init = build_initial_solution(inst, mtsp, cfg.speedup1, r);
        CHECK(check_feasible(g, inst).feasible());
        CHECK(check_feasible(init, inst).feasible());
        CHECK(objective(init, inst) <= objective(mtsp, inst));
        if (inst.n_d == 0) CHECK(init == mtsp);
    }
}

TEST_CASE("solve orders the stages and is deterministic") {
    const auto cfg = scaled(default_phase_configs(), 0.01);
    Rng rng(9);
    const auto inst = testing::random_instance(rng, 20, 2, 2, 200, 10000);
    const auto a = solve(inst, cfg, 42);
    const auto b = solve(inst, cfg, 42);
    CHECK(a.final.objective <= a.initial.objective);
    CHECK(a.initial.objective <= a.pre_initial.objective);
    CHECK(a.final.objective == b.final.objective);
    CHECK(a.final.solution == b.final.solution);
    CHECK(check_feasible(a.final.solution, inst).feasible());
}
