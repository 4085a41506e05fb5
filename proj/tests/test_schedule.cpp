#include <doctest.h>

#include <cmath>
#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "vrd/feasibility.hpp"
#include "vrd/schedule.hpp"

using namespace vrd;

TEST_CASE("edge lengths") {
    CHECK(edge_length(Traversal::Street, {0, 0}, {3, 4}) == 7.0);
    CHECK(edge_length(Traversal::Flying, {0, 0}, {3, 4}) == 5.0);
}

TEST_CASE("truck-only objective") {
    const auto inst = testing::make_instance(1, 0, {{3, 4}, {3, 10}});
    const auto s = make_truck_solution(inst, {{1, 2}});
    CHECK(objective(s, inst) == doctest::Approx(10.0).epsilon(1e-12));
    const auto sched = compute_schedule(s, inst);
    CHECK(sched.deliveries[1].time == 7.0);
    CHECK(sched.deliveries[2].time == 13.0);
    CHECK(sched.deliveries[1].vehicle == truck_id(1));
    CHECK(sched.trucks[0].arrival.back() == 26.0);
}

TEST_CASE("sortie: drone delivers while the truck drives on") {
    const auto inst = testing::sortie_instance();
    const auto s = testing::sortie_solution();
    const auto sched = compute_schedule(s, inst);
    CHECK(sched.deliveries[1].time == 10.0);
    CHECK(sched.deliveries[2].time == 20.0);
    CHECK(sched.deliveries[3].time == doctest::Approx(15.0));
    CHECK(sched.deliveries[3].vehicle == drone_id(1));
    CHECK(sched.deliveries[1].vehicle == truck_id(1));  // truck wins the tie at node 1
    // The drone lands after the truck and the truck waits before the last leg.
    CHECK(sched.drones[0].arrival[3] == doctest::Approx(15.0 + std::sqrt(45.0)));
    CHECK(sched.trucks[0].departure[2] == doctest::Approx(15.0 + std::sqrt(45.0)));
    CHECK(objective(s, inst) == doctest::Approx(15.0));
}

TEST_CASE("a drone delivers at most once per flight") {
    // Flight 1 -> 2 -> 3 with 2 and 3 both drone-reachable; the truck visits 1 and 3.
    const auto inst = testing::make_instance(1, 1, {{10, 0}, {11, 0}, {12, 0}});
    Solution s;
    s.trucks = {TruckTour{{0, 1, 3, 0}, {{1}, {}, {1}}}};
    s.drones = {DroneTour{{0, 1, 2, 3, 0}, {1, 0, 0, 1}}};
    REQUIRE(check_feasible(s, inst).feasible());
    const auto sched = compute_schedule(s, inst);
    CHECK(sched.deliveries[2].vehicle == drone_id(1));
    CHECK(sched.deliveries[3].vehicle == truck_id(1));  // drone reaches 3 first but already delivered
    CHECK(sched.deliveries[3].time == 12.0);
    CHECK(sched.deliveries[2].time == 11.0);
}

TEST_CASE("drone swap timetable") {
    const auto inst = testing::swap_instance();
    const auto s = testing::swap_solution();
    const auto sim = testing::simulate_objective(s, inst);
    REQUIRE(sim.has_value());
    CHECK(objective(s, inst) == doctest::Approx(*sim).epsilon(1e-12));
}

TEST_CASE("worklist evaluator matches the event simulator on random solutions") {
    std::mt19937_64 rng(31337);
    int checked = 0;
    while (checked < 2000) {
        const int n_p = 2 + static_cast<int>(rng() % 5);
        const auto inst = testing::small_instance(rng, n_p, 1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 2));
        auto s = testing::weave_random(inst, rng);
        if (!s || !check_schedule_consistency_marking(*s, inst.n_p)) continue;
        ++checked;
        const auto sim = testing::simulate_objective(*s, inst);
        REQUIRE(sim.has_value());
        CHECK(std::abs(objective(*s, inst) - *sim) <= 1e-9);
    }
}

TEST_CASE("worklist evaluator matches the event simulator on every solution of a tiny instance") {
    std::mt19937_64 rng(5);
    const auto inst = testing::small_instance(rng, 3, 2, 1);
    std::size_t count = 0, mismatches = 0;
    testing::enumerate_solutions(inst, [&](const Solution& s) {
        if (!check_feasible(s, inst).feasible()) return;
        ++count;
        const auto sim = testing::simulate_objective(s, inst);
        if (!sim || std::abs(objective(s, inst) - *sim) > 1e-9) ++mismatches;
    });
    CHECK(count > 100);
    CHECK(mismatches == 0);
}
