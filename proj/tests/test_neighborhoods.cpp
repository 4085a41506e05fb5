#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/plans.hpp"
#include "vrd/feasibility.hpp"
#include "vrd/neighborhoods.hpp"
#include "vrd/schedule.hpp"

using namespace vrd;
using testing::area_containing;
using testing::inverse_move;
using testing::moved_package;

namespace {

bool feasible(const RoutePlan& plan, const Instance& inst) {
    const auto s = materialize(plan, inst.n_p);
    return s && check_feasible(*s, inst).feasible();
}

}  // namespace

TEST_CASE("plan round trip on woven solutions") {
    std::mt19937_64 rng(11);
    int done = 0;
    for (int i = 0; i < 3000 && done < 500; ++i) {
        const auto inst = testing::small_instance(rng, 5, 2, 2);
        const auto s = testing::weave_random(inst, rng);
        if (!s) continue;
        RoutePlan plan;
        try {
            plan = plan_from_solution(*s);
        } catch (const std::invalid_argument&) {
            continue;
        }
        const auto back = materialize(plan, inst.n_p);
        REQUIRE(back);
        CHECK(*back == *s);
        ++done;
    }
    CHECK(done >= 100);
}

TEST_CASE("areas of ridden and sortie plans") {
    const auto inst = testing::make_instance(2, 2, {{10, 0}, {20, 0}, {-10, 0}, {-20, 0}});
    RoutePlan plan{{{1, 2}, {3, 4}}, {{ride_leg(1, 0, 0)}, {ride_leg(2, 0, 3), flight_leg(3, -1, 1), ride_leg(1, 1, 0)}}};
    REQUIRE(feasible(plan, inst));
    const auto areas = find_speedup_areas(plan, inst);
    REQUIRE(areas.size() == 3);
    CHECK(areas[0] == SpeedUpArea{1, 1, 0, 0});
    CHECK(areas[1] == SpeedUpArea{2, 2, 0, 0});
    CHECK(areas[2] == SpeedUpArea{2, 1, 2, 2});
    CHECK(find_speedup_areas(plan, inst, 2).size() == 2);

    const auto si = testing::sortie_instance();
    const auto sp = plan_from_solution(testing::sortie_solution());
    const auto sa = find_speedup_areas(sp, si);
    REQUIRE(sa.size() == 1);
    CHECK(sa[0] == SpeedUpArea{1, 1, 0, static_cast<int>(sp.drones[0].size()) - 1});
}

TEST_CASE("applicable moves on a fully ridden drone") {
    const auto inst = testing::make_instance(1, 1, {{10, 0}, {20, 0}, {30, 0}, {40, 0}});
    const RoutePlan plan{{{1, 2, 3, 4}}, {{ride_leg(1, 0, 0)}}};
    const auto area = find_speedup_areas(plan, inst).at(0);
    CHECK(area_anchors(plan, inst, area).size() == 5);
    CHECK(applicable_moves(plan, inst, area, 0, 0) == std::vector<int>{1, 9});
    CHECK(applicable_moves(plan, inst, area, 0, 3) == std::vector<int>{1, 9});
    CHECK(applicable_moves(plan, inst, area, 0, 4) == std::vector<int>{9});
}

TEST_CASE("one-edge area has no move") {
    const auto inst = testing::make_instance(2, 1, {{10, 0}, {20, 0}, {-10, 0}, {-20, 0}});
    const RoutePlan plan{{{1, 2}, {3, 4}}, {{ride_leg(2, 0, 3), flight_leg(3, -1, 2), ride_leg(1, 2, 0)}}};
    REQUIRE(feasible(plan, inst));
    const auto areas = find_speedup_areas(plan, inst);
    REQUIRE(areas.size() == 2);
    CHECK(areas[1] == SpeedUpArea{1, 1, 2, 2});
    CHECK(area_anchors(plan, inst, areas[1]).size() == 1);
    Rng rng(1);
    CHECK(sample_small_neighbor(plan, inst, areas[1], rng).status == SampleStatus::Exhausted);
}

TEST_CASE("T1 on a collinear tour keeps the objective") {
    const auto inst = testing::make_instance(1, 1, {{10, 0}, {20, 0}, {30, 0}});
    const RoutePlan plan{{{1, 2, 3}}, {{ride_leg(1, 0, 0)}}};
    const auto area = find_speedup_areas(plan, inst).at(0);
    Rng rng(1);
    const auto r = apply_small_move(plan, inst, area, SmallMove{1, 0, 0}, rng);
    REQUIRE(r.plan);
    CHECK(r.plan->trucks[0] == std::vector<int>{2, 3});
    CHECK(r.plan->drones[0] == std::vector<Leg>{flight_leg(0, 1, 2), ride_leg(1, 2, 0)});
    const auto f0 = evaluate(plan, inst), f1 = evaluate(*r.plan, inst);
    REQUIRE(f0);
    REQUIRE(f1);
    CHECK(*f0 == doctest::Approx(20.0));
    CHECK(*f1 == doctest::Approx(20.0));
}

TEST_CASE("range limits reject flights") {
    const auto inst = testing::make_instance(1, 1, {{10, 0}, {20, 0}, {30, 0}}, 19.0);
    const RoutePlan plan{{{1, 2, 3}}, {{ride_leg(1, 0, 0)}}};
    const auto area = find_speedup_areas(plan, inst).at(0);
    Rng rng(1);
    CHECK(apply_small_move(plan, inst, area, SmallMove{1, 0, 0}, rng).reason == Rejection::DroneRange);

    // landing one node earlier lengthens this sortie beyond the range
    const auto far = testing::make_instance(1, 1, {{10, 0}, {20, 0}, {30, 0}, {35, 10}}, 40.0);
    const RoutePlan sp{{{1, 2, 3}}, {{ride_leg(1, 0, 1), flight_leg(1, 4, 3), ride_leg(1, 3, 0)}}};
    REQUIRE(feasible(sp, far));
    const auto a = find_speedup_areas(sp, far).at(0);
    CHECK(apply_small_move(sp, far, a, SmallMove{3, 1, 0}, rng).reason == Rejection::DroneRange);
}

TEST_CASE("sampled small moves stay feasible and inverse pairs restore the objective") {
    std::map<int, int> by_type;
    std::map<int, int> inverses;
    int moves = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        Rng rng(seed);
        const int n_t = 1 + static_cast<int>(seed % 2), n_d = 1 + static_cast<int>(seed / 2 % 2);
        const auto inst = testing::random_instance(rng, 10, n_t, n_d, 100, seed % 3 == 0 ? 60.0 : 1e9);
        RoutePlan plan = testing::ridden_plan(inst, rng);
        auto f = evaluate(plan, inst);
        REQUIRE(f);
        for (int step = 0; step < 400; ++step) {
            const auto areas = find_speedup_areas(plan, inst);
            if (areas.empty()) break;
            const auto area = areas[uniform_index(rng, areas.size())];
            const auto out = sample_small_neighbor(plan, inst, area, rng);
            if (out.status != SampleStatus::Ok) continue;
            const auto& sm = *out.move;
            ++moves;
            ++by_type[sm.move.type];
            REQUIRE(feasible(sm.plan, inst));
            CHECK(evaluate(sm.plan, inst).value() == sm.objective);

            const int x = moved_package(plan, inst, area, sm.move);
            const auto& before = plan.drones[static_cast<std::size_t>(area.drone - 1)][static_cast<std::size_t>(sm.move.leg)];
            SpeedUpArea ia;
            SmallMove inv;
            if (sm.move.type == 1 || sm.move.type == 3 || sm.move.type == 5 || sm.move.type == 8) {
                REQUIRE(inverse_move(sm.plan, inst, area.drone, sm.move.type, x, before.from, before.to, ia, inv));
                Rng r2(seed * 1000 + static_cast<std::uint64_t>(step));
                const auto back = apply_small_move(sm.plan, inst, ia, inv, r2);
                INFO("type " << sm.move.type << " reason " << rejection_name(back.reason));
                REQUIRE(back.plan);
                CHECK(*back.plan == plan);
                const auto fb = evaluate(*back.plan, inst);
                REQUIRE(fb);
                CHECK(std::abs(*fb - *f) <= 1e-9);
                CHECK(back.signature == sm.inverse);
                ++inverses[sm.move.type];
            }
            plan = sm.plan;
            f = sm.objective;
        }
    }
    CHECK(moves > 2000);
    for (int type : {1, 2, 3, 4, 5, 6, 7, 8, 9}) {
        INFO("type " << type);
        CHECK(by_type[type] > 0);
    }
    for (int type : {1, 3, 5, 8}) {
        INFO("inverse of type " << type);
        CHECK(inverses[type] > 0);
    }
}

TEST_CASE("outer moves stay feasible") {
    int drone_moves = 0, package_moves = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        const auto inst = testing::random_instance(rng, 10, 2, 1 + static_cast<int>(seed % 2));
        RoutePlan plan = testing::ridden_plan(inst, rng);
        // one small move, enough to exercise the hook
        SpeedUpRunner descent = [&inst](const RoutePlan& p, const SpeedUpArea& area, Rng& r) {
            const auto out = sample_small_neighbor(p, inst, area, r);
            return out.status == SampleStatus::Ok ? out.move->plan : p;
        };
        for (int step = 0; step < 150; ++step) {
            // mix in small moves so outer moves see sorties
            for (int d = 1; d <= inst.n_d; ++d) {
                const auto areas = find_speedup_areas(plan, inst, d);
                if (areas.empty()) continue;
                const auto out = sample_small_neighbor(plan, inst, areas[uniform_index(rng, areas.size())], rng);
                if (out.status == SampleStatus::Ok) plan = out.move->plan;
            }
            OuterMove chosen;
            const auto r = sample_outer_neighbor(plan, inst, descent, rng, 32, &chosen);
            if (!r.plan) continue;
            REQUIRE(feasible(*r.plan, inst));
            CHECK(evaluate(*r.plan, inst).value() == *r.objective);
            (std::holds_alternative<DroneChange>(chosen) ? drone_moves : package_moves)++;
            plan = *r.plan;
        }
    }
    CHECK(drone_moves > 100);
    CHECK(package_moves > 100);
}

TEST_CASE("without drones only package changes are drawn") {
    Rng rng(5);
    const auto inst = testing::random_instance(rng, 8, 2, 0);
    RoutePlan plan = testing::ridden_plan(inst, rng);
    for (int i = 0; i < 50; ++i) {
        OuterMove chosen;
        const auto r = sample_outer_neighbor(plan, inst, {}, rng, 32, &chosen);
        CHECK(std::holds_alternative<PackageChange>(chosen));
        REQUIRE(r.plan);
        CHECK(feasible(*r.plan, inst));
        plan = *r.plan;
    }
}

TEST_CASE("package change within one truck keeps every package") {
    const auto inst = testing::make_instance(1, 0, {{10, 0}, {20, 0}, {30, 0}});
    const RoutePlan plan{{{1, 2, 3}}, {}};
    const auto r = outer_package_change(plan, inst, PackageChange{2, 1});
    REQUIRE(r.plan);
    CHECK(r.plan->trucks[0] == std::vector<int>{1, 2, 3});
    CHECK(*r.objective == doctest::Approx(20.0));
}

TEST_CASE("drone change re-homes the drone onto another truck") {
    const auto inst = testing::make_instance(2, 1, {{10, 0}, {20, 0}, {-10, 0}, {-20, 0}});
    const RoutePlan plan{{{1, 2}, {3, 4}}, {{ride_leg(1, 0, 0)}}};
    Rng rng(3);
    // leave truck 1 at the depot and ride truck 2 instead
    auto r = outer_drone_change(plan, inst, DroneChange{1, 2, 0, 0}, {}, rng);
    REQUIRE(r.plan);
    CHECK(r.plan->drones[0] == std::vector<Leg>{ride_leg(2, 0, 0)});
    // leave after node 1, hop to node 3
    r = outer_drone_change(plan, inst, DroneChange{1, 2, 1, 1}, {}, rng);
    REQUIRE(r.plan);
    CHECK(r.plan->drones[0] == std::vector<Leg>{ride_leg(1, 0, 1), flight_leg(1, -1, 3), ride_leg(2, 3, 0)});
    CHECK(feasible(*r.plan, inst));
    // arriving at the end depot after leaving the start: fly home
    r = outer_drone_change(plan, inst, DroneChange{1, 2, 1, 3}, {}, rng);
    REQUIRE(r.plan);
    CHECK(r.plan->drones[0] == std::vector<Leg>{ride_leg(1, 0, 1), flight_leg(1, -1, 0)});
    // nothing kept and arriving at the end depot: idle
    r = outer_drone_change(plan, inst, DroneChange{1, 2, 0, 3}, {}, rng);
    REQUIRE(r.plan);
    CHECK(r.plan->drones[0].empty());
}
