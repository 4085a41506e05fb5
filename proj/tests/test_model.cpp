#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "vrd/model.hpp"

using namespace vrd;

TEST_CASE("parse_instance reads a 200-package document") {
    std::string pos;
    for (int i = 1; i <= 200; ++i) pos += (i > 1 ? "," : "") + std::string("[") + std::to_string(i) + ",-3]";
    const auto inst = parse_instance(R"({"n_t":1,"n_d":2,"n_p":200,"drone_range":10000,"positions":[)" + pos + "]}");
    CHECK(inst.n_t == 1);
    CHECK(inst.n_d == 2);
    CHECK(inst.n_p == 200);
    CHECK(inst.drone_range == 10000.0);
    CHECK(inst.pos(200) == Point{200, -3});
    CHECK(inst.pos(0) == Point{0, 0});
}

TEST_CASE("parse_instance minimal and failing documents") {
    const auto inst = parse_instance(R"({"n_t":1,"n_d":0,"n_p":1,"drone_range":5,"positions":[[3,4]]})");
    CHECK(inst.positions.size() == 1);

    CHECK_THROWS_WITH_AS(parse_instance(R"({"n_t":1,"n_d":0,"n_p":1,"drone_range":5,"positions":[[0,0]]})"),
                         "package at depot", ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n_t":1,"n_d":0,"n_p":2,"drone_range":5,"positions":[[1,0]]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n_t":1,"n_d":0,"n_p":1,"drone_range":5,"positions":[[1,0]])"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n_t":0,"n_d":0,"n_p":1,"drone_range":5,"positions":[[1,0]]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n_t":1,"n_d":0,"n_p":1,"drone_range":5,"positions":[[1,0,2]]})"), ParseError);
}

TEST_CASE("duplicate package positions stay distinct nodes") {
    const auto inst = parse_instance(R"({"n_t":1,"n_d":0,"n_p":2,"drone_range":5,"positions":[[1,1],[1,1]]})");
    CHECK(inst.pos(1) == inst.pos(2));
}

TEST_CASE("solution documents round-trip") {
    const auto inst = testing::deadlock_instance();
    const auto s = testing::deadlock_solution();
    const auto text = serialize_solution(s);
    CHECK(parse_solution(text, inst) == s);
    CHECK(serialize_solution(parse_solution(text, inst)) == text);

    SUBCASE("idle drone") {
        Solution idle = s;
        idle.drones[1] = DroneTour{};
        const auto t2 = serialize_solution(idle);
        CHECK(t2.find(R"({"carried":[],"nodes":[0]})") != std::string::npos);
        CHECK(parse_solution(t2, inst) == idle);
    }
}

TEST_CASE("round-trip holds on random woven solutions") {
    std::mt19937_64 rng(7);
    int checked = 0;
    while (checked < 200) {
        const auto inst = testing::small_instance(rng, 6, 2, 2);
        auto s = testing::weave_random(inst, rng);
        if (!s) continue;
        CHECK(parse_solution(serialize_solution(*s), inst) == *s);
        ++checked;
    }
}

TEST_CASE("parse_solution rejects bad references") {
    const auto inst = testing::make_instance(2, 1, {{1, 0}, {2, 0}});
    CHECK_THROWS_AS(parse_solution(R"({"trucks":[{"nodes":[0,1,0],"carry":[[],[]]},{"nodes":[0,2,0],"carry":[[],[]]}],
        "drones":[{"nodes":[0,1,0],"carried":[5,5]}]})", inst), ParseError);
    CHECK_THROWS_AS(parse_solution(R"({"trucks":[{"nodes":[0,7,0],"carry":[[],[]]},{"nodes":[0,2,0],"carry":[[],[]]}],
        "drones":[{"nodes":[0],"carried":[]}]})", inst), ParseError);
    CHECK_THROWS_AS(parse_solution(R"({"trucks":[{"nodes":[0,1,0],"carry":[[3],[]]},{"nodes":[0,2,0],"carry":[[],[]]}],
        "drones":[{"nodes":[0],"carried":[]}]})", inst), ParseError);
    CHECK_THROWS_AS(parse_solution(R"({"trucks":[{"nodes":[0,1,0],"carry":[[]]},{"nodes":[0,2,0],"carry":[[],[]]}],
        "drones":[{"nodes":[0],"carried":[]}]})", inst), ParseError);
}

TEST_CASE("solution graph edge counts and tags") {
    SUBCASE("single truck") {
        const auto inst = testing::make_instance(1, 0, {{1, 0}});
        const auto s = make_truck_solution(inst, {{1}});
        const auto g = build_solution_graph(s, inst.n_p);
        REQUIRE(g.edges.size() == 2);
        for (const auto& e : g.edges) CHECK(e.vehicle == truck_id(1));
    }
    SUBCASE("fully ridden drone") {
        Solution s;
        s.trucks = {TruckTour{{0, 1, 2, 0}, {{1}, {1}, {1}}}};
        s.drones = {DroneTour{{0, 1, 2, 0}, {1, 1, 1}}};
        const auto g = build_solution_graph(s, 2);
        CHECK(g.edges.size() == 6);
        std::set<std::pair<int, int>> pairs;
        for (const auto& e : g.edges) pairs.insert({e.from, e.to});
        CHECK(pairs.size() == 3);
        const auto part = essentially_equal_partition(g);
        CHECK(part.classes.size() == 3);
        for (const auto& c : part.classes) CHECK(c.size() == 2);
    }
    SUBCASE("edge multiplicity equals tours traversing each pair") {
        std::mt19937_64 rng(11);
        for (int k = 0; k < 100; ++k) {
            const auto inst = testing::small_instance(rng, 6, 2, 2);
            auto s = testing::weave_random(inst, rng);
            if (!s) continue;
            const auto g = build_solution_graph(*s, inst.n_p);
            CHECK(g.edges.size() == s->total_edges());
            std::map<std::pair<int, int>, int> expect, got;
            for (const auto& t : s->trucks)
                for (std::size_t i = 0; i + 1 < t.nodes.size(); ++i) ++expect[{t.nodes[i], t.nodes[i + 1]}];
            for (const auto& d : s->drones)
                for (std::size_t i = 0; i + 1 < d.nodes.size(); ++i) ++expect[{d.nodes[i], d.nodes[i + 1]}];
            for (const auto& e : g.edges) ++got[{e.from, e.to}];
            CHECK(expect == got);
        }
    }
}

TEST_CASE("a 200-package solution graph has one edge per tour edge") {
    std::mt19937_64 rng(3);
    Instance inst = testing::small_instance(rng, 200, 2, 2, 100);
    std::vector<std::vector<int>> orders(2);
    for (int p = 1; p <= 200; ++p) orders[static_cast<std::size_t>(p % 2)].push_back(p);
    Solution s = make_truck_solution(inst, orders);
    // Each drone rides its truck the whole way.
    for (int d = 1; d <= 2; ++d) {
        auto& truck = s.truck(d);
        DroneTour dt;
        dt.nodes = truck.nodes;
        dt.carried.assign(truck.edge_count(), d);
        for (auto& c : truck.carry) c.push_back(d);
        s.drones[static_cast<std::size_t>(d - 1)] = dt;
    }
    const auto g = build_solution_graph(s, inst.n_p);
    std::size_t direct = 0;
    for (const auto& t : s.trucks) direct += t.nodes.size() - 1;
    for (const auto& d : s.drones) direct += d.nodes.size() - 1;
    CHECK(g.edges.size() == direct);
    CHECK(direct == 2 * (101 + 101));
}

TEST_CASE("essentially equal classes") {
    SUBCASE("truck edge carrying two drones is one class of three") {
        Solution s;
        s.trucks = {TruckTour{{0, 1, 0}, {{1, 2}, {1, 2}}}};
        s.drones = {DroneTour{{0, 1, 0}, {1, 1}}, DroneTour{{0, 1, 0}, {1, 1}}};
        const auto part = essentially_equal_partition(build_solution_graph(s, 1));
        CHECK(part.classes.size() == 2);
        CHECK(part.classes[0].size() == 3);
    }
    SUBCASE("flying edges are singletons") {
        const auto s = testing::sortie_solution();
        const auto g = build_solution_graph(s, 3);
        const auto part = essentially_equal_partition(g);
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            if (g.edges[e].flying()) CHECK(part.classes[static_cast<std::size_t>(part.class_of[e])].size() == 1);
    }
    SUBCASE("random consistent solutions: classes partition the edges") {
        std::mt19937_64 rng(5);
        for (int k = 0; k < 200; ++k) {
            const auto inst = testing::small_instance(rng, 6, 2, 2);
            auto s = testing::weave_random(inst, rng);
            if (!s) continue;
            const auto g = build_solution_graph(*s, inst.n_p);
            const auto part = essentially_equal_partition(g);
            std::size_t total = 0;
            for (const auto& c : part.classes) {
                total += c.size();
                if (c.size() > 1) {
                    int trucks = 0;
                    for (int e : c) trucks += g.edges[static_cast<std::size_t>(e)].vehicle.is_truck() ? 1 : 0;
                    CHECK(trucks == 1);
                }
            }
            CHECK(total == g.edges.size());
        }
    }
    SUBCASE("inconsistent carry is reported") {
        Solution s;
        s.trucks = {TruckTour{{0, 1, 0}, {{1}, {}}}};
        s.drones = {DroneTour{{0, 2, 0}, {0, 0}}};
        CHECK_THROWS_AS(essentially_equal_partition(build_solution_graph(s, 2)), CarryInconsistency);
    }
}
