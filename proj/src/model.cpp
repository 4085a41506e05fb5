#include "vrd/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <json.hpp>

namespace vrd {

using nlohmann::json;

void Instance::validate() const {
    if (n_t < 1) throw std::invalid_argument("n_t must be at least 1");
    if (n_d < 0) throw std::invalid_argument("n_d must be nonnegative");
    if (n_p < 1) throw std::invalid_argument("n_p must be at least 1");
    if (!(drone_range >= 0.0)) throw std::invalid_argument("drone_range must be nonnegative");
    if (positions.size() != static_cast<std::size_t>(n_p))
        throw std::invalid_argument("positions length differs from n_p");
    for (const auto& p : positions)
        if (p == Point{}) throw std::invalid_argument("package at depot");
}

std::string VehicleId::to_string() const {
    return (is_truck() ? "t" : "d") + std::to_string(index);
}

std::size_t Solution::total_edges() const {
    std::size_t n = 0;
    for (const auto& t : trucks) n += t.edge_count();
    for (const auto& d : drones) n += d.edge_count();
    return n;
}

Solution make_truck_solution(const Instance& inst, const std::vector<std::vector<int>>& truck_orders) {
    Solution s;
    s.trucks.resize(static_cast<std::size_t>(inst.n_t));
    s.drones.resize(static_cast<std::size_t>(inst.n_d));
    for (std::size_t t = 0; t < s.trucks.size() && t < truck_orders.size(); ++t) {
        auto& tour = s.trucks[t];
        tour.nodes.clear();
        tour.nodes.push_back(0);
        for (int p : truck_orders[t]) tour.nodes.push_back(p);
        if (!truck_orders[t].empty()) tour.nodes.push_back(0);
        tour.carry.assign(tour.nodes.size() - 1, {});
    }
    return s;
}

// ---------------------------------------------------------------------------

namespace {

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("field '") + key + "' has the wrong type");
    }
}

void check_tour_nodes(const std::vector<int>& nodes, int n_p, const std::string& who) {
    if (nodes.empty()) throw ParseError(who + ": empty node list");
    for (int v : nodes)
        if (v < 0 || v > n_p) throw ParseError(who + ": node index " + std::to_string(v) + " out of range");
}

}  // namespace

Instance parse_instance(std::string_view text) {
    const json j = parse_json(text);
    Instance inst;
    inst.n_t = field<int>(j, "n_t");
    inst.n_d = field<int>(j, "n_d");
    inst.n_p = field<int>(j, "n_p");
    inst.drone_range = field<double>(j, "drone_range");
    const auto raw = field<std::vector<std::vector<std::int64_t>>>(j, "positions");
    for (const auto& xy : raw) {
        if (xy.size() != 2) throw ParseError("position must be a pair [x,y]");
        inst.positions.push_back({xy[0], xy[1]});
    }
    if (inst.positions.size() != static_cast<std::size_t>(std::max(inst.n_p, 0)))
        throw ParseError("count mismatch: n_p=" + std::to_string(inst.n_p) + " but " +
                         std::to_string(inst.positions.size()) + " positions");
    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    json pos = json::array();
    for (const auto& p : inst.positions) pos.push_back({p.x, p.y});
    json j{{"n_t", inst.n_t}, {"n_d", inst.n_d}, {"n_p", inst.n_p}, {"drone_range", inst.drone_range},
           {"positions", pos}};
    return j.dump();
}

std::string serialize_solution(const Solution& s) {
    json trucks = json::array();
    for (const auto& t : s.trucks) trucks.push_back({{"nodes", t.nodes}, {"carry", t.carry}});
    json drones = json::array();
    for (const auto& d : s.drones) drones.push_back({{"nodes", d.nodes}, {"carried", d.carried}});
    return json{{"trucks", trucks}, {"drones", drones}}.dump();
}

Solution parse_solution(std::string_view text, const Instance& inst) {
    const json j = parse_json(text);
    const auto trucks = field<json>(j, "trucks");
    const auto drones = field<json>(j, "drones");
    if (!trucks.is_array() || !drones.is_array()) throw ParseError("trucks and drones must be arrays");
    if (trucks.size() != static_cast<std::size_t>(inst.n_t)) throw ParseError("truck count differs from n_t");
    if (drones.size() != static_cast<std::size_t>(inst.n_d)) throw ParseError("drone count differs from n_d");

    Solution s;
    for (std::size_t i = 0; i < trucks.size(); ++i) {
        const std::string who = "truck " + std::to_string(i + 1);
        TruckTour t;
        t.nodes = field<std::vector<int>>(trucks[i], "nodes");
        t.carry = field<std::vector<std::vector<int>>>(trucks[i], "carry");
        check_tour_nodes(t.nodes, inst.n_p, who);
        if (t.carry.size() + 1 != t.nodes.size()) throw ParseError(who + ": carry must be one shorter than nodes");
        for (auto& set : t.carry) {
            for (int d : set)
                if (d < 1 || d > inst.n_d) throw ParseError(who + ": carry references nonexistent drone " + std::to_string(d));
            std::sort(set.begin(), set.end());
            if (std::adjacent_find(set.begin(), set.end()) != set.end()) throw ParseError(who + ": duplicate drone in carry");
        }
        s.trucks.push_back(std::move(t));
    }
    for (std::size_t i = 0; i < drones.size(); ++i) {
        const std::string who = "drone " + std::to_string(i + 1);
        DroneTour d;
        d.nodes = field<std::vector<int>>(drones[i], "nodes");
        d.carried = field<std::vector<int>>(drones[i], "carried");
        check_tour_nodes(d.nodes, inst.n_p, who);
        if (d.carried.size() + 1 != d.nodes.size()) throw ParseError(who + ": carried must be one shorter than nodes");
        for (int t : d.carried)
            if (t < 0 || t > inst.n_t) throw ParseError(who + ": carried references nonexistent truck " + std::to_string(t));
        s.drones.push_back(std::move(d));
    }
    return s;
}

// ---------------------------------------------------------------------------

int SolutionGraph::edge_id(VehicleId v, int position) const {
    const auto& off = v.is_truck() ? truck_offset : drone_offset;
    return static_cast<int>(off[static_cast<std::size_t>(v.index - 1)]) + position;
}

SolutionGraph build_solution_graph(const Solution& s, int n_p) {
    SolutionGraph g;
    g.node_count = n_p + 1;
    g.out_edges.resize(static_cast<std::size_t>(g.node_count));
    g.in_edges.resize(static_cast<std::size_t>(g.node_count));
    g.edges.reserve(s.total_edges());

    auto add = [&](GraphEdge e) {
        const int id = static_cast<int>(g.edges.size());
        g.out_edges[static_cast<std::size_t>(e.from)].push_back(id);
        g.in_edges[static_cast<std::size_t>(e.to)].push_back(id);
        g.edges.push_back(std::move(e));
    };
    for (std::size_t t = 0; t < s.trucks.size(); ++t) {
        g.truck_offset.push_back(g.edges.size());
        const auto& tour = s.trucks[t];
        for (std::size_t i = 0; i < tour.edge_count(); ++i)
            add({tour.nodes[i], tour.nodes[i + 1], truck_id(static_cast<int>(t + 1)), static_cast<int>(i), tour.carry[i], 0});
    }
    for (std::size_t d = 0; d < s.drones.size(); ++d) {
        g.drone_offset.push_back(g.edges.size());
        const auto& tour = s.drones[d];
        for (std::size_t i = 0; i < tour.edge_count(); ++i)
            add({tour.nodes[i], tour.nodes[i + 1], drone_id(static_cast<int>(d + 1)), static_cast<int>(i), {}, tour.carried[i]});
    }
    return g;
}

EdgePartition essentially_equal_partition(const SolutionGraph& g) {
    EdgePartition part;
    part.class_of.assign(g.edges.size(), -1);

    // Drone edges indexed by (drone, from, to) so truck edges can claim their riders.
    std::map<std::tuple<int, int, int>, int> drone_edge;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& ed = g.edges[e];
        if (ed.vehicle.is_drone()) drone_edge[{ed.vehicle.index, ed.from, ed.to}] = static_cast<int>(e);
    }

    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& ed = g.edges[e];
        if (!ed.vehicle.is_truck()) continue;
        std::vector<int> cls{static_cast<int>(e)};
        for (int d : ed.carry) {
            auto it = drone_edge.find({d, ed.from, ed.to});
            if (it == drone_edge.end() || g.edges[static_cast<std::size_t>(it->second)].carried != ed.vehicle.index)
                throw CarryInconsistency("truck " + std::to_string(ed.vehicle.index) + " edge " + std::to_string(ed.from) +
                                         "->" + std::to_string(ed.to) + " carries drone " + std::to_string(d) +
                                         " which does not ride it");
            if (part.class_of[static_cast<std::size_t>(it->second)] != -1)
                throw CarryInconsistency("drone edge claimed twice");
            cls.push_back(it->second);
        }
        const int id = static_cast<int>(part.classes.size());
        for (int m : cls) part.class_of[static_cast<std::size_t>(m)] = id;
        part.classes.push_back(std::move(cls));
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (part.class_of[e] != -1) continue;
        const auto& ed = g.edges[e];
        if (ed.vehicle.is_drone() && ed.carried != 0)
            throw CarryInconsistency("drone " + std::to_string(ed.vehicle.index) + " rides truck " +
                                     std::to_string(ed.carried) + " on " + std::to_string(ed.from) + "->" +
                                     std::to_string(ed.to) + " but the truck does not carry it");
        part.class_of[e] = static_cast<int>(part.classes.size());
        part.classes.push_back({static_cast<int>(e)});
    }
    return part;
}

}  // namespace vrd
