#include "vrd/schedule.hpp"

#include <algorithm>
#include <tuple>

#include "vrd/geometry.hpp"

namespace vrd {

double edge_length(Traversal kind, Point a, Point b) {
    return kind == Traversal::Street ? manhattan(a, b) : euclidean(a, b);
}

namespace {

// Edges are addressed as (vehicle slot, position); truck slots come first.
struct EdgeRef {
    int slot;
    int pos;
};

}  // namespace

Schedule compute_schedule(const Solution& s, const Instance& inst) {
    const int nt = static_cast<int>(s.trucks.size());
    const int nd = static_cast<int>(s.drones.size());
    const int slots = nt + nd;
    auto nodes_of = [&](int slot) -> const std::vector<int>& {
        return slot < nt ? s.trucks[static_cast<std::size_t>(slot)].nodes : s.drones[static_cast<std::size_t>(slot - nt)].nodes;
    };

    // Class id of every edge, and the members of every class.
    std::vector<std::vector<int>> class_of(static_cast<std::size_t>(slots));
    for (int v = 0; v < slots; ++v) class_of[static_cast<std::size_t>(v)].assign(nodes_of(v).size() - 1, -1);
    std::vector<std::vector<EdgeRef>> members;
    std::vector<char> street;

    std::vector<std::vector<int>> drone_pos(static_cast<std::size_t>(nd));
    for (int d = 0; d < nd; ++d) {
        auto& idx = drone_pos[static_cast<std::size_t>(d)];
        idx.assign(static_cast<std::size_t>(inst.n_p) + 1, -1);
        const auto& nodes = s.drones[static_cast<std::size_t>(d)].nodes;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) idx[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
    }

    for (int t = 0; t < nt; ++t) {
        const auto& tour = s.trucks[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < tour.carry.size(); ++i) {
            const int id = static_cast<int>(members.size());
            std::vector<EdgeRef> cls{{t, static_cast<int>(i)}};
            class_of[static_cast<std::size_t>(t)][i] = id;
            for (int d : tour.carry[i]) {
                const int k = drone_pos[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(tour.nodes[i])];
                const auto& dt = s.drones[static_cast<std::size_t>(d - 1)];
                if (k < 0 || dt.nodes[static_cast<std::size_t>(k) + 1] != tour.nodes[i + 1] ||
                    dt.carried[static_cast<std::size_t>(k)] != t + 1)
                    throw CarryInconsistency("truck " + std::to_string(t + 1) + " carries drone " + std::to_string(d) +
                                             " on an edge the drone does not ride");
                int& slot_class = class_of[static_cast<std::size_t>(nt + d - 1)][static_cast<std::size_t>(k)];
                if (slot_class != -1) throw CarryInconsistency("drone edge claimed twice");
                slot_class = id;
                cls.push_back({nt + d - 1, k});
            }
            members.push_back(std::move(cls));
            street.push_back(1);
        }
    }
    for (int d = 0; d < nd; ++d) {
        const auto& tour = s.drones[static_cast<std::size_t>(d)];
        for (std::size_t i = 0; i < tour.carried.size(); ++i) {
            int& c = class_of[static_cast<std::size_t>(nt + d)][i];
            if (c != -1) continue;
            if (tour.carried[i] != 0)
                throw CarryInconsistency("drone " + std::to_string(d + 1) + " rides truck " +
                                         std::to_string(tour.carried[i]) + " which does not carry it");
            c = static_cast<int>(members.size());
            members.push_back({{nt + d, static_cast<int>(i)}});
            street.push_back(0);
        }
    }

    // Worklist: a class is ready once every member's preceding edge has been timed.
    std::vector<int> pending(members.size(), 0);
    for (std::size_t c = 0; c < members.size(); ++c)
        for (const auto& m : members[c]) pending[c] += m.pos > 0 ? 1 : 0;
    std::vector<int> ready;
    for (std::size_t c = 0; c < members.size(); ++c)
        if (pending[c] == 0) ready.push_back(static_cast<int>(c));

    std::vector<std::vector<double>> dep(static_cast<std::size_t>(slots)), arr(static_cast<std::size_t>(slots));
    for (int v = 0; v < slots; ++v) {
        dep[static_cast<std::size_t>(v)].assign(nodes_of(v).size() - 1, 0.0);
        arr[static_cast<std::size_t>(v)].assign(nodes_of(v).size() - 1, 0.0);
    }
    std::size_t done = 0;
    while (!ready.empty()) {
        const int c = ready.back();
        ready.pop_back();
        ++done;
        const auto& cls = members[static_cast<std::size_t>(c)];
        double start = 0.0;
        for (const auto& m : cls)
            if (m.pos > 0) start = std::max(start, arr[static_cast<std::size_t>(m.slot)][static_cast<std::size_t>(m.pos - 1)]);
        const auto& nodes = nodes_of(cls.front().slot);
        const Point a = inst.pos(nodes[static_cast<std::size_t>(cls.front().pos)]);
        const Point b = inst.pos(nodes[static_cast<std::size_t>(cls.front().pos) + 1]);
        const double finish = start + edge_length(street[static_cast<std::size_t>(c)] ? Traversal::Street : Traversal::Flying, a, b);
        for (const auto& m : cls) {
            dep[static_cast<std::size_t>(m.slot)][static_cast<std::size_t>(m.pos)] = start;
            arr[static_cast<std::size_t>(m.slot)][static_cast<std::size_t>(m.pos)] = finish;
            const auto& cs = class_of[static_cast<std::size_t>(m.slot)];
            if (static_cast<std::size_t>(m.pos) + 1 < cs.size()) {
                const int nc = cs[static_cast<std::size_t>(m.pos) + 1];
                if (--pending[static_cast<std::size_t>(nc)] == 0) ready.push_back(nc);
            }
        }
    }
    if (done != members.size())
        throw ScheduleStall("vehicles wait on each other: " + std::to_string(members.size() - done) +
                            " edge classes can never start");

    Schedule sched;
    for (int v = 0; v < slots; ++v) {
        VehicleTimes vt;
        const auto& a = arr[static_cast<std::size_t>(v)];
        const auto& d = dep[static_cast<std::size_t>(v)];
        vt.arrival.push_back(0.0);
        vt.arrival.insert(vt.arrival.end(), a.begin(), a.end());
        vt.departure = d;
        vt.departure.push_back(vt.arrival.back());
        (v < nt ? sched.trucks : sched.drones).push_back(std::move(vt));
    }
    sched.deliveries = attribute_deliveries(s, sched, inst.n_p);
    return sched;
}

std::vector<Delivery> attribute_deliveries(const Solution& s, const Schedule& sched, int n_p) {
    struct Event {
        double time;
        VehicleId vehicle;
        int pos;
        int node;
        int flight;  // index of the first edge of the flight the drone arrives on, or -1
    };
    std::vector<Event> events;
    for (std::size_t t = 0; t < s.trucks.size(); ++t) {
        const auto& nodes = s.trucks[t].nodes;
        for (std::size_t i = 1; i + 1 < nodes.size(); ++i)
            events.push_back({sched.trucks[t].arrival[i], truck_id(static_cast<int>(t + 1)), static_cast<int>(i), nodes[i], -1});
    }
    for (std::size_t d = 0; d < s.drones.size(); ++d) {
        const auto& tour = s.drones[d];
        int flight = -1;
        for (std::size_t i = 1; i + 1 < tour.nodes.size(); ++i) {
            const std::size_t e = i - 1;
            if (tour.carried[e] != 0)
                flight = -1;
            else if (flight == -1)
                flight = static_cast<int>(e);
            events.push_back({sched.drones[d].arrival[i], drone_id(static_cast<int>(d + 1)), static_cast<int>(i), tour.nodes[i], flight});
        }
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.time, a.vehicle, a.pos) < std::tie(b.time, b.vehicle, b.pos);
    });

    std::vector<Delivery> out(static_cast<std::size_t>(n_p) + 1, Delivery{-1.0, {}});
    std::vector<std::vector<char>> flight_used(s.drones.size());
    for (std::size_t d = 0; d < s.drones.size(); ++d) flight_used[d].assign(s.drones[d].carried.size(), 0);
    for (const auto& ev : events) {
        auto& slot = out[static_cast<std::size_t>(ev.node)];
        if (slot.time >= 0.0) continue;
        if (ev.vehicle.is_drone() && ev.flight >= 0) {
            char& used = flight_used[static_cast<std::size_t>(ev.vehicle.index - 1)][static_cast<std::size_t>(ev.flight)];
            if (used) continue;
            used = 1;
        }
        slot = {ev.time, ev.vehicle};
    }
    for (int v = 1; v <= n_p; ++v)
        if (out[static_cast<std::size_t>(v)].time < 0.0)
            throw ScheduleStall("package " + std::to_string(v) + " has no eligible arrival");
    out[0] = {0.0, {}};
    return out;
}

double objective(const Solution& s, const Instance& inst) {
    const Schedule sched = compute_schedule(s, inst);
    double sum = 0.0;
    for (int v = 1; v <= inst.n_p; ++v) sum += sched.deliveries[static_cast<std::size_t>(v)].time;
    return sum / inst.n_p;
}

}  // namespace vrd
