#include "vrd/neighborhoods.hpp"

#include <algorithm>
#include <tuple>
#include <limits>

#include "vrd/geometry.hpp"

namespace vrd {

std::string_view rejection_name(Rejection r) {
    switch (r) {
        case Rejection::None: return "none";
        case Rejection::DroneRange: return "drone-range";
        case Rejection::TruckNode: return "truck-node";
        case Rejection::Inapplicable: return "inapplicable";
        case Rejection::Infeasible: return "infeasible";
    }
    return "unknown";
}

double truck_latency(const std::vector<int>& order, const Instance& inst) {
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

namespace {

std::uint64_t mix(std::initializer_list<std::int64_t> parts) {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (auto p : parts) h = splitmix64(h ^ static_cast<std::uint64_t>(p));
    return h;
}

// Truck a leg interacts with: its truck for rides, the truck of its non-depot endpoints for
// flights. 0 when both flight endpoints are the depot, -1 when the endpoints are on different trucks.
int leg_truck(const Leg& l, const TruckIndex& idx) {
    if (l.ride()) return l.truck;
    const int a = idx.truck_of(l.from), c = idx.truck_of(l.to);
    if (a == 0) return c;
    if (c == 0 || c == a) return a;
    return -1;
}

// Everything a small move needs about the area it works in.
class AreaView {
public:
    AreaView(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area)
        : plan(plan), inst(inst), area(area), idx(plan, inst.n_p), legs(plan.drones[static_cast<std::size_t>(area.drone - 1)]),
          t(area.truck) {
        pinned.assign(static_cast<std::size_t>(inst.n_p) + 1, 0);
        for (std::size_t d = 0; d < plan.drones.size(); ++d) {
            if (static_cast<int>(d + 1) == area.drone) continue;
            for (const auto& l : plan.drones[d]) {
                pinned[static_cast<std::size_t>(l.from)] = 1;
                pinned[static_cast<std::size_t>(l.to)] = 1;
            }
        }
    }

    const Leg& leg(int i) const { return legs[static_cast<std::size_t>(i)]; }
    bool last(int i) const { return i + 1 == static_cast<int>(legs.size()); }
    int pos_from(const Leg& l) const { return idx.position(t, l.from, false); }
    int pos_to(const Leg& l) const { return idx.position(t, l.to, true); }
    int node(int k) const { return idx.node_at(t, k); }
    int end() const { return idx.end_position(t); }
    bool is_pinned(int v) const { return v != 0 && pinned[static_cast<std::size_t>(v)]; }
    bool in_range(int a, int b, int c) const {
        return euclidean(inst.pos(a), inst.pos(b)) + euclidean(inst.pos(b), inst.pos(c)) <= inst.drone_range + 1e-9;
    }
    bool in_area(int i) const { return i >= area.first_leg && i <= area.last_leg && i < static_cast<int>(legs.size()); }

    // Number of drone edges of a leg.
    int edges(int i) const {
        const Leg& l = leg(i);
        if (!l.ride()) return l.via >= 0 ? 2 : 1;
        return std::max(0, pos_to(l) - pos_from(l));
    }

    const RoutePlan& plan;
    const Instance& inst;
    const SpeedUpArea& area;
    TruckIndex idx;
    const std::vector<Leg>& legs;
    int t;
    std::vector<char> pinned;
};

// Result plan with the legs [first, last] of the area drone replaced.
RoutePlan splice(const AreaView& v, int first, int last, const std::vector<Leg>& repl, std::vector<int> truck) {
    RoutePlan out = v.plan;
    auto& legs = out.drones[static_cast<std::size_t>(v.area.drone - 1)];
    std::vector<Leg> nl(legs.begin(), legs.begin() + first);
    nl.insert(nl.end(), repl.begin(), repl.end());
    nl.insert(nl.end(), legs.begin() + last + 1, legs.end());
    normalize_legs(nl);
    legs = std::move(nl);
    out.trucks[static_cast<std::size_t>(v.t - 1)] = std::move(truck);
    return out;
}

const std::vector<int>& truck_list(const AreaView& v) { return v.plan.trucks[static_cast<std::size_t>(v.t - 1)]; }

std::vector<int> erase_node(std::vector<int> pk, int node) {
    pk.erase(std::find(pk.begin(), pk.end(), node));
    return pk;
}

std::vector<int> insert_at(std::vector<int> pk, int position, int node) {
    // position is the full-tour position the node will take
    pk.insert(pk.begin() + (position - 1), node);
    return pk;
}

// ---- ride anchors

Rejection check_t1(const AreaView& v, int li, int o) {
    const Leg& l = v.leg(li);
    const int pu = v.pos_from(l), pv = v.pos_to(l);
    if (pu + o + 2 > pv) return Rejection::Inapplicable;
    if (o == 0 && li > 0) return Rejection::Inapplicable;             // would take off right after landing
    if (pu + o + 2 == pv && !v.last(li)) return Rejection::Inapplicable;  // would land right before taking off
    const int b = v.node(pu + o + 1);
    if (v.is_pinned(b)) return Rejection::TruckNode;
    if (!v.in_range(v.node(pu + o), b, v.node(pu + o + 2))) return Rejection::DroneRange;
    return Rejection::None;
}

// Index window for T9 takeoff/landing positions along a ride.
struct RideSpan {
    int pu, pv, lo, hi;
};

RideSpan ride_span(const AreaView& v, int li) {
    const Leg& l = v.leg(li);
    RideSpan s{v.pos_from(l), v.pos_to(l), 0, 0};
    s.lo = s.pu + (li > 0 ? 1 : 0);
    s.hi = s.pv - (v.last(li) ? 0 : 1);
    return s;
}

// Interior positions whose node may be handed to the drone.
std::vector<int> t9_candidates(const AreaView& v, int li) {
    const RideSpan s = ride_span(v, li);
    std::vector<int> out;
    for (int i = std::max(s.pu + 1, s.lo + 1); i < s.pv && i <= s.hi - 1; ++i)
        if (!v.is_pinned(v.node(i))) out.push_back(i);
    return out;
}

// ---- flight anchors

struct Sortie {
    int a, x, c, pa, pc;
};

Sortie sortie_of(const AreaView& v, int li) {
    const Leg& l = v.leg(li);
    return {l.from, l.via, l.to, v.pos_from(l), v.pos_to(l)};
}

Rejection check_flight_move(const AreaView& v, int li, int type) {
    const Leg& l = v.leg(li);
    const Sortie s = sortie_of(v, li);
    if (s.pa < 0 || s.pc < 0 || s.pa >= s.pc) return Rejection::Inapplicable;
    if (l.via < 0) return type == 8 ? Rejection::None : Rejection::Inapplicable;
    switch (type) {
        case 2:
            return s.pc == s.pa + 1 ? Rejection::None : Rejection::Inapplicable;
        case 3:
            if (s.pc - 1 <= s.pa) return Rejection::Inapplicable;
            return v.in_range(s.a, s.x, v.node(s.pc - 1)) ? Rejection::None : Rejection::DroneRange;
        case 4: {
            if (l.to == 0 || v.last(li)) return Rejection::Inapplicable;
            const Leg& next = v.leg(li + 1);
            const int pn = s.pc + 1;
            if (!next.ride()) return Rejection::Inapplicable;
            if (v.pos_to(next) == pn && !v.last(li + 1)) return Rejection::Inapplicable;
            return v.in_range(s.a, s.x, v.node(pn)) ? Rejection::None : Rejection::DroneRange;
        }
        case 5:
            if (s.pa + 1 >= s.pc) return Rejection::Inapplicable;
            return v.in_range(v.node(s.pa + 1), s.x, s.c) ? Rejection::None : Rejection::DroneRange;
        case 6: {
            if (li == 0 || l.from == 0) return Rejection::Inapplicable;
            const Leg& prev = v.leg(li - 1);
            if (!prev.ride()) return Rejection::Inapplicable;
            if (v.pos_from(prev) == s.pa - 1 && li - 1 != 0) return Rejection::Inapplicable;
            return v.in_range(v.node(s.pa - 1), s.x, s.c) ? Rejection::None : Rejection::DroneRange;
        }
        case 7: {
            if (s.pc != s.pa + 2) return Rejection::Inapplicable;
            const int y = v.node(s.pa + 1);
            if (v.is_pinned(y)) return Rejection::TruckNode;
            return v.in_range(s.a, y, s.c) ? Rejection::None : Rejection::DroneRange;
        }
        case 8:
            return Rejection::None;
        default:
            return Rejection::Inapplicable;
    }
}

MoveResult apply_t1(const AreaView& v, int li, int o) {
    MoveResult r;
    r.reason = check_t1(v, li, o);
    if (r.reason != Rejection::None) return r;
    const Leg& l = v.leg(li);
    const int pu = v.pos_from(l), pv = v.pos_to(l);
    const int a = v.node(pu + o), b = v.node(pu + o + 1), c = v.node(pu + o + 2);
    std::vector<Leg> repl;
    if (o > 0) repl.push_back(ride_leg(v.t, l.from, a));
    repl.push_back(flight_leg(a, b, c));
    if (pu + o + 2 < pv) repl.push_back(ride_leg(v.t, c, l.to));
    r.plan = splice(v, li, li, repl, erase_node(truck_list(v), b));
    r.signature = mix({1, a, b, c});
    r.inverse = mix({2, a, b, c});
    return r;
}

MoveResult apply_t9(const AreaView& v, int li, SmallMove& m, Rng& rng) {
    MoveResult r;
    const Leg& l = v.leg(li);
    if (!l.ride()) {
        r.reason = Rejection::Inapplicable;
        return r;
    }
    const RideSpan s = ride_span(v, li);
    int ib = -1;
    if (m.b >= 0) {
        ib = v.idx.position(v.t, m.b);
        if (ib <= s.pu || ib >= s.pv || ib - 1 < s.lo || ib + 1 > s.hi) {
            r.reason = Rejection::Inapplicable;
            return r;
        }
        if (v.is_pinned(m.b)) {
            r.reason = Rejection::TruckNode;
            return r;
        }
    } else {
        const auto cand = t9_candidates(v, li);
        if (cand.empty()) {
            r.reason = Rejection::Inapplicable;
            return r;
        }
        ib = cand[uniform_index(rng, cand.size())];
    }
    const int b = v.node(ib);
    int ia = -1, ic = -1;
    if (m.a >= 0 && m.c >= 0) {
        ia = v.idx.position(v.t, m.a, false);
        ic = v.idx.position(v.t, m.c, true);
        if (ia < s.lo || ia >= ib || ic <= ib || ic > s.hi) {
            r.reason = Rejection::Inapplicable;
            return r;
        }
        if (!v.in_range(m.a, b, m.c)) {
            r.reason = Rejection::DroneRange;
            return r;
        }
    } else {
        std::vector<std::pair<int, int>> pairs;
        for (int i = s.lo; i < ib; ++i)
            for (int j = ib + 1; j <= s.hi; ++j)
                if (v.in_range(v.node(i), b, v.node(j))) pairs.push_back({i, j});
        if (pairs.empty()) {
            r.reason = Rejection::DroneRange;
            return r;
        }
        std::tie(ia, ic) = pairs[uniform_index(rng, pairs.size())];
    }
    const int a = v.node(ia), c = v.node(ic);
    m.a = a;
    m.b = b;
    m.c = c;
    std::vector<Leg> repl;
    if (ia > s.pu) repl.push_back(ride_leg(v.t, l.from, a));
    repl.push_back(flight_leg(a, b, c));
    if (ic < s.pv) repl.push_back(ride_leg(v.t, c, l.to));
    r.plan = splice(v, li, li, repl, erase_node(truck_list(v), b));
    r.signature = mix({9, a, b, c});
    r.inverse = mix({8, a, b, c});
    return r;
}

MoveResult apply_flight_move(const AreaView& v, int li, int type) {
    MoveResult r;
    r.reason = check_flight_move(v, li, type);
    if (r.reason != Rejection::None) return r;
    const Leg& l = v.leg(li);
    const Sortie s = sortie_of(v, li);
    const int t = v.t;
    if (l.via < 0) {  // hop collapsed into a ride
        r.plan = splice(v, li, li, {ride_leg(t, s.a, s.c)}, truck_list(v));
        r.signature = mix({8, s.a, -1, s.c});
        r.inverse = mix({10, s.a, -1, s.c});
        return r;
    }
    switch (type) {
        case 2:
            r.plan = splice(v, li, li, {ride_leg(t, s.a, s.c)}, insert_at(truck_list(v), s.pa + 1, s.x));
            r.signature = mix({2, s.a, s.x, s.c});
            r.inverse = mix({1, s.a, s.x, s.c});
            break;
        case 3: {
            const int p = v.node(s.pc - 1);
            r.plan = splice(v, li, li, {flight_leg(s.a, s.x, p), ride_leg(t, p, s.c)}, truck_list(v));
            r.signature = mix({3, s.a, s.x, s.c, p});
            r.inverse = mix({4, s.a, s.x, p, s.c});
            break;
        }
        case 4: {
            const Leg& next = v.leg(li + 1);
            const int pn = s.pc + 1;
            const int n = v.node(pn);
            std::vector<Leg> repl{flight_leg(s.a, s.x, n)};
            if (v.pos_to(next) > pn) repl.push_back(ride_leg(t, n, next.to));
            r.plan = splice(v, li, li + 1, repl, truck_list(v));
            r.signature = mix({4, s.a, s.x, s.c, n});
            r.inverse = mix({3, s.a, s.x, n, s.c});
            break;
        }
        case 5: {
            const int q = v.node(s.pa + 1);
            r.plan = splice(v, li, li, {ride_leg(t, s.a, q), flight_leg(q, s.x, s.c)}, truck_list(v));
            r.signature = mix({5, s.a, q, s.x, s.c});
            r.inverse = mix({6, q, s.a, s.x, s.c});
            break;
        }
        case 6: {
            const Leg& prev = v.leg(li - 1);
            const int p = v.node(s.pa - 1);
            std::vector<Leg> repl;
            if (v.pos_from(prev) < s.pa - 1) repl.push_back(ride_leg(t, prev.from, p));
            repl.push_back(flight_leg(p, s.x, s.c));
            r.plan = splice(v, li - 1, li, repl, truck_list(v));
            r.signature = mix({6, s.a, p, s.x, s.c});
            r.inverse = mix({5, p, s.a, s.x, s.c});
            break;
        }
        case 7: {
            const int y = v.node(s.pa + 1);
            auto pk = truck_list(v);
            std::replace(pk.begin(), pk.end(), y, s.x);
            r.plan = splice(v, li, li, {flight_leg(s.a, y, s.c)}, std::move(pk));
            r.signature = mix({7, s.a, s.x, y, s.c});
            r.inverse = mix({7, s.a, y, s.x, s.c});
            break;
        }
        case 8: {
            const Point px = v.inst.pos(s.x);
            int best = s.pa;
            double best_d = std::numeric_limits<double>::infinity();
            for (int k = s.pa; k <= s.pc; ++k) {
                const double d = manhattan(v.inst.pos(v.node(k)), px);
                if (d < best_d) {
                    best_d = d;
                    best = k;
                }
            }
            auto added = [&](int before, int after) {
                const Point p = v.inst.pos(v.node(before)), q = v.inst.pos(v.node(after));
                return manhattan(p, px) + manhattan(px, q) - manhattan(p, q);
            };
            int position = -1;
            double cost = std::numeric_limits<double>::infinity();
            if (best > s.pa) {
                cost = added(best - 1, best);
                position = best;
            }
            if (best < s.pc && added(best, best + 1) < cost) position = best + 1;
            r.plan = splice(v, li, li, {ride_leg(t, s.a, s.c)}, insert_at(truck_list(v), position, s.x));
            r.signature = mix({8, s.a, s.x, s.c});
            r.inverse = mix({9, s.a, s.x, s.c});
            break;
        }
        default:
            r.reason = Rejection::Inapplicable;
    }
    return r;
}

}  // namespace

std::vector<SpeedUpArea> find_speedup_areas(const RoutePlan& plan, const Instance& inst, int drone) {
    const TruckIndex idx(plan, inst.n_p);
    std::vector<SpeedUpArea> out;
    for (std::size_t d = 0; d < plan.drones.size(); ++d) {
        if (drone > 0 && static_cast<int>(d + 1) != drone) continue;
        const auto& legs = plan.drones[d];
        SpeedUpArea cur{static_cast<int>(d + 1), 0, -1, -1};
        auto close = [&]() {
            if (cur.first_leg >= 0 && cur.truck > 0) out.push_back(cur);
            cur.truck = 0;
            cur.first_leg = cur.last_leg = -1;
        };
        for (int i = 0; i < static_cast<int>(legs.size()); ++i) {
            const int t = leg_truck(legs[static_cast<std::size_t>(i)], idx);
            if (t < 0) {
                close();
                continue;
            }
            if (cur.first_leg >= 0 && t != 0 && cur.truck != 0 && t != cur.truck) close();
            if (cur.first_leg < 0) cur.first_leg = i;
            if (t != 0) cur.truck = t;
            cur.last_leg = i;
        }
        close();
    }
    return out;
}

std::vector<std::pair<int, int>> area_anchors(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area) {
    const AreaView v(plan, inst, area);
    std::vector<std::pair<int, int>> out;
    for (int i = area.first_leg; i <= area.last_leg && v.in_area(i); ++i)
        for (int o = 0; o < v.edges(i); ++o) out.push_back({i, o});
    return out;
}

std::vector<int> applicable_moves(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area, int leg, int offset) {
    const AreaView v(plan, inst, area);
    std::vector<int> out;
    if (!v.in_area(leg)) return out;
    const Leg& l = v.leg(leg);
    if (l.ride()) {
        if (check_t1(v, leg, offset) == Rejection::None) out.push_back(1);
        if (v.edges(leg) >= 2 && !t9_candidates(v, leg).empty()) out.push_back(9);
        return out;
    }
    if (offset != 0) return out;
    for (int type = 2; type <= 8; ++type)
        if (check_flight_move(v, leg, type) == Rejection::None) out.push_back(type);
    return out;
}

MoveResult apply_small_move(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area, SmallMove m, Rng& rng) {
    const AreaView v(plan, inst, area);
    MoveResult r;
    if (!v.in_area(m.leg) || m.offset < 0 || m.offset >= v.edges(m.leg)) {
        r.reason = Rejection::Inapplicable;
        return r;
    }
    const Leg& l = v.leg(m.leg);
    if (m.type == 1 || m.type == 9) {
        if (!l.ride()) {
            r.reason = Rejection::Inapplicable;
            return r;
        }
        r = m.type == 1 ? apply_t1(v, m.leg, m.offset) : apply_t9(v, m.leg, m, rng);
        r.move = m;
        return r;
    }
    if (l.ride() || m.offset != 0) {
        r.reason = Rejection::Inapplicable;
        return r;
    }
    r = apply_flight_move(v, m.leg, m.type);
    r.move = m;
    return r;
}

SampleOutcome sample_small_neighbor(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area, Rng& rng) {
    const auto anchors = area_anchors(plan, inst, area);
    SampleOutcome out;
    if (anchors.empty()) return out;
    constexpr int kAttempts = 32;
    bool any_applicable = false;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const auto [leg, offset] = anchors[uniform_index(rng, anchors.size())];
        const auto types = applicable_moves(plan, inst, area, leg, offset);
        if (types.empty()) continue;
        any_applicable = true;
        SmallMove m{types[uniform_index(rng, types.size())], leg, offset};
        auto r = apply_small_move(plan, inst, area, m, rng);
        if (!r.plan) continue;
        const auto f = evaluate(*r.plan, inst);
        if (!f) continue;
        out.status = SampleStatus::Ok;
        out.move = SampledMove{std::move(*r.plan), *f, r.move, r.signature, r.inverse};
        return out;
    }
    if (!any_applicable) {
        for (const auto& [leg, offset] : anchors)
            if (!applicable_moves(plan, inst, area, leg, offset).empty()) {
                any_applicable = true;
                break;
            }
    }
    out.status = any_applicable ? SampleStatus::Rejected : SampleStatus::Exhausted;
    return out;
}

// ---------------------------------------------------------------------------
// Outer moves

namespace {

struct WalkEdge {
    int from, to;
    bool flying;
};

std::vector<WalkEdge> drone_walk(const std::vector<Leg>& legs, const TruckIndex& idx) {
    std::vector<WalkEdge> out;
    for (const auto& l : legs) {
        if (l.ride()) {
            const int a = idx.position(l.truck, l.from, false), b = idx.position(l.truck, l.to, true);
            for (int k = a; k < b; ++k) out.push_back({idx.node_at(l.truck, k), idx.node_at(l.truck, k + 1), false});
        } else if (l.via >= 0) {
            out.push_back({l.from, l.via, true});
            out.push_back({l.via, l.to, true});
        } else {
            out.push_back({l.from, l.to, true});
        }
    }
    return out;
}

// Rebuilds legs from a walk prefix. A trailing half flight is returned separately.
std::vector<Leg> legs_from_walk(const std::vector<WalkEdge>& walk, const TruckIndex& idx, std::optional<std::pair<int, int>>& half) {
    std::vector<Leg> legs;
    std::size_t i = 0;
    while (i < walk.size()) {
        if (!walk[i].flying) {
            const int t = idx.truck_of(walk[i].to) != 0 ? idx.truck_of(walk[i].to) : idx.truck_of(walk[i].from);
            std::size_t j = i;
            while (j < walk.size() && !walk[j].flying) ++j;
            legs.push_back(ride_leg(t, walk[i].from, walk[j - 1].to));
            i = j;
        } else if (i + 1 < walk.size() && walk[i + 1].flying) {
            legs.push_back(flight_leg(walk[i].from, walk[i].to, walk[i + 1].to));
            i += 2;
        } else if (idx.truck_of(walk[i].to) == 0 && walk[i].to != 0) {
            half = std::pair{walk[i].from, walk[i].to};
            i += 1;
        } else {
            legs.push_back(flight_leg(walk[i].from, -1, walk[i].to));
            i += 1;
        }
    }
    return legs;
}

OuterResult reject(std::string why) {
    OuterResult r;
    r.reason = std::move(why);
    return r;
}

}  // namespace

OuterResult outer_drone_change(const RoutePlan& plan, const Instance& inst, const DroneChange& m,
                               const SpeedUpRunner& speedup, Rng& rng) {
    if (m.drone < 1 || m.drone > static_cast<int>(plan.drones.size())) return reject("no such drone");
    if (m.truck < 1 || m.truck > static_cast<int>(plan.trucks.size())) return reject("no such truck");
    const TruckIndex idx(plan, inst.n_p);
    const auto& legs = plan.drones[static_cast<std::size_t>(m.drone - 1)];
    const auto walk = drone_walk(legs, idx);
    const int m_edges = static_cast<int>(walk.size());
    if (m.leaving < 0 || (m_edges > 0 && m.leaving >= m_edges) || (m_edges == 0 && m.leaving != 0))
        return reject("leaving node out of range");
    const int end_pos = idx.end_position(m.truck);
    if (m.arriving < 0 || m.arriving > end_pos) return reject("arriving node out of range");
    const bool arrive_start = m.arriving == 0;
    const bool arrive_end = m.arriving == end_pos;
    const int arrive_node = idx.node_at(m.truck, m.arriving);

    RoutePlan out = plan;
    // Packages the drone would still deliver go to the truck it would have left from.
    for (std::size_t k = 0; k + 1 < walk.size(); ++k) {
        if (!walk[k].flying || !walk[k + 1].flying) continue;
        if (static_cast<int>(k + 1) <= m.leaving) continue;
        const int a = walk[k].from, x = walk[k].to, c = walk[k + 1].to;
        if (a != 0) {
            auto& pk = out.trucks[static_cast<std::size_t>(idx.truck_of(a) - 1)];
            pk.insert(std::find(pk.begin(), pk.end(), a) + 1, x);
        } else {
            const int t = c != 0 ? idx.truck_of(c) : m.truck;
            auto& pk = out.trucks[static_cast<std::size_t>(t - 1)];
            pk.insert(pk.begin(), x);
        }
        ++k;
    }

    std::vector<WalkEdge> kept(walk.begin(), walk.begin() + m.leaving);
    if (!kept.empty() && kept.back().flying && (idx.truck_of(kept.back().to) != 0 || kept.back().to == 0)) kept.pop_back();
    std::optional<std::pair<int, int>> half;
    auto nl = legs_from_walk(kept, idx, half);
    const int at = half ? half->second : (kept.empty() ? 0 : kept.back().to);
    const bool fresh = kept.empty();

    const auto& target = out.trucks[static_cast<std::size_t>(m.truck - 1)];
    if (arrive_start) {
        if (!fresh) return reject("depot start is only reachable before leaving it");
        if (!target.empty()) nl.push_back(ride_leg(m.truck, 0, 0));
    } else if (half) {
        nl.push_back(flight_leg(half->first, half->second, arrive_end ? 0 : arrive_node));
        if (!arrive_end) nl.push_back(ride_leg(m.truck, arrive_node, 0));
    } else if (!arrive_end && at == arrive_node) {
        nl.push_back(ride_leg(m.truck, arrive_node, 0));
    } else if (arrive_end && fresh) {
        // a flight from depot to depot is no tour: the drone stays home
    } else {
        nl.push_back(flight_leg(at, -1, arrive_end ? 0 : arrive_node));
        if (!arrive_end) nl.push_back(ride_leg(m.truck, arrive_node, 0));
    }
    normalize_legs(nl);
    out.drones[static_cast<std::size_t>(m.drone - 1)] = std::move(nl);

    auto f = evaluate(out, inst);
    if (!f) return reject("rewired tours are infeasible");
    if (speedup) {
        const auto areas = find_speedup_areas(out, inst, m.drone);
        const int last = static_cast<int>(out.drones[static_cast<std::size_t>(m.drone - 1)].size()) - 1;
        for (const auto& area : areas)
            if (area.last_leg == last && area.truck == m.truck &&
                out.drones[static_cast<std::size_t>(m.drone - 1)][static_cast<std::size_t>(last)].ride()) {
                out = speedup(out, area, rng);
                f = evaluate(out, inst);
                if (!f) return reject("speedup produced an infeasible plan");
                break;
            }
    }
    OuterResult r;
    r.plan = std::move(out);
    r.objective = f;
    return r;
}

OuterResult outer_package_change(const RoutePlan& plan, const Instance& inst, const PackageChange& m) {
    const TruckIndex idx(plan, inst.n_p);
    const int p = m.package;
    if (p < 1 || p > inst.n_p) return reject("no such package");
    const int from = idx.truck_of(p);
    if (from == 0) return reject("package is not delivered by a truck");
    if (m.to_truck < 1 || m.to_truck > static_cast<int>(plan.trucks.size())) return reject("no such truck");

    bool handoff = false;
    for (const auto& legs : plan.drones)
        for (const auto& l : legs) handoff |= l.from == p || l.to == p;

    auto insert = [&](RoutePlan& rp) {
        auto& pk = rp.trucks[static_cast<std::size_t>(m.to_truck - 1)];
        if (pk.empty()) {
            pk.push_back(p);
            return;
        }
        const Point pp = inst.pos(p);
        std::size_t close = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pk.size(); ++i) {
            const double d = euclidean(inst.pos(pk[i]), pp);
            if (d < best) {
                best = d;
                close = i;
            }
        }
        auto before = pk, after = pk;
        before.insert(before.begin() + static_cast<std::ptrdiff_t>(close), p);
        after.insert(after.begin() + static_cast<std::ptrdiff_t>(close) + 1, p);
        pk = truck_latency(after, inst) < truck_latency(before, inst) ? std::move(after) : std::move(before);
    };

    auto finish = [&](RoutePlan rp) -> OuterResult {
        auto& pk = rp.trucks[static_cast<std::size_t>(from - 1)];
        pk.erase(std::find(pk.begin(), pk.end(), p));
        for (auto& legs : rp.drones) normalize_legs(legs);
        insert(rp);
        const auto f = evaluate(rp, inst);
        if (!f) return reject("package change breaks feasibility");
        OuterResult r;
        r.plan = std::move(rp);
        r.objective = f;
        return r;
    };

    if (!handoff) return finish(plan);

    const int pos = idx.position(from, p);
    const int end_pos = idx.end_position(from);
    for (int dir : {-1, 1}) {
        const int qpos = pos + dir;
        const int q = idx.node_at(from, qpos);
        const bool q_start = qpos == 0, q_end = qpos == end_pos;
        RoutePlan rp = plan;
        bool ok = true;
        for (auto& legs : rp.drones) {
            std::vector<Leg> nl;
            for (Leg l : legs) {
                if (l.ride() && l.truck == from && (l.from == p || l.to == p)) {
                    const int a = l.from == p ? qpos : idx.position(from, l.from, false);
                    const int b = l.to == p ? qpos : idx.position(from, l.to, true);
                    if (b <= a) continue;  // the ride vanished
                    if (l.from == p) l.from = q;
                    if (l.to == p) l.to = q;
                } else if (!l.ride()) {
                    if (l.to == p) {
                        if (q_start) ok = false;
                        l.to = q;
                    }
                    if (l.from == p) {
                        if (q_end) ok = false;
                        l.from = q;
                    }
                }
                nl.push_back(l);
            }
            legs = std::move(nl);
        }
        if (!ok) continue;
        auto r = finish(std::move(rp));
        if (r.plan) return r;
    }
    return reject("no adjacent node can take over the drone handoff");
}

OuterResult sample_outer_neighbor(const RoutePlan& plan, const Instance& inst, const SpeedUpRunner& speedup, Rng& rng,
                                  int retries, OuterMove* chosen) {
    const TruckIndex idx(plan, inst.n_p);
    std::vector<int> truck_packages;
    for (const auto& pk : plan.trucks) truck_packages.insert(truck_packages.end(), pk.begin(), pk.end());
    const bool drones = !plan.drones.empty();
    const bool packages = !truck_packages.empty();
    OuterResult last = reject("no move available");
    if (!drones && !packages) return last;
    const auto n_t = plan.trucks.size();
    for (int attempt = 0; attempt < retries; ++attempt) {
        bool drone_branch = std::bernoulli_distribution(0.5)(rng);
        if (!drones) drone_branch = false;
        if (!packages) drone_branch = true;
        if (drone_branch) {
            DroneChange m;
            m.drone = static_cast<int>(uniform_index(rng, plan.drones.size())) + 1;
            m.truck = static_cast<int>(uniform_index(rng, n_t)) + 1;
            const auto walk = drone_walk(plan.drones[static_cast<std::size_t>(m.drone - 1)], idx);
            m.leaving = walk.empty() ? 0 : static_cast<int>(uniform_index(rng, walk.size()));
            m.arriving = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(idx.end_position(m.truck)) + 1));
            last = outer_drone_change(plan, inst, m, speedup, rng);
            if (chosen) *chosen = m;
        } else {
            PackageChange m;
            m.package = truck_packages[uniform_index(rng, truck_packages.size())];
            m.to_truck = static_cast<int>(uniform_index(rng, n_t)) + 1;
            last = outer_package_change(plan, inst, m);
            if (chosen) *chosen = m;
        }
        if (last.plan) return last;
    }
    return last;
}

}  // namespace vrd
