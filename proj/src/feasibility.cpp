#include "vrd/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vrd/geometry.hpp"

namespace vrd {

std::string_view rule_name(Rule r) {
    switch (r) {
        case Rule::Structure: return "structure";
        case Rule::NodeVisit: return "node-visit";
        case Rule::DepotTermination: return "depot-termination";
        case Rule::Coverage: return "coverage";
        case Rule::FlightLength: return "flight-length";
        case Rule::CarryConsistency: return "carry-consistency";
        case Rule::ScheduleConsistency: return "schedule-consistency";
    }
    return "unknown";
}

std::string FeasibilityReport::render() const {
    std::ostringstream out;
    out << "verdict: ";
    switch (verdict) {
        case Verdict::Feasible: out << "feasible"; break;
        case Verdict::Inconsistent: out << "almost-feasible-but-inconsistent"; break;
        case Verdict::Infeasible: out << "infeasible"; break;
    }
    out << "\nviolations: " << violations.size() << "\n";
    for (const auto& v : violations) out << "  [" << rule_name(v.rule) << "] " << v.locus << "\n";
    return out.str();
}

namespace {

struct Visit {
    VehicleId vehicle;
    int in_carried = 0;   // drones only
    int out_carried = 0;
};

class Checker {
public:
    Checker(const Solution& s, const Instance& inst) : s_(s), inst_(inst) {}

    FeasibilityReport run() {
        if (!structure()) return finish();
        node_visits();
        coverage();
        flights();
        carry();
        return finish();
    }

private:
    void flag(Rule r, std::string locus) { report_.violations.push_back({r, std::move(locus)}); }

    FeasibilityReport finish() {
        report_.verdict = report_.violations.empty() ? Verdict::Feasible : Verdict::Infeasible;
        return std::move(report_);
    }

    bool check_nodes(const std::vector<int>& nodes, std::size_t edges, const std::string& who) {
        bool ok = true;
        if (nodes.size() != edges + 1) {
            flag(Rule::Structure, who + ": annotation length does not match edge count");
            return false;
        }
        for (int v : nodes)
            if (v < 0 || v > inst_.n_p) {
                flag(Rule::Structure, who + ": node " + std::to_string(v) + " out of range");
                return false;
            }
        if (nodes.front() != 0) {
            flag(Rule::DepotTermination, who + ": does not start at the depot");
            ok = false;
        }
        if (nodes.size() == 1) return ok;
        if (nodes.back() != 0) {
            flag(Rule::DepotTermination, who + ": does not return to the depot");
            ok = false;
        }
        if (nodes.size() == 2) {
            flag(Rule::Structure, who + ": tour visits no package");
            ok = false;
        }
        std::vector<char> seen(static_cast<std::size_t>(inst_.n_p) + 1, 0);
        for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
            const int v = nodes[i];
            if (v == 0) {
                flag(Rule::DepotTermination, who + ": passes the depot mid-tour at position " + std::to_string(i));
                ok = false;
            } else if (seen[static_cast<std::size_t>(v)]++) {
                flag(Rule::Structure, who + ": visits node " + std::to_string(v) + " twice");
                ok = false;
            }
        }
        return ok;
    }

    bool structure() {
        bool ok = true;
        if (s_.trucks.size() != static_cast<std::size_t>(inst_.n_t)) {
            flag(Rule::Structure, "expected " + std::to_string(inst_.n_t) + " truck tours");
            return false;
        }
        if (s_.drones.size() != static_cast<std::size_t>(inst_.n_d)) {
            flag(Rule::Structure, "expected " + std::to_string(inst_.n_d) + " drone tours");
            return false;
        }
        for (int t = 1; t <= inst_.n_t; ++t) {
            const auto& tour = s_.truck(t);
            ok &= check_nodes(tour.nodes, tour.carry.size(), "truck " + std::to_string(t));
            for (const auto& set : tour.carry)
                for (int d : set)
                    if (d < 1 || d > inst_.n_d) {
                        flag(Rule::Structure, "truck " + std::to_string(t) + ": carries nonexistent drone");
                        ok = false;
                    }
        }
        for (int d = 1; d <= inst_.n_d; ++d) {
            const auto& tour = s_.drone(d);
            ok &= check_nodes(tour.nodes, tour.carried.size(), "drone " + std::to_string(d));
            for (int t : tour.carried)
                if (t < 0 || t > inst_.n_t) {
                    flag(Rule::Structure, "drone " + std::to_string(d) + ": rides nonexistent truck");
                    ok = false;
                }
        }
        return ok;
    }

    void node_visits() {
        visits_.assign(static_cast<std::size_t>(inst_.n_p) + 1, {});
        for (int t = 1; t <= inst_.n_t; ++t) {
            const auto& nodes = s_.truck(t).nodes;
            for (std::size_t i = 1; i + 1 < nodes.size(); ++i)
                visits_[static_cast<std::size_t>(nodes[i])].push_back({truck_id(t)});
        }
        for (int d = 1; d <= inst_.n_d; ++d) {
            const auto& tour = s_.drone(d);
            for (std::size_t i = 1; i + 1 < tour.nodes.size(); ++i)
                visits_[static_cast<std::size_t>(tour.nodes[i])].push_back(
                    {drone_id(d), tour.carried[i - 1], tour.carried[i]});
        }
        for (int v = 1; v <= inst_.n_p; ++v) {
            const auto& vs = visits_[static_cast<std::size_t>(v)];
            int trucks = 0, truck = 0, drones = 0;
            for (const auto& x : vs) {
                if (x.vehicle.is_truck()) {
                    ++trucks;
                    truck = x.vehicle.index;
                } else {
                    ++drones;
                }
            }
            const std::string at = "node " + std::to_string(v);
            if (trucks > 1) {
                flag(Rule::NodeVisit, at + ": visited by " + std::to_string(trucks) + " trucks");
                continue;
            }
            if (trucks == 0) {
                if (drones > 1) flag(Rule::NodeVisit, at + ": visited by several drones without a truck");
                for (const auto& x : vs)
                    if (x.in_carried != 0 || x.out_carried != 0)
                        flag(Rule::NodeVisit, at + ": " + x.vehicle.to_string() + " rides through a node no truck visits");
                continue;
            }
            for (const auto& x : vs) {
                if (x.vehicle.is_truck()) continue;
                const bool in_ok = x.in_carried == 0 || x.in_carried == truck;
                const bool out_ok = x.out_carried == 0 || x.out_carried == truck;
                if (!in_ok || !out_ok)
                    flag(Rule::NodeVisit, at + ": " + x.vehicle.to_string() + " rides a truck that does not visit it");
                else if (x.in_carried != truck && x.out_carried != truck)
                    flag(Rule::NodeVisit, at + ": " + x.vehicle.to_string() + " neither arrives nor leaves on truck " +
                                              std::to_string(truck));
            }
        }
    }

    void coverage() {
        for (int v = 1; v <= inst_.n_p; ++v)
            if (visits_[static_cast<std::size_t>(v)].empty())
                flag(Rule::Coverage, "node " + std::to_string(v) + " is never visited");
    }

    void flights() {
        for (int d = 1; d <= inst_.n_d; ++d) {
            const auto& tour = s_.drone(d);
            std::size_t run = 0;
            double length = 0.0;
            for (std::size_t i = 0; i < tour.carried.size(); ++i) {
                if (tour.carried[i] != 0) {
                    run = 0;
                    length = 0.0;
                    continue;
                }
                ++run;
                length += euclidean(inst_.pos(tour.nodes[i]), inst_.pos(tour.nodes[i + 1]));
                const std::string at = "drone " + std::to_string(d) + " edge " + std::to_string(i);
                if (run == 3) flag(Rule::FlightLength, at + ": more than two consecutive flying edges");
                if (length > inst_.drone_range + 1e-9 && (i + 1 == tour.carried.size() || tour.carried[i + 1] != 0))
                    flag(Rule::FlightLength, at + ": flight exceeds the drone range");
            }
        }
    }

    void carry() {
        // next_on[d][u] = (v, carried) for drone d's edge leaving u
        auto edge_map = [&](const std::vector<int>& nodes) {
            std::vector<int> idx(static_cast<std::size_t>(inst_.n_p) + 1, -1);
            for (std::size_t i = 0; i + 1 < nodes.size(); ++i) idx[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
            return idx;
        };
        std::vector<std::vector<int>> drone_at, truck_at;
        for (const auto& t : s_.drones) drone_at.push_back(edge_map(t.nodes));
        for (const auto& t : s_.trucks) truck_at.push_back(edge_map(t.nodes));

        for (int t = 1; t <= inst_.n_t; ++t) {
            const auto& tour = s_.truck(t);
            for (std::size_t i = 0; i < tour.carry.size(); ++i)
                for (int d : tour.carry[i]) {
                    const auto& dt = s_.drone(d);
                    const int k = drone_at[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(tour.nodes[i])];
                    if (k < 0 || dt.nodes[static_cast<std::size_t>(k) + 1] != tour.nodes[i + 1] ||
                        dt.carried[static_cast<std::size_t>(k)] != t)
                        flag(Rule::CarryConsistency, "truck " + std::to_string(t) + " edge " + std::to_string(i) +
                                                         " carries drone " + std::to_string(d) + " which does not ride it");
                }
        }
        for (int d = 1; d <= inst_.n_d; ++d) {
            const auto& tour = s_.drone(d);
            for (std::size_t i = 0; i < tour.carried.size(); ++i) {
                const int t = tour.carried[i];
                if (t == 0) continue;
                const auto& tt = s_.truck(t);
                const int k = truck_at[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(tour.nodes[i])];
                bool ok = k >= 0 && tt.nodes[static_cast<std::size_t>(k) + 1] == tour.nodes[i + 1];
                if (ok) {
                    const auto& set = tt.carry[static_cast<std::size_t>(k)];
                    ok = std::find(set.begin(), set.end(), d) != set.end();
                }
                if (!ok)
                    flag(Rule::CarryConsistency, "drone " + std::to_string(d) + " edge " + std::to_string(i) +
                                                     " rides truck " + std::to_string(t) + " which does not carry it");
            }
        }
    }

    const Solution& s_;
    const Instance& inst_;
    FeasibilityReport report_;
    std::vector<std::vector<Visit>> visits_;
};

}  // namespace

FeasibilityReport check_almost_feasible(const Solution& s, const Instance& inst) { return Checker(s, inst).run(); }

MarkingTrace run_marking(const Solution& s, int n_p) {
    const SolutionGraph g = build_solution_graph(s, n_p);
    EdgePartition part;
    try {
        part = essentially_equal_partition(g);
    } catch (const CarryInconsistency& e) {
        throw PreconditionError(std::string("marking needs carry consistency: ") + e.what());
    }
    const std::size_t m = g.edges.size();
    std::vector<char> marked(m, 0);
    auto prev_marked = [&](std::size_t e) {
        const auto& ed = g.edges[e];
        return ed.position == 0 || marked[static_cast<std::size_t>(g.edge_id(ed.vehicle, ed.position - 1))];
    };

    MarkingTrace trace;
    std::size_t count = 0;
    for (std::size_t e = 0; e < m; ++e)
        if (g.edges[e].position == 0) {
            marked[e] = 1;
            ++count;
        }
    trace.marked_per_round.push_back(count);

    while (count < m) {
        // E* is evaluated against the marking at the start of the round.
        std::vector<char> in_star(m, 0);
        for (std::size_t e = 0; e < m; ++e) in_star[e] = prev_marked(e);
        std::vector<std::size_t> newly;
        for (std::size_t e = 0; e < m; ++e) {
            if (marked[e] || !in_star[e]) continue;
            bool all = true;
            for (int o : part.classes[static_cast<std::size_t>(part.class_of[e])]) all &= in_star[static_cast<std::size_t>(o)] != 0;
            if (all) newly.push_back(e);
        }
        if (newly.empty()) break;
        for (auto e : newly) marked[e] = 1;
        count += newly.size();
        trace.marked_per_round.push_back(count);
    }
    trace.complete = count == m;
    return trace;
}

bool check_schedule_consistency_marking(const Solution& s, int n_p) { return run_marking(s, n_p).complete; }

bool check_flip_cycles(const SolutionGraph& g) {
    // Nodes of the search are graph edges; e1 -> e2 when e1 ends where e2 starts (not the
    // depot) and the pair is not a flip.
    const std::size_t m = g.edges.size();
    auto usable = [&](const GraphEdge& e) { return e.from != 0 && e.to != 0; };
    auto is_flip = [](const GraphEdge& a, const GraphEdge& b) {
        return a.flying() && b.flying() && a.vehicle != b.vehicle;
    };

    enum : char { White, Grey, Black };
    std::vector<char> color(m, White);
    struct Frame {
        int edge;
        std::size_t next;
    };
    std::vector<Frame> stack;
    for (std::size_t root = 0; root < m; ++root) {
        if (color[root] != White || !usable(g.edges[root])) continue;
        stack.push_back({static_cast<int>(root), 0});
        color[root] = Grey;
        while (!stack.empty()) {
            auto& f = stack.back();
            const auto& cur = g.edges[static_cast<std::size_t>(f.edge)];
            const auto& outs = g.out_edges[static_cast<std::size_t>(cur.to)];
            if (f.next == outs.size()) {
                color[static_cast<std::size_t>(f.edge)] = Black;
                stack.pop_back();
                continue;
            }
            const int nxt = outs[f.next++];
            const auto& ne = g.edges[static_cast<std::size_t>(nxt)];
            if (!usable(ne) || is_flip(cur, ne)) continue;
            if (color[static_cast<std::size_t>(nxt)] == Grey) return false;
            if (color[static_cast<std::size_t>(nxt)] == White) {
                color[static_cast<std::size_t>(nxt)] = Grey;
                stack.push_back({nxt, 0});
            }
        }
    }
    return true;
}

FeasibilityReport check_feasible(const Solution& s, const Instance& inst) {
    FeasibilityReport r = check_almost_feasible(s, inst);
    if (!r.feasible()) return r;
    if (!check_schedule_consistency_marking(s, inst.n_p)) {
        r.verdict = Verdict::Inconsistent;
        r.violations.push_back({Rule::ScheduleConsistency, "marking stalls before every edge is marked"});
    }
    return r;
}

}  // namespace vrd
