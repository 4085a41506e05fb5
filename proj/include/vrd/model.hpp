#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vrd {

/// Raised when an instance or solution document cannot be read.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Problem data. Node 0 is the depot at (0,0); packages are nodes 1..n_p.
struct Instance {
    int n_t = 1;
    int n_d = 0;
    int n_p = 0;
    double drone_range = 0.0;
    std::vector<Point> positions;  // length n_p, positions[k-1] belongs to node k

    Point pos(int node) const { return node == 0 ? Point{} : positions[static_cast<std::size_t>(node - 1)]; }

    /// Throws std::invalid_argument when a structural invariant is broken.
    void validate() const;
};

enum class VehicleKind : std::uint8_t { Truck, Drone };

struct VehicleId {
    VehicleKind kind = VehicleKind::Truck;
    int index = 1;  // 1-based within its kind

    bool is_truck() const { return kind == VehicleKind::Truck; }
    bool is_drone() const { return kind == VehicleKind::Drone; }
    std::string to_string() const;

    friend bool operator==(const VehicleId&, const VehicleId&) = default;
    friend auto operator<=>(const VehicleId&, const VehicleId&) = default;
};

inline VehicleId truck_id(int i) { return {VehicleKind::Truck, i}; }
inline VehicleId drone_id(int i) { return {VehicleKind::Drone, i}; }

/// Truck tour. carry[i] is the sorted set of drones riding on edge nodes[i] -> nodes[i+1].
/// A depot-only tour has nodes == {0} and no edges.
struct TruckTour {
    std::vector<int> nodes{0};
    std::vector<std::vector<int>> carry;

    std::size_t edge_count() const { return carry.size(); }
    friend bool operator==(const TruckTour&, const TruckTour&) = default;
};

/// Drone tour. carried[i] is the truck the drone rides on edge i, or 0 when flying.
/// Idle drones are depot-only tours.
struct DroneTour {
    std::vector<int> nodes{0};
    std::vector<int> carried;

    std::size_t edge_count() const { return carried.size(); }
    bool idle() const { return carried.empty(); }
    friend bool operator==(const DroneTour&, const DroneTour&) = default;
};

struct Solution {
    std::vector<TruckTour> trucks;  // trucks[t-1] is the tour of truck t
    std::vector<DroneTour> drones;  // drones[d-1] is the tour of drone d

    const TruckTour& truck(int t) const { return trucks[static_cast<std::size_t>(t - 1)]; }
    TruckTour& truck(int t) { return trucks[static_cast<std::size_t>(t - 1)]; }
    const DroneTour& drone(int d) const { return drones[static_cast<std::size_t>(d - 1)]; }
    DroneTour& drone(int d) { return drones[static_cast<std::size_t>(d - 1)]; }

    const std::vector<int>& nodes_of(VehicleId v) const {
        return v.is_truck() ? truck(v.index).nodes : drone(v.index).nodes;
    }
    std::size_t total_edges() const;

    friend bool operator==(const Solution&, const Solution&) = default;
};

/// Solution where every drone is idle and every truck carries nothing.
Solution make_truck_solution(const Instance& inst, const std::vector<std::vector<int>>& truck_orders);

// ---------------------------------------------------------------------------
// Documents

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

std::string serialize_solution(const Solution& s);
/// Reads a solution document and checks indices against inst.
Solution parse_solution(std::string_view text, const Instance& inst);

// ---------------------------------------------------------------------------
// Solution multigraph

struct GraphEdge {
    int from = 0;
    int to = 0;
    VehicleId vehicle;
    int position = 0;        // edge index inside the owning tour
    std::vector<int> carry;  // truck edges: drones aboard
    int carried = 0;         // drone edges: truck ridden, 0 = flying

    bool flying() const { return vehicle.is_drone() && carried == 0; }
};

struct SolutionGraph {
    int node_count = 0;  // nodes 0..node_count-1
    std::vector<GraphEdge> edges;
    std::vector<std::vector<int>> out_edges;  // per node, edge ids
    std::vector<std::vector<int>> in_edges;

    /// Edge id of edge `position` of vehicle v's tour.
    int edge_id(VehicleId v, int position) const;

    std::vector<std::size_t> truck_offset;  // first edge id of each truck tour
    std::vector<std::size_t> drone_offset;
};

SolutionGraph build_solution_graph(const Solution& s, int n_p);

/// Raised when truck and drone carry annotations disagree.
class CarryInconsistency : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Groups edges traversed jointly. class_of[e] is the class index of edge e.
struct EdgePartition {
    std::vector<std::vector<int>> classes;
    std::vector<int> class_of;
};

/// Throws CarryInconsistency when carry annotations do not match.
EdgePartition essentially_equal_partition(const SolutionGraph& g);

}  // namespace vrd
