#pragma once

#include <stdexcept>
#include <vector>

#include "vrd/model.hpp"

namespace vrd {

/// How an edge is traversed. Trucks and drones riding a truck follow streets.
enum class Traversal { Street, Flying };

/// Travel time at unit speed: Manhattan on streets, Euclidean in the air.
double edge_length(Traversal kind, Point a, Point b);

/// Raised when the timetable cannot be completed because vehicles wait on each other forever.
class ScheduleStall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VehicleTimes {
    std::vector<double> arrival;    // per tour position
    std::vector<double> departure;  // per tour position; the final depot has departure == arrival
};

struct Delivery {
    double time = 0.0;
    VehicleId vehicle;
};

struct Schedule {
    std::vector<VehicleTimes> trucks;
    std::vector<VehicleTimes> drones;
    std::vector<Delivery> deliveries;  // indexed by node; entry 0 unused

    const VehicleTimes& times(VehicleId v) const {
        return v.is_truck() ? trucks[static_cast<std::size_t>(v.index - 1)] : drones[static_cast<std::size_t>(v.index - 1)];
    }
};

/// Timetable of a feasible solution, including delivery attribution.
/// Throws ScheduleStall if the vehicles deadlock and CarryInconsistency if annotations disagree.
Schedule compute_schedule(const Solution& s, const Instance& inst);

/// First eligible arrival per package: a drone that already delivered on its current flight is
/// skipped; ties go to trucks, then to the lower index.
std::vector<Delivery> attribute_deliveries(const Solution& s, const Schedule& sched, int n_p);

/// Average delivery time.
double objective(const Solution& s, const Instance& inst);

}  // namespace vrd
