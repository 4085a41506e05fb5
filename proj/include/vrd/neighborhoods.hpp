#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vrd/model.hpp"
#include "vrd/random.hpp"
#include "vrd/route_plan.hpp"

namespace vrd {

/// Maximal run of one drone's legs that only interact with one truck. Legs are
/// [first_leg, last_leg] of plan.drones[drone - 1].
struct SpeedUpArea {
    int drone = 1;
    int truck = 1;
    int first_leg = 0;
    int last_leg = 0;
    friend bool operator==(const SpeedUpArea&, const SpeedUpArea&) = default;
};

/// Areas of every drone (or of one drone when `drone` > 0), in tour order.
std::vector<SpeedUpArea> find_speedup_areas(const RoutePlan& plan, const Instance& inst, int drone = 0);

/// A small move. The anchor is edge `offset` of leg `leg`. Types 1 and 9 anchor on ridden edges,
/// types 2 to 8 on the first edge of a flight. Type 9 needs b (the package handed to the drone),
/// a (takeoff) and c (landing); leave them at -1 to draw them.
struct SmallMove {
    int type = 0;
    int leg = 0;
    int offset = 0;
    int a = -1;
    int b = -1;
    int c = -1;
};

enum class Rejection { None, DroneRange, TruckNode, Inapplicable, Infeasible };
std::string_view rejection_name(Rejection r);

struct MoveResult {
    std::optional<RoutePlan> plan;
    Rejection reason = Rejection::None;
    SmallMove move;               // with the drawn parameters filled in
    std::uint64_t signature = 0;  // identifies the rewrite
    std::uint64_t inverse = 0;    // signature of the rewrite that undoes it
};

/// Move types applicable at an anchor of the area, ascending.
std::vector<int> applicable_moves(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area, int leg, int offset);

/// Applies a move. Draws the free parameters of type 9 from rng. The returned plan is structurally
/// sound but not yet checked against the schedule.
MoveResult apply_small_move(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area, SmallMove m, Rng& rng);

/// Anchors of an area: (leg, offset) for every drone edge of the area.
std::vector<std::pair<int, int>> area_anchors(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area);

struct SampledMove {
    RoutePlan plan;
    double objective = 0.0;
    SmallMove move;
    std::uint64_t signature = 0;
    std::uint64_t inverse = 0;
};

enum class SampleStatus { Ok, Rejected, Exhausted };

struct SampleOutcome {
    SampleStatus status = SampleStatus::Exhausted;
    std::optional<SampledMove> move;
};

/// Uniform anchor, then a uniform applicable type at it; the result is validated and scored.
/// Exhausted when no anchor of the area admits a move.
SampleOutcome sample_small_neighbor(const RoutePlan& plan, const Instance& inst, const SpeedUpArea& area, Rng& rng);

// ---------------------------------------------------------------------------
// Outer moves

struct DroneChange {
    int drone = 1;
    int truck = 1;
    int leaving = 0;   // position in the drone's tour
    int arriving = 0;  // full-tour position on the target truck
};

struct PackageChange {
    int package = 1;
    int to_truck = 1;
};

using OuterMove = std::variant<DroneChange, PackageChange>;

/// Runs SpeedUp on the given area and returns the improved plan.
using SpeedUpRunner = std::function<RoutePlan(const RoutePlan&, const SpeedUpArea&, Rng&)>;

struct OuterResult {
    std::optional<RoutePlan> plan;
    std::optional<double> objective;
    std::string reason;
};

/// Re-homes a drone. The speedup runner may be empty to skip the final local search.
OuterResult outer_drone_change(const RoutePlan& plan, const Instance& inst, const DroneChange& m,
                               const SpeedUpRunner& speedup, Rng& rng);

OuterResult outer_package_change(const RoutePlan& plan, const Instance& inst, const PackageChange& m);

/// Fair coin between the two variants with uniform parameters, retried up to `retries` times.
OuterResult sample_outer_neighbor(const RoutePlan& plan, const Instance& inst, const SpeedUpRunner& speedup, Rng& rng,
                                  int retries = 32, OuterMove* chosen = nullptr);

/// Sum of arrival times of a truck driving the order alone.
double truck_latency(const std::vector<int>& order, const Instance& inst);

}  // namespace vrd
