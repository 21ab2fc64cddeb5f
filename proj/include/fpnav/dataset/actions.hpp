#pragma once

#include <span>
#include <vector>

#include "fpnav/geometry/primitives.hpp"
#include "fpnav/sim/action.hpp"
#include "fpnav/sim/simulator.hpp"
#include "fpnav/sim/world.hpp"

namespace fpnav::eval {
class GridPlanner;
}

namespace fpnav::dataset {

// Sums maximal runs of the same kind into one composite action. Stop is
// never merged.
std::vector<sim::Action> merge_actions(std::span<const sim::Action> seq);

// Splits a composite into primitives. A magnitude that is not a multiple of
// the primitive is rounded to the nearest multiple (at least one) and a
// warning is logged.
std::vector<sim::Action> decompose_action(const sim::Action& a);
std::vector<sim::Action> decompose_actions(std::span<const sim::Action> seq);

// Within this distance a waypoint counts as reached.
inline constexpr double kWaypointTolerance = 0.5 * sim::kStepSize;

// Greedy turn-then-move compiler, simulated against `world` with zero
// noise: turn by the multiple of 15 degrees nearest the bearing to the next
// waypoint, then step forward until within kWaypointTolerance. Ends with
// Stop. When `planner` is given, waypoint pairs that are not mutually
// visible are joined by its shortest path. Throws StateError when a
// waypoint cannot be reached.
std::vector<sim::Action> compile_path_to_actions(const sim::World& world, const sim::AgentPose& start,
                                                 std::span<const geometry::Point2> path,
                                                 const eval::GridPlanner* planner = nullptr);

}  // namespace fpnav::dataset
