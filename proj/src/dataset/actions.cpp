#include "fpnav/dataset/actions.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "fpnav/error.hpp"
#include "fpnav/eval/planner.hpp"
#include "fpnav/io.hpp"

namespace fpnav::dataset {

using geometry::Point2;
using sim::Action;
using sim::ActionKind;

std::vector<Action> merge_actions(std::span<const Action> seq) {
  std::vector<Action> out;
  for (const Action& a : seq) {
    if (!out.empty() && a.kind != ActionKind::Stop && out.back().kind == a.kind) {
      out.back().magnitude += a.magnitude;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

std::vector<Action> decompose_action(const Action& a) {
  if (a.kind == ActionKind::Stop) return {Action::stop()};
  const double unit = a.primitive();
  const double ratio = a.magnitude / unit;
  const long k = std::max(1L, std::lround(ratio));
  if (std::abs(ratio - static_cast<double>(k)) > 1e-6) {
    std::ostringstream msg;
    msg << "\"" << sim::describe(a) << "\" is not a multiple of the primitive; rounded to " << k << " step"
        << (k == 1 ? "" : "s");
    log_warning(msg.str());
  }
  return std::vector<Action>(static_cast<std::size_t>(k), Action{a.kind, unit});
}

std::vector<Action> decompose_actions(std::span<const Action> seq) {
  std::vector<Action> out;
  for (const Action& a : seq) {
    const auto parts = decompose_action(a);
    out.insert(out.end(), parts.begin(), parts.end());
  }
  return out;
}

std::vector<Action> compile_path_to_actions(const sim::World& world, const sim::AgentPose& start,
                                            std::span<const Point2> path, const eval::GridPlanner* planner) {
  std::vector<Point2> targets;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Point2 from = i == 0 ? start.position() : path[i - 1];
    if (planner && !world.segment_clear({from, path[i]}, sim::kWallClearance)) {
      const auto detour = planner->shortest_path(from, path[i]);
      if (detour.size() > 2) targets.insert(targets.end(), detour.begin() + 1, detour.end() - 1);
    }
    targets.push_back(path[i]);
  }

  double length = 0.0;
  Point2 prev = start.position();
  for (const Point2& t : targets) {
    length += geometry::distance(prev, t);
    prev = t;
  }
  const auto budget = static_cast<std::size_t>(64 + 16 * std::ceil(length / sim::kStepSize));

  auto shared = std::shared_ptr<const sim::World>(&world, [](const sim::World*) {});
  sim::EpisodeState state = sim::reset(shared, start, start.position(), {});

  for (std::size_t k = 0; k < targets.size(); ++k) {
    const Point2 target = targets[k];
    while (true) {
      if (state.actions.size() > budget) {
        throw StateError("waypoint " + std::to_string(k) + " is unreachable: action budget exhausted");
      }
      const Point2 p = state.true_pose.position();
      const double d = geometry::distance(p, target);
      if (d <= kWaypointTolerance) break;

      const double bearing = std::atan2(target.x - p.x, target.y - p.y);
      const double err = sim::angle_difference(bearing, state.true_pose.theta);
      const long turns = std::lround(err / sim::kTurnAngle);
      for (long i = 0; i < std::labs(turns); ++i) sim::step(state, turns > 0 ? Action::right() : Action::left());

      const double theta = state.true_pose.theta;
      const Point2 dir{std::sin(theta), std::cos(theta)};
      const double travel = world.free_travel(p, dir, sim::kStepSize);
      const Point2 next = p + travel * dir;
      if (travel < 1e-6) {
        throw StateError("waypoint " + std::to_string(k) + " is unreachable: blocked by a wall");
      }
      if (geometry::distance(next, target) >= d - 1e-9) break;  // closest reachable approach
      sim::step(state, Action::forward());
    }
  }
  sim::step(state, Action::stop());
  return state.actions;
}

}  // namespace fpnav::dataset
