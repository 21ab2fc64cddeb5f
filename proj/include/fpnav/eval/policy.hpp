#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "fpnav/eval/planner.hpp"
#include "fpnav/sim/simulator.hpp"

namespace fpnav::eval {

enum class PolicyKind { oracle_closed_loop, dead_reckoning, random, external };

std::string_view to_string(PolicyKind kind);
// Accepts the full names plus the CLI shorthands "oracle" and "deadreck".
PolicyKind policy_kind_from_string(std::string_view name);

struct PolicySpec {
  PolicyKind kind = PolicyKind::oracle_closed_loop;
  std::size_t max_steps = 500;
  std::size_t replan_period = 1;  // steps between lookahead refreshes
  std::uint64_t seed = 0;         // random policy draws
  double stop_probability = 0.02; // random policy
  std::string command;            // external policy, run through /bin/sh -c
};

// The policy's picture of the world: a floor plan that may differ from the
// true one (jittered, masked or substituted) and planners over it. Built
// once and shared between episodes.
class PolicyMap {
 public:
  // `wide` keeps well away from walls; `narrow` is the fallback when the
  // goal is unreachable with the wide clearance.
  PolicyMap(geometry::FloorPlan plan, PlannerOptions base);

  const geometry::FloorPlan& plan() const { return plan_; }
  const GridPlanner& wide() const { return wide_; }
  const GridPlanner& narrow() const { return narrow_; }

 private:
  geometry::FloorPlan plan_;
  GridPlanner wide_;
  GridPlanner narrow_;
};

inline constexpr double kWidePlannerClearance = 0.25;
inline constexpr double kHeadingTolerance = sim::kTurnAngle / 2.0;
inline constexpr double kOracleStopDistance = 0.5 * sim::kSuccessDistance;
inline constexpr double kLookaheadHorizon = 2.0;

class Policy {
 public:
  virtual ~Policy() = default;
  virtual sim::Action act(const sim::EpisodeState& state) = 0;
  // Why the policy gave up, when it did.
  virtual std::string diagnostic() const { return {}; }
};

// Plans over `map` from the true pose (oracle_closed_loop) or the
// dead-reckoned pose (dead_reckoning), both projected onto the plan by the
// episode's scale multiplier. Turns when the bearing to the lookahead
// point differs by more than kHeadingTolerance (exactly 180 degrees turns
// right), otherwise moves forward, and stops within kOracleStopDistance of
// the goal. An unreachable goal yields an immediate Stop.
std::unique_ptr<Policy> make_planning_policy(std::shared_ptr<const PolicyMap> map, geometry::Point2 goal,
                                             bool use_true_pose, std::size_t replan_period = 1);

// Keyed uniform draws: Stop with the given probability, otherwise forward
// half of the time and each turn a quarter.
std::unique_ptr<Policy> make_random_policy(std::uint64_t seed, double stop_probability);

// Line-delimited JSON over a child process's stdin/stdout. Each step the
// child receives
//   {"step", "episode_id", "instruction", "pose": [x,y,theta], "goal": [x,y]}
// (pose is the dead-reckoned plan-space pose) and answers
//   {"action": "MoveForward|TurnLeft|TurnRight|Stop", "magnitude": num|null}.
// Composite answers are decomposed and executed one primitive per step.
// Throws Error on a malformed answer or when the child exits.
std::unique_ptr<Policy> make_external_policy(const std::string& command, std::string episode_id,
                                             std::string instruction, geometry::Point2 goal);

}  // namespace fpnav::eval
