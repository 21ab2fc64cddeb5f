#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fpnav/dataset/instruction.hpp"
#include "fpnav/sim/simulator.hpp"

namespace fpnav::dataset {

struct Episode {
  std::string episode_id;
  std::string floorplan_ref;  // path or store id of the floor-plan document
  sim::AgentPose start_pose;
  geometry::Point2 goal;
  Instruction instruction;
  std::vector<geometry::Point2> gt_path;
  std::vector<sim::Action> gt_actions;  // primitives; may be empty in imported files
};

// Canonical JSON document:
//   { "episode_id", "floorplan", "start_pose": [x,y,theta], "goal": [x,y],
//     "instruction": {...}, "gt_path": [[x,y],...],
//     "gt_actions": [{"action": name, "mag": num|null}, ...] }
// gt_actions is omitted when empty.
std::string serialize_episode(const Episode& ep);
// Throws ParseError on malformed JSON and SchemaError on missing or
// inconsistent fields (including a rendered instruction that does not
// match its structured fields).
Episode parse_episode(std::string_view text);

Episode load_episode(const std::filesystem::path& path);
void save_episode(const Episode& ep, const std::filesystem::path& path);

// Reached-waypoint radius used when validating a replay.
inline constexpr double kReplayTolerance = 0.25;

// Zero-noise execution of gt_actions from the start pose.
sim::EpisodeState replay(const Episode& ep, std::shared_ptr<const sim::World> world);

// Checks the Episode invariants against its world: gt_path starts at the
// start position, the goal lies in the instruction's goal region, and the
// zero-noise replay passes within kReplayTolerance of every waypoint in
// order and ends in success. Throws SchemaError naming the violation.
void validate_episode(const Episode& ep, std::shared_ptr<const sim::World> world);

}  // namespace fpnav::dataset
