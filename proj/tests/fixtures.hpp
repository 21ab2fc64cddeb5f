#pragma once

#include <numbers>
#include <utility>
#include <vector>

#include "fpnav/dataset/episode.hpp"
#include "fpnav/dataset/generate.hpp"
#include "fpnav/dataset/instruction.hpp"
#include "fpnav/dataset/qa.hpp"
#include "support.hpp"

namespace fpnav::testing {

// Three 4 x 4 rooms in a row; the agent walks east from room 1 to room 3.
inline geometry::FloorPlan row_plan() {
  return geometry::FloorPlan("row", "0", {rect(1, "kitchen", 0, 0, 4, 4), rect(2, "hallway", 4, 0, 8, 4),
                                          rect(3, "bedroom", 8, 0, 12, 4)});
}

inline dataset::Episode row_episode(const std::string& stop = "next to the bed") {
  dataset::Episode ep;
  ep.episode_id = "row-0000";
  ep.floorplan_ref = "row.json";
  ep.start_pose = {1, 2, std::numbers::pi / 2};
  ep.goal = {11, 2};
  ep.instruction = dataset::make_instruction(0, "kitchen", 1, "bedroom", 3, stop);
  ep.gt_path = dataset::densify_path({{1, 2}, {11, 2}}, 0.5);
  ep.gt_actions.assign(40, sim::Action::forward());
  ep.gt_actions.push_back(sim::Action::stop());
  return ep;
}

// Hand-checked stages for row_episode. The agent sits at x = 1 + 0.25 t;
// the boundary at x = 4 belongs to room 1 and the one at x = 8 to room 2.
inline std::vector<std::pair<std::size_t, dataset::ReasoningStage>> row_stage_fixture() {
  using S = dataset::ReasoningStage;
  return {
      {0, S::initialization},  {1, S::initialization},  {5, S::initialization},  {10, S::initialization},
      {12, S::initialization}, {13, S::navigation},     {14, S::navigation},     {16, S::navigation},
      {18, S::navigation},     {20, S::navigation},     {22, S::navigation},     {24, S::navigation},
      {27, S::navigation},     {28, S::navigation},     {29, S::termination},    {30, S::termination},
      {33, S::termination},    {36, S::termination},    {39, S::termination},    {40, S::termination},
  };
}

}  // namespace fpnav::testing
