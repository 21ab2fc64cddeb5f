#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fpnav/dataset/generate.hpp"
#include "fpnav/dataset/procedural.hpp"
#include "fpnav/geometry/floorplan.hpp"
#include "fpnav/sim/world.hpp"

namespace fpnav::testing {

inline geometry::Region rect(int id, std::string type, double x0, double y0, double x1, double y1) {
  return {geometry::Polygon::from_vertices({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}), std::move(type), id};
}

// Two 4x4 rooms side by side sharing the edge x = 4.
inline geometry::FloorPlan two_rooms() {
  return geometry::FloorPlan("two", "0", {rect(1, "kitchen", 0, 0, 4, 4), rect(2, "office", 4, 0, 8, 4)});
}

// A single 40 x 40 room with no interior walls.
inline geometry::FloorPlan arena() { return geometry::FloorPlan("arena", "0", {rect(0, "gym", -20, -20, 20, 20)}); }

inline std::shared_ptr<const sim::World> world_of(geometry::FloorPlan fp) {
  return std::make_shared<const sim::World>(std::move(fp));
}

struct GeneratedSet {
  std::vector<std::shared_ptr<const sim::World>> worlds;
  std::vector<dataset::Episode> episodes;
  std::vector<std::size_t> world_of_episode;
};

// `plans` procedural plans with `per_plan` episodes each.
inline GeneratedSet generated_set(std::size_t plans, std::size_t per_plan, int rooms = 6, std::uint64_t seed = 1) {
  GeneratedSet set;
  for (std::size_t i = 0; i < plans; ++i) {
    dataset::ProceduralSpec spec;
    spec.room_count = rooms;
    spec.seed = seed + i;
    auto fp = dataset::gen_synthetic_floorplan(spec);
    dataset::EpisodeGenOptions o;
    o.count = per_plan;
    o.seed = seed * 1000 + i;
    o.floorplan_ref = fp.scene_id() + ".json";
    auto eps = dataset::gen_episodes(fp, o);
    set.worlds.push_back(world_of(std::move(fp)));
    for (auto& e : eps) {
      set.episodes.push_back(std::move(e));
      set.world_of_episode.push_back(i);
    }
  }
  return set;
}

}  // namespace fpnav::testing
