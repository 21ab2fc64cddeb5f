#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fpnav/dataset/episode.hpp"
#include "fpnav/geometry/floorplan.hpp"

namespace fpnav::dataset {

struct EpisodeGenOptions {
  std::size_t count = 10;
  std::uint64_t seed = 0;
  std::string floorplan_ref;     // stored in every episode
  double wall_margin = 0.5;      // start and goal keep this far from walls
  double min_separation = 4.0;   // straight-line start-goal distance
  std::size_t min_regions = 3;   // compressed trace length
  double path_clearance = 0.3;   // planner clearance for the ground-truth path
  double waypoint_spacing = 0.5; // gt_path is resampled to at most this spacing
  std::size_t max_attempts = 0;  // 0 means 50 * count
};

struct GenerationReport {
  std::size_t attempts = 0;
  std::map<std::string, std::size_t> rejections;
};

// Samples start and goal in distinct regions, plans a clearance-respecting
// path, compiles it to primitives and keeps the episode only when the
// replay validates and the trace passes filter_episodes. Throws StateError
// when fewer than `count` episodes are found within the attempt budget.
std::vector<Episode> gen_episodes(const geometry::FloorPlan& fp, const EpisodeGenOptions& options,
                                  GenerationReport* report = nullptr);

struct FilterReport {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::map<std::string, std::size_t> rejected;  // reason -> count
};

// Drops episodes whose gt_path leaves the plan or whose compressed trace
// revisits a region.
std::vector<Episode> filter_episodes(std::vector<Episode> episodes, const geometry::FloorPlan& fp,
                                     FilterReport* report = nullptr);

// Inserts points so consecutive waypoints are at most `spacing` apart.
std::vector<geometry::Point2> densify_path(const std::vector<geometry::Point2>& path, double spacing);

}  // namespace fpnav::dataset
