#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpnav/geometry/floorplan.hpp"

namespace fpnav::dataset {

struct TraceEntry {
  int region_id = 0;
  std::string region_type;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct WaypointLabel {
  std::size_t index = 0;
  std::optional<TraceEntry> region;  // none when outside every region
};

struct RegionTrace {
  std::vector<WaypointLabel> per_waypoint;
  // Consecutive repeats removed; waypoints outside every region are skipped.
  std::vector<TraceEntry> compressed;
};

RegionTrace annotate_trajectory(const geometry::FloorPlan& fp, std::span<const geometry::Point2> waypoints);

// Compressed trace of the first `count` per-waypoint labels.
std::vector<TraceEntry> compress_prefix(const RegionTrace& trace, std::size_t count);

inline constexpr const char* kRejectOffPlan = "off_plan";
inline constexpr const char* kRejectRevisit = "revisit";

// Why a trace would be filtered out, or nullopt when it is kept.
std::optional<std::string> rejection_reason(const RegionTrace& trace);

}  // namespace fpnav::dataset
