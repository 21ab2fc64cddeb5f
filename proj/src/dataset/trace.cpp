#include "fpnav/dataset/trace.hpp"

#include <algorithm>
#include <set>

namespace fpnav::dataset {

RegionTrace annotate_trajectory(const geometry::FloorPlan& fp, std::span<const geometry::Point2> waypoints) {
  RegionTrace trace;
  trace.per_waypoint.reserve(waypoints.size());
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    WaypointLabel label{i, std::nullopt};
    if (const geometry::Region* r = geometry::locate_region(fp, waypoints[i])) label.region = TraceEntry{r->id, r->type};
    trace.per_waypoint.push_back(std::move(label));
  }
  trace.compressed = compress_prefix(trace, trace.per_waypoint.size());
  return trace;
}

std::vector<TraceEntry> compress_prefix(const RegionTrace& trace, std::size_t count) {
  std::vector<TraceEntry> out;
  count = std::min(count, trace.per_waypoint.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto& r = trace.per_waypoint[i].region;
    if (!r) continue;
    if (out.empty() || !(out.back() == *r)) out.push_back(*r);
  }
  return out;
}

std::optional<std::string> rejection_reason(const RegionTrace& trace) {
  for (const auto& w : trace.per_waypoint) {
    if (!w.region) return std::string(kRejectOffPlan);
  }
  std::set<int> seen;
  for (const auto& e : trace.compressed) {
    if (!seen.insert(e.region_id).second) return std::string(kRejectRevisit);
  }
  return std::nullopt;
}

}  // namespace fpnav::dataset
