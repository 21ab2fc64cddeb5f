#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fpnav/geometry/floorplan.hpp"

namespace fpnav::geometry {

// Parses the floor-plan JSON document:
//   { "scene_id": str, "floor_id": str,
//     "regions": [ { "id": int, "type": str, "polygon": [[x, y], ...] } ] }
// Throws ParseError on malformed JSON (message carries line/column) and
// SchemaError on structural violations (carrying the region id).
FloorPlan parse_floorplan(std::string_view text);

// Canonical form: regions sorted by id, CCW polygons, 2-space indent.
std::string serialize_floorplan(const FloorPlan& fp);

FloorPlan load_floorplan(const std::filesystem::path& path);
void save_floorplan(const FloorPlan& fp, const std::filesystem::path& path);

}  // namespace fpnav::geometry
