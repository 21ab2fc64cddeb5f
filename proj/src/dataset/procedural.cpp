#include "fpnav/dataset/procedural.hpp"

#include <algorithm>
#include <cmath>

#include "fpnav/dataset/catalog.hpp"
#include "fpnav/error.hpp"
#include "fpnav/random.hpp"

namespace fpnav::dataset {

using geometry::Point2;

namespace {

geometry::Polygon rect(double x0, double y0, double x1, double y1) {
  return geometry::Polygon::from_vertices({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

}  // namespace

geometry::FloorPlan gen_synthetic_floorplan(const ProceduralSpec& spec) {
  if (spec.room_count < 1) throw SchemaError("room count must be at least 1");
  if (!(spec.min_room_size >= geometry::kDoorwayMinWidth)) {
    throw SchemaError("minimum room size is below the doorway width");
  }
  if (!(spec.max_room_size >= spec.min_room_size)) throw SchemaError("room size bounds are inverted");
  if (!(spec.corridor_width >= geometry::kDoorwayMinWidth)) throw SchemaError("corridor is narrower than a doorway");
  if (!(spec.room_gap > 0.0)) throw SchemaError("room gap must be positive");

  // Cheapest possible layout first, so impossible specs fail before drawing.
  const int per_side = (spec.room_count + 1) / 2;
  const double min_length = per_side * spec.min_room_size + (per_side - 1) * spec.room_gap;
  const double min_depth = spec.corridor_width + (spec.room_count > 1 ? 2.0 : 1.0) * spec.min_room_size;
  if (min_length > spec.max_extent || min_depth > spec.max_extent) {
    throw SchemaError("rooms cannot fit within the maximum extent of " + std::to_string(spec.max_extent) + " m");
  }

  Rng rng(spec.seed);
  const auto& catalog = region_type_catalog();
  const double cw = spec.corridor_width;

  struct Room {
    double x0, y0, x1, y1;
    std::string type;
  };
  std::vector<Room> rooms;
  double cursor[2] = {0.0, 0.0};
  for (int k = 0; k < spec.room_count; ++k) {
    const int side = k % 2;
    const double w = rng.uniform(spec.min_room_size, spec.max_room_size);
    const double d = rng.uniform(spec.min_room_size, spec.max_room_size);
    std::string type;
    do {
      type = std::string(catalog[rng.index(catalog.size())]);
    } while (type == kCorridorType);
    const double x0 = cursor[side];
    if (side == 0) {
      rooms.push_back({x0, cw, x0 + w, cw + d, type});
    } else {
      rooms.push_back({x0, -d, x0 + w, 0.0, type});
    }
    cursor[side] = x0 + w + spec.room_gap;
  }
  const double length = std::max(cursor[0], cursor[1]) - spec.room_gap;
  double top = cw, bottom = 0.0;
  for (const auto& r : rooms) {
    top = std::max(top, r.y1);
    bottom = std::min(bottom, r.y0);
  }
  if (length > spec.max_extent || top - bottom > spec.max_extent) {
    throw SchemaError("rooms cannot fit within the maximum extent of " + std::to_string(spec.max_extent) + " m");
  }

  std::vector<geometry::Region> regions;
  regions.push_back({rect(0.0, 0.0, length, cw), std::string(kCorridorType), 0});
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    const auto& r = rooms[i];
    regions.push_back({rect(r.x0, r.y0, r.x1, r.y1), r.type, static_cast<int>(i + 1)});
  }
  std::string scene = spec.scene_id.empty() ? "proc-" + std::to_string(spec.seed) : spec.scene_id;
  return geometry::FloorPlan(std::move(scene), "0", std::move(regions));
}

}  // namespace fpnav::dataset
