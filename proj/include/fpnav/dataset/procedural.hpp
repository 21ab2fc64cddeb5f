#pragma once

#include <cstdint>
#include <string>

#include "fpnav/geometry/floorplan.hpp"

namespace fpnav::dataset {

struct ProceduralSpec {
  int room_count = 4;
  double min_room_size = 3.0;  // meters, applies to both room width and depth
  double max_room_size = 5.0;
  double corridor_width = 2.0;
  double room_gap = 0.2;       // wall thickness between neighbouring rooms
  double max_extent = 80.0;    // longest allowed side of the whole plan
  std::uint64_t seed = 0;
  std::string scene_id;        // defaults to "proc-<seed>"
};

// Corridor spine (id 0) with rooms alternating above and below it. Each
// room shares its full width with the corridor, and neighbouring rooms are
// separated by `room_gap`, so every room connects only to the corridor.
// Throws SchemaError when the spec cannot be satisfied.
geometry::FloorPlan gen_synthetic_floorplan(const ProceduralSpec& spec);

}  // namespace fpnav::dataset
