#pragma once

#include "fpnav/geometry/floorplan.hpp"

namespace fpnav::sim {

// Agents never get closer than this to a wall segment.
inline constexpr double kWallClearance = 0.05;

// A floor plan together with its derived wall set. Immutable; share it
// between episodes through std::shared_ptr<const World>.
class World {
 public:
  explicit World(geometry::FloorPlan plan, const geometry::WallOptions& wall_options = {});

  const geometry::FloorPlan& plan() const { return plan_; }
  const geometry::WallSet& walls() const { return walls_; }

  // Distance to the nearest wall segment (infinity if there are none).
  double wall_distance(geometry::Point2 p) const;

  // Inside some region and at least `clearance` from every wall.
  bool in_free_space(geometry::Point2 p, double clearance = kWallClearance) const;

  // Largest s in [0, length] such that moving from `from` along unit
  // direction `dir` by s never brings the point within `clearance` of a wall.
  double free_travel(geometry::Point2 from, geometry::Point2 dir, double length,
                     double clearance = kWallClearance) const;

  // True when the straight segment stays at least `clearance` from walls.
  bool segment_clear(const geometry::Segment& s, double clearance) const;

 private:
  geometry::FloorPlan plan_;
  geometry::WallSet walls_;
};

}  // namespace fpnav::sim
