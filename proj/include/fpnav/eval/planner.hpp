#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fpnav/geometry/floorplan.hpp"
#include "fpnav/sim/world.hpp"

namespace fpnav::eval {

struct PlannerOptions {
  double resolution = 0.1;
  double clearance = sim::kWallClearance;
  // Plan-space rectangle whose content is unknown: treated as free space
  // and any walls inside it are ignored.
  std::optional<geometry::Box> unknown_area;
  // Points within this distance outside a region still count as inside.
  // Lets a distorted map keep doorways that no longer coincide exactly.
  double boundary_slack = 0.0;
  geometry::WallOptions walls;
};

class DistanceField;

// 8-connected lattice search over free space. Lattice nodes sit at integer
// multiples of the resolution in plan coordinates; diagonal moves cost
// sqrt(2) * resolution. Immutable after construction.
class GridPlanner {
 public:
  explicit GridPlanner(const geometry::FloorPlan& fp, PlannerOptions options = {});

  const PlannerOptions& options() const { return options_; }

  // Inside a region (or the unknown area) with the configured clearance.
  bool is_free(geometry::Point2 p) const;
  // Straight segment keeps at least `clearance` from every wall.
  bool visible(geometry::Point2 a, geometry::Point2 b, double clearance) const;
  bool visible(geometry::Point2 a, geometry::Point2 b) const { return visible(a, b, options_.clearance); }
  double wall_distance(geometry::Point2 p) const;

  // Free-space geodesic length; infinity when disconnected. Throws
  // StateError when an endpoint is in a wall or outside every region.
  double shortest_path_length(geometry::Point2 a, geometry::Point2 b) const;
  // Lattice path a -> ... -> b, empty when disconnected.
  std::vector<geometry::Point2> shortest_path(geometry::Point2 a, geometry::Point2 b) const;

  DistanceField distance_field(geometry::Point2 goal) const;

  std::size_t node_count() const { return free_.size(); }

 private:
  friend class DistanceField;

  struct Attach {
    std::size_t node;
    double cost;
  };

  std::size_t index(long i, long j) const { return static_cast<std::size_t>((j - j0_) * nx_ + (i - i0_)); }
  geometry::Point2 node_point(std::size_t n) const;
  std::vector<Attach> attachments(geometry::Point2 p, double radius) const;
  void require_endpoint(geometry::Point2 p, const char* which) const;
  // Multi-source Dijkstra; stops early once every node in `targets` is settled.
  std::vector<double> dijkstra(const std::vector<Attach>& sources, std::vector<std::size_t>* parent,
                               const std::vector<Attach>* targets) const;
  std::vector<std::size_t> nearby_walls(const geometry::Box& box) const;

  geometry::FloorPlan plan_;
  PlannerOptions options_;
  std::vector<geometry::Segment> walls_;
  long i0_ = 0, j0_ = 0, nx_ = 0, ny_ = 0;
  std::vector<std::uint8_t> free_;
  std::vector<std::uint8_t> edges_;  // bit k: edge to neighbour k is traversable

  // Spatial hash of wall segments.
  double bucket_size_ = 1.0;
  double bx0_ = 0.0, by0_ = 0.0;
  long bnx_ = 0, bny_ = 0;
  std::vector<std::vector<std::size_t>> buckets_;
};

// Single-goal cost-to-go over the lattice, for repeated closed-loop queries.
class DistanceField {
 public:
  bool reachable_from(geometry::Point2 p) const;
  // Geodesic distance from p to the goal; infinity when disconnected.
  double distance_from(geometry::Point2 p) const;
  // Farthest node among the first horizon / resolution lattice steps of
  // the descending path that is directly visible from p; the goal itself
  // when visible.
  std::optional<geometry::Point2> lookahead(geometry::Point2 p, double horizon) const;
  geometry::Point2 goal() const { return goal_; }

 private:
  friend class GridPlanner;
  DistanceField(const GridPlanner& planner, geometry::Point2 goal, std::vector<double> cost)
      : planner_(&planner), goal_(goal), cost_(std::move(cost)) {}

  std::optional<std::size_t> entry_node(geometry::Point2 p) const;

  const GridPlanner* planner_;
  geometry::Point2 goal_;
  std::vector<double> cost_;
};

}  // namespace fpnav::eval
