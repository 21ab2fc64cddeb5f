#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fpnav/geometry/primitives.hpp"

namespace fpnav::geometry {

// Tolerance under which a point counts as lying on a polygon edge.
inline constexpr double kBoundaryTolerance = 1e-9;

// Simple polygon, stored counter-clockwise with implicit closure.
class Polygon {
 public:
  Polygon() = default;

  // Validates (>= 3 finite vertices, no zero-length edges, simple, positive
  // area) and normalizes to CCW by reversing all vertices after the first.
  // Throws SchemaError.
  static Polygon from_vertices(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Segment edge(std::size_t i) const { return {vertices_[i], vertices_[(i + 1) % vertices_.size()]}; }

  double area() const;
  Point2 centroid() const;
  Box bounds() const { return bounding_box(vertices_); }

 private:
  explicit Polygon(std::vector<Point2> v) : vertices_(std::move(v)) {}
  std::vector<Point2> vertices_;
};

// True when no two non-adjacent edges touch and adjacent edges share only
// their common vertex.
bool is_simple(const std::vector<Point2>& ring);

struct Region {
  Polygon polygon;
  std::string type;
  int id = 0;
};

class FloorPlan {
 public:
  FloorPlan() = default;

  // Validates ids, types and bounds; regions are stored sorted by id.
  FloorPlan(std::string scene_id, std::string floor_id, std::vector<Region> regions);

  const std::string& scene_id() const { return scene_id_; }
  const std::string& floor_id() const { return floor_id_; }
  const std::vector<Region>& regions() const { return regions_; }
  const std::vector<std::string>& type_catalog() const { return type_catalog_; }

  const Region* find(int region_id) const;
  const Region& at(int region_id) const;
  std::size_t type_index(const std::string& type) const;
  Box bounds() const { return bounds_; }

 private:
  std::string scene_id_;
  std::string floor_id_;
  std::vector<Region> regions_;
  std::vector<std::string> type_catalog_;
  Box bounds_;
};

enum class Containment { inside, on_boundary, outside };

Containment point_in_polygon(Point2 p, const Polygon& poly);

// Region containing p; boundary counts as inside and ties go to the
// smallest region id.
const Region* locate_region(const FloorPlan& fp, Point2 p);

// Pole of inaccessibility: the interior point farthest from the boundary,
// located to within `precision` meters.
Point2 pole_of_inaccessibility(const Polygon& poly, double precision = 0.01);

// Signed distance to the polygon boundary: positive inside.
double signed_boundary_distance(Point2 p, const Polygon& poly);

inline constexpr double kDoorwayMinWidth = 0.6;
inline constexpr double kCoincidenceTolerance = 1e-6;

struct WallSegment {
  Segment segment;
  int region_id = 0;
};

// A shared boundary portion seen from one side. Every doorway therefore
// appears twice, once per owning region.
struct Doorway {
  Segment segment;
  int region_id = 0;
  int neighbor_id = 0;
};

struct WallSet {
  std::vector<WallSegment> walls;
  std::vector<Doorway> doorways;
};

struct WallOptions {
  double lateral_tolerance = kCoincidenceTolerance;
  double min_doorway = kDoorwayMinWidth;
};

WallSet extract_walls(const FloorPlan& fp, const WallOptions& options = {});

// Unordered pairs (i, j) with i < j.
using Adjacency = std::set<std::pair<int, int>>;

Adjacency region_adjacency(const FloorPlan& fp);
Adjacency region_adjacency(const WallSet& walls);

}  // namespace fpnav::geometry
