#include "fpnav/geometry/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "fpnav/error.hpp"

namespace fpnav::geometry {

namespace {

constexpr double kFoldTolerance = 1e-12;

bool adjacent_edges_fold(Point2 prev, Point2 shared, Point2 next) {
  // Adjacent edges overlap when the far endpoint of one lies on the other.
  return point_segment_distance(next, {prev, shared}) <= kFoldTolerance ||
         point_segment_distance(prev, {shared, next}) <= kFoldTolerance;
}

}  // namespace

bool is_simple(const std::vector<Point2>& ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacent_edges_fold(ring[i], ring[(i + 1) % n], ring[(i + 2) % n])) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Segment ei{ring[i], ring[(i + 1) % n]};
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(ei, {ring[j], ring[(j + 1) % n]})) return false;
    }
  }
  return true;
}

Polygon Polygon::from_vertices(std::vector<Point2> vertices) {
  if (vertices.size() < 3) throw SchemaError("polygon needs at least 3 vertices");
  for (const Point2& v : vertices) {
    if (!is_finite(v)) throw SchemaError("polygon has a non-finite coordinate");
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] == vertices[(i + 1) % vertices.size()]) {
      throw SchemaError("polygon has a zero-length edge");
    }
  }
  if (!is_simple(vertices)) throw SchemaError("polygon is self-intersecting");
  const double a2 = signed_area2(vertices);
  if (!(std::abs(a2) > 0.0)) throw SchemaError("polygon has zero area");
  if (a2 < 0.0) std::reverse(vertices.begin() + 1, vertices.end());
  return Polygon(std::move(vertices));
}

double Polygon::area() const { return std::abs(signed_area2(vertices_)) / 2.0; }

Point2 Polygon::centroid() const {
  double cx = 0.0;
  double cy = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = vertices_[i];
    const Point2 q = vertices_[(i + 1) % n];
    const double c = cross(p, q);
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  const double a6 = 3.0 * signed_area2(vertices_);
  return {cx / a6, cy / a6};
}

FloorPlan::FloorPlan(std::string scene_id, std::string floor_id, std::vector<Region> regions)
    : scene_id_(std::move(scene_id)), floor_id_(std::move(floor_id)), regions_(std::move(regions)) {
  if (regions_.empty()) throw SchemaError("floor plan has no regions");
  std::sort(regions_.begin(), regions_.end(),
            [](const Region& a, const Region& b) { return a.id < b.id; });
  std::vector<Point2> all;
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    const Region& r = regions_[i];
    if (r.id < 0) throw SchemaError("region id must be non-negative", r.id);
    if (i > 0 && regions_[i - 1].id == r.id) {
      throw SchemaError("duplicate region id " + std::to_string(r.id), r.id);
    }
    if (r.type.empty()) throw SchemaError("region " + std::to_string(r.id) + " has an empty type", r.id);
    if (r.polygon.size() < 3) throw SchemaError("region " + std::to_string(r.id) + " has no polygon", r.id);
    all.insert(all.end(), r.polygon.vertices().begin(), r.polygon.vertices().end());
    type_catalog_.push_back(r.type);
  }
  std::sort(type_catalog_.begin(), type_catalog_.end());
  type_catalog_.erase(std::unique(type_catalog_.begin(), type_catalog_.end()), type_catalog_.end());
  bounds_ = bounding_box(all);
  if (!(bounds_.width() > 0.0) || !(bounds_.height() > 0.0)) {
    throw SchemaError("floor plan bounding box is degenerate");
  }
}

const Region* FloorPlan::find(int region_id) const {
  auto it = std::lower_bound(regions_.begin(), regions_.end(), region_id,
                             [](const Region& r, int id) { return r.id < id; });
  return (it != regions_.end() && it->id == region_id) ? &*it : nullptr;
}

const Region& FloorPlan::at(int region_id) const {
  const Region* r = find(region_id);
  if (!r) throw SchemaError("unknown region id " + std::to_string(region_id), region_id);
  return *r;
}

std::size_t FloorPlan::type_index(const std::string& type) const {
  auto it = std::lower_bound(type_catalog_.begin(), type_catalog_.end(), type);
  if (it == type_catalog_.end() || *it != type) throw SchemaError("type not in catalog: " + type);
  return static_cast<std::size_t>(it - type_catalog_.begin());
}

Containment point_in_polygon(Point2 p, const Polygon& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(p, poly.edge(i)) <= kBoundaryTolerance) return Containment::on_boundary;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x_cross = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside ? Containment::inside : Containment::outside;
}

const Region* locate_region(const FloorPlan& fp, Point2 p) {
  for (const Region& r : fp.regions()) {
    Box b = r.polygon.bounds();
    if (p.x < b.min_x - kBoundaryTolerance || p.x > b.max_x + kBoundaryTolerance ||
        p.y < b.min_y - kBoundaryTolerance || p.y > b.max_y + kBoundaryTolerance) {
      continue;
    }
    if (point_in_polygon(p, r.polygon) != Containment::outside) return &r;
  }
  return nullptr;
}

double signed_boundary_distance(Point2 p, const Polygon& poly) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) d = std::min(d, point_segment_distance(p, poly.edge(i)));
  return point_in_polygon(p, poly) == Containment::outside ? -d : d;
}

Point2 pole_of_inaccessibility(const Polygon& poly, double precision) {
  struct Cell {
    Point2 c;
    double half;
    double d;
    double max;
  };
  auto make = [&](Point2 c, double half) {
    const double d = signed_boundary_distance(c, poly);
    return Cell{c, half, d, d + half * std::sqrt(2.0)};
  };
  auto cmp = [](const Cell& a, const Cell& b) { return a.max < b.max; };
  std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> queue(cmp);

  const Box b = poly.bounds();
  const double size = std::min(b.width(), b.height());
  const double half = size / 2.0;
  for (double x = b.min_x; x < b.max_x; x += size) {
    for (double y = b.min_y; y < b.max_y; y += size) queue.push(make({x + half, y + half}, half));
  }
  Cell best = make(poly.centroid(), 0.0);
  const Cell box_center = make({b.min_x + b.width() / 2.0, b.min_y + b.height() / 2.0}, 0.0);
  if (box_center.d > best.d) best = box_center;

  while (!queue.empty()) {
    Cell cell = queue.top();
    queue.pop();
    if (cell.d > best.d) best = cell;
    if (cell.max - best.d <= precision) continue;
    const double h = cell.half / 2.0;
    queue.push(make({cell.c.x - h, cell.c.y - h}, h));
    queue.push(make({cell.c.x + h, cell.c.y - h}, h));
    queue.push(make({cell.c.x - h, cell.c.y + h}, h));
    queue.push(make({cell.c.x + h, cell.c.y + h}, h));
  }
  return best.c;
}

namespace {

using Interval = std::pair<double, double>;

std::vector<Interval> merge_intervals(std::vector<Interval> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<Interval> out;
  for (const Interval& i : iv) {
    if (!out.empty() && i.first <= out.back().second + 1e-12) {
      out.back().second = std::max(out.back().second, i.second);
    } else {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace

WallSet extract_walls(const FloorPlan& fp, const WallOptions& options) {
  WallSet out;
  const auto& regions = fp.regions();
  for (const Region& r : regions) {
    for (std::size_t i = 0; i < r.polygon.size(); ++i) {
      const Segment e = r.polygon.edge(i);
      const double len = e.length();
      const Point2 u = (1.0 / len) * (e.b - e.a);

      std::map<int, std::vector<Interval>> shared;
      for (const Region& s : regions) {
        if (s.id == r.id) continue;
        for (std::size_t j = 0; j < s.polygon.size(); ++j) {
          const Segment f = s.polygon.edge(j);
          if (std::abs(cross(u, f.a - e.a)) > options.lateral_tolerance ||
              std::abs(cross(u, f.b - e.a)) > options.lateral_tolerance) {
            continue;
          }
          const double ta = dot(f.a - e.a, u);
          const double tb = dot(f.b - e.a, u);
          const double lo = std::max(0.0, std::min(ta, tb));
          const double hi = std::min(len, std::max(ta, tb));
          if (hi - lo > 1e-12) shared[s.id].push_back({lo, hi});
        }
      }

      std::vector<Interval> doors;
      for (auto& [neighbor, intervals] : shared) {
        for (const Interval& piece : merge_intervals(intervals)) {
          if (piece.second - piece.first >= options.min_doorway - 1e-9) {
            doors.push_back(piece);
            out.doorways.push_back({{e.at(piece.first / len), e.at(piece.second / len)}, r.id, neighbor});
          }
        }
      }

      double cursor = 0.0;
      for (const Interval& d : merge_intervals(doors)) {
        if (d.first - cursor > 1e-9) out.walls.push_back({{e.at(cursor / len), e.at(d.first / len)}, r.id});
        cursor = std::max(cursor, d.second);
      }
      if (len - cursor > 1e-9) out.walls.push_back({{e.at(cursor / len), e.b}, r.id});
    }
  }
  return out;
}

Adjacency region_adjacency(const WallSet& walls) {
  Adjacency adj;
  for (const Doorway& d : walls.doorways) {
    if (d.region_id == d.neighbor_id) continue;
    adj.insert({std::min(d.region_id, d.neighbor_id), std::max(d.region_id, d.neighbor_id)});
  }
  return adj;
}

Adjacency region_adjacency(const FloorPlan& fp) { return region_adjacency(extract_walls(fp)); }

}  // namespace fpnav::geometry
