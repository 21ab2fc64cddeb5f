#include "fpnav/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpnav::sim {

using geometry::Point2;
using geometry::Segment;

World::World(geometry::FloorPlan plan, const geometry::WallOptions& wall_options)
    : plan_(std::move(plan)), walls_(geometry::extract_walls(plan_, wall_options)) {}

double World::wall_distance(Point2 p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& w : walls_.walls) d = std::min(d, geometry::point_segment_distance(p, w.segment));
  return d;
}

bool World::in_free_space(Point2 p, double clearance) const {
  return geometry::locate_region(plan_, p) != nullptr && wall_distance(p) >= clearance - 1e-9;
}

bool World::segment_clear(const Segment& s, double clearance) const {
  for (const auto& w : walls_.walls) {
    if (geometry::segment_segment_distance(s, w.segment) < clearance) return false;
  }
  return true;
}

namespace {

// Smallest s >= 0 with |from + s*dir - center| = radius, entering the disc.
double ray_circle(Point2 from, Point2 dir, Point2 center, double radius) {
  const Point2 m = from - center;
  const double b = geometry::dot(m, dir);
  const double c = geometry::dot(m, m) - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::numeric_limits<double>::infinity();
  const double s = -b - std::sqrt(disc);
  return s >= 0.0 ? s : std::numeric_limits<double>::infinity();
}

// First s >= 0 at which the ray meets segment (p, q).
double ray_segment(Point2 from, Point2 dir, Point2 p, Point2 q) {
  const Point2 e = q - p;
  const double denom = geometry::cross(dir, e);
  if (std::abs(denom) < 1e-15) return std::numeric_limits<double>::infinity();
  const Point2 w = p - from;
  const double s = geometry::cross(w, e) / denom;
  const double t = geometry::cross(w, dir) / denom;
  if (s < 0.0 || t < 0.0 || t > 1.0) return std::numeric_limits<double>::infinity();
  return s;
}

}  // namespace

double World::free_travel(Point2 from, Point2 dir, double length, double clearance) const {
  const Segment sweep{from, from + length * dir};
  double allowed = length;
  for (const auto& w : walls_.walls) {
    const Segment& seg = w.segment;
    if (geometry::segment_segment_distance(sweep, seg) >= clearance) continue;

    const double d0 = geometry::point_segment_distance(from, seg);
    if (d0 < clearance + 1e-9) {
      // Already inside the clearance band: distance along a ray is convex,
      // so moving away (or parallel) is always safe and moving closer never is.
      const double probe = std::min(1e-6, length);
      if (geometry::point_segment_distance(from + probe * dir, seg) < d0 - 1e-12) return 0.0;
      continue;
    }

    const Point2 e = seg.b - seg.a;
    const double len = geometry::norm(e);
    double hit = std::min(ray_circle(from, dir, seg.a, clearance), ray_circle(from, dir, seg.b, clearance));
    if (len > 0.0) {
      const Point2 n{-e.y / len * clearance, e.x / len * clearance};
      hit = std::min(hit, ray_segment(from, dir, seg.a + n, seg.b + n));
      hit = std::min(hit, ray_segment(from, dir, seg.a - n, seg.b - n));
    }
    allowed = std::min(allowed, std::max(0.0, hit - 1e-9));
  }
  return allowed;
}

}  // namespace fpnav::sim
