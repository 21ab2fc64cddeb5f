#pragma once

// Independent reference implementations used to cross-check the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "fpnav/geometry/primitives.hpp"
#include "fpnav/random.hpp"

namespace fpnav::oracle {

using geometry::Point2;

// Star-shaped ring, one vertex per angular sector so every gap is below pi
// and the ring is simple.
inline std::vector<Point2> random_star_polygon(Rng& rng, std::size_t n) {
  std::vector<double> angles;
  const double sector = 2 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) angles.push_back(sector * (static_cast<double>(i) + rng.uniform(0.1, 0.9)));
  std::vector<Point2> ring;
  const Point2 c{rng.uniform(-2, 2), rng.uniform(-2, 2)};
  for (double a : angles) {
    const double r = rng.uniform(1, 9);
    ring.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return ring;
}

inline double boundary_distance(Point2 p, const std::vector<Point2>& ring) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2 a = ring[i], b = ring[(i + 1) % ring.size()];
    const Point2 ab = b - a;
    const double t = std::clamp(geometry::dot(p - a, ab) / geometry::dot(ab, ab), 0.0, 1.0);
    best = std::min(best, geometry::distance(p, a + t * ab));
  }
  return best;
}

// Sunday's crossing-with-direction winding number.
inline int winding_number(Point2 p, const std::vector<Point2>& ring) {
  int wn = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2 a = ring[i], b = ring[(i + 1) % ring.size()];
    const double side = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
    if (a.y <= p.y) {
      if (b.y > p.y && side > 0) ++wn;
    } else if (b.y <= p.y && side < 0) {
      --wn;
    }
  }
  return wn;
}

// 8-connected Dijkstra on an occupancy grid given as a predicate over cell
// centres; returns the cost to `goal` cell from every cell.
template <class Free>
std::vector<double> grid_dijkstra(int nx, int ny, int gx, int gy, double h, Free free) {
  std::vector<double> dist(static_cast<std::size_t>(nx) * ny, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[gy * nx + gx] = 0;
  pq.push({0, gy * nx + gx});
  while (!pq.empty()) {
    auto [d, n] = pq.top();
    pq.pop();
    if (d > dist[n]) continue;
    const int x = n % nx, y = n / nx;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy) continue;
        const int u = x + dx, v = y + dy;
        if (u < 0 || v < 0 || u >= nx || v >= ny || !free(u, v)) continue;
        if (dx && dy && (!free(x + dx, y) || !free(x, y + dy))) continue;
        const double nd = d + h * ((dx && dy) ? std::numbers::sqrt2 : 1.0);
        if (nd < dist[v * nx + u]) {
          dist[v * nx + u] = nd;
          pq.push({nd, v * nx + u});
        }
      }
    }
  }
  return dist;
}

}  // namespace fpnav::oracle
