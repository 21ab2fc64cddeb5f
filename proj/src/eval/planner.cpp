#include "fpnav/eval/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "fpnav/error.hpp"

namespace fpnav::eval {

using geometry::Box;
using geometry::Point2;
using geometry::Segment;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kDi[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDj[8] = {0, 1, 1, 1, 0, -1, -1, -1};

// Liang-Barsky: the parameter interval of s inside `box`, if any.
std::optional<std::pair<double, double>> clip_to_box(const Segment& s, const Box& box) {
  double t0 = 0.0;
  double t1 = 1.0;
  const double dx = s.b.x - s.a.x;
  const double dy = s.b.y - s.a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {s.a.x - box.min_x, box.max_x - s.a.x, s.a.y - box.min_y, box.max_y - s.a.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return std::nullopt;
      continue;
    }
    const double r = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
  }
  if (t0 >= t1) return std::nullopt;
  return std::pair{t0, t1};
}

}  // namespace

GridPlanner::GridPlanner(const geometry::FloorPlan& fp, PlannerOptions options)
    : plan_(fp), options_(std::move(options)) {
  if (!(options_.resolution > 0.0)) throw Error("planner resolution must be positive");

  for (const auto& w : geometry::extract_walls(plan_, options_.walls).walls) {
    if (!options_.unknown_area) {
      walls_.push_back(w.segment);
      continue;
    }
    const auto inside = clip_to_box(w.segment, *options_.unknown_area);
    if (!inside) {
      walls_.push_back(w.segment);
      continue;
    }
    if (inside->first > 1e-12) walls_.push_back({w.segment.a, w.segment.at(inside->first)});
    if (inside->second < 1.0 - 1e-12) walls_.push_back({w.segment.at(inside->second), w.segment.b});
  }

  const Box b = plan_.bounds();
  const double res = options_.resolution;
  const double pad = options_.boundary_slack + 2.0 * res;
  i0_ = static_cast<long>(std::floor((b.min_x - pad) / res));
  j0_ = static_cast<long>(std::floor((b.min_y - pad) / res));
  nx_ = static_cast<long>(std::ceil((b.max_x + pad) / res)) - i0_ + 1;
  ny_ = static_cast<long>(std::ceil((b.max_y + pad) / res)) - j0_ + 1;

  bx0_ = b.min_x - pad;
  by0_ = b.min_y - pad;
  bnx_ = static_cast<long>(std::ceil((b.width() + 2 * pad) / bucket_size_)) + 1;
  bny_ = static_cast<long>(std::ceil((b.height() + 2 * pad) / bucket_size_)) + 1;
  buckets_.resize(static_cast<std::size_t>(bnx_ * bny_));
  for (std::size_t w = 0; w < walls_.size(); ++w) {
    const Box wb = geometry::bounding_box(std::vector<Point2>{walls_[w].a, walls_[w].b});
    const long x0 = std::clamp(static_cast<long>(std::floor((wb.min_x - bx0_) / bucket_size_)), 0L, bnx_ - 1);
    const long x1 = std::clamp(static_cast<long>(std::floor((wb.max_x - bx0_) / bucket_size_)), 0L, bnx_ - 1);
    const long y0 = std::clamp(static_cast<long>(std::floor((wb.min_y - by0_) / bucket_size_)), 0L, bny_ - 1);
    const long y1 = std::clamp(static_cast<long>(std::floor((wb.max_y - by0_) / bucket_size_)), 0L, bny_ - 1);
    for (long y = y0; y <= y1; ++y) {
      for (long x = x0; x <= x1; ++x) buckets_[static_cast<std::size_t>(y * bnx_ + x)].push_back(w);
    }
  }

  free_.assign(static_cast<std::size_t>(nx_ * ny_), 0);
  for (long j = j0_; j < j0_ + ny_; ++j) {
    for (long i = i0_; i < i0_ + nx_; ++i) {
      free_[index(i, j)] = is_free({i * res, j * res}) ? 1 : 0;
    }
  }

  edges_.assign(free_.size(), 0);
  for (long j = j0_; j < j0_ + ny_; ++j) {
    for (long i = i0_; i < i0_ + nx_; ++i) {
      const std::size_t n = index(i, j);
      if (!free_[n]) continue;
      for (int k = 0; k < 4; ++k) {
        const long ni = i + kDi[k];
        const long nj = j + kDj[k];
        if (ni < i0_ || nj < j0_ || ni >= i0_ + nx_ || nj >= j0_ + ny_) continue;
        const std::size_t m = index(ni, nj);
        if (!free_[m]) continue;
        if (!visible(node_point(n), node_point(m), options_.clearance - 1e-9)) continue;
        edges_[n] |= static_cast<std::uint8_t>(1u << k);
        edges_[m] |= static_cast<std::uint8_t>(1u << (k + 4));
      }
    }
  }
}

Point2 GridPlanner::node_point(std::size_t n) const {
  const long i = i0_ + static_cast<long>(n % static_cast<std::size_t>(nx_));
  const long j = j0_ + static_cast<long>(n / static_cast<std::size_t>(nx_));
  return {i * options_.resolution, j * options_.resolution};
}

std::vector<std::size_t> GridPlanner::nearby_walls(const Box& box) const {
  const long x0 = std::clamp(static_cast<long>(std::floor((box.min_x - bx0_) / bucket_size_)), 0L, bnx_ - 1);
  const long x1 = std::clamp(static_cast<long>(std::floor((box.max_x - bx0_) / bucket_size_)), 0L, bnx_ - 1);
  const long y0 = std::clamp(static_cast<long>(std::floor((box.min_y - by0_) / bucket_size_)), 0L, bny_ - 1);
  const long y1 = std::clamp(static_cast<long>(std::floor((box.max_y - by0_) / bucket_size_)), 0L, bny_ - 1);
  std::vector<std::size_t> out;
  for (long y = y0; y <= y1; ++y) {
    for (long x = x0; x <= x1; ++x) {
      const auto& b = buckets_[static_cast<std::size_t>(y * bnx_ + x)];
      out.insert(out.end(), b.begin(), b.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double GridPlanner::wall_distance(Point2 p) const {
  double d = kInf;
  for (const Segment& w : walls_) d = std::min(d, geometry::point_segment_distance(p, w));
  return d;
}

bool GridPlanner::visible(Point2 a, Point2 b, double clearance) const {
  const Box box{std::min(a.x, b.x) - clearance, std::min(a.y, b.y) - clearance, std::max(a.x, b.x) + clearance,
                std::max(a.y, b.y) + clearance};
  const Segment s{a, b};
  for (std::size_t w : nearby_walls(box)) {
    if (geometry::segment_segment_distance(s, walls_[w]) < clearance) return false;
  }
  return true;
}

bool GridPlanner::is_free(Point2 p) const {
  bool inside = geometry::locate_region(plan_, p) != nullptr;
  if (!inside && options_.unknown_area) inside = options_.unknown_area->contains(p);
  if (!inside && options_.boundary_slack > 0.0) {
    for (const auto& r : plan_.regions()) {
      if (geometry::signed_boundary_distance(p, r.polygon) >= -options_.boundary_slack) {
        inside = true;
        break;
      }
    }
  }
  if (!inside) return false;
  const double c = options_.clearance;
  for (std::size_t w : nearby_walls({p.x - c, p.y - c, p.x + c, p.y + c})) {
    if (geometry::point_segment_distance(p, walls_[w]) < c - 1e-9) return false;
  }
  return true;
}

std::vector<GridPlanner::Attach> GridPlanner::attachments(Point2 p, double radius) const {
  const double res = options_.resolution;
  const double local = std::min(options_.clearance, wall_distance(p)) - 1e-9;
  const long ia = static_cast<long>(std::floor((p.x - radius) / res));
  const long ib = static_cast<long>(std::ceil((p.x + radius) / res));
  const long ja = static_cast<long>(std::floor((p.y - radius) / res));
  const long jb = static_cast<long>(std::ceil((p.y + radius) / res));
  std::vector<Attach> out;
  for (long j = std::max(ja, j0_); j <= std::min(jb, j0_ + ny_ - 1); ++j) {
    for (long i = std::max(ia, i0_); i <= std::min(ib, i0_ + nx_ - 1); ++i) {
      const std::size_t n = index(i, j);
      if (!free_[n]) continue;
      const Point2 q = node_point(n);
      const double d = geometry::distance(p, q);
      if (d > radius) continue;
      if (!visible(p, q, std::max(0.0, local))) continue;
      out.push_back({n, d});
    }
  }
  std::sort(out.begin(), out.end(), [](const Attach& a, const Attach& b) {
    return a.cost != b.cost ? a.cost < b.cost : a.node < b.node;
  });
  return out;
}

void GridPlanner::require_endpoint(Point2 p, const char* which) const {
  bool inside = geometry::locate_region(plan_, p) != nullptr ||
                (options_.unknown_area && options_.unknown_area->contains(p));
  if (!inside || wall_distance(p) < options_.clearance - 1e-6) {
    throw StateError(std::string("shortest path ") + which + " point is in a wall or outside every region");
  }
}

std::vector<double> GridPlanner::dijkstra(const std::vector<Attach>& sources, std::vector<std::size_t>* parent,
                                          const std::vector<Attach>* targets) const {
  std::vector<double> dist(free_.size(), kInf);
  std::vector<std::uint8_t> done(free_.size(), 0);
  if (parent) parent->assign(free_.size(), static_cast<std::size_t>(-1));
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (const Attach& s : sources) {
    if (s.cost < dist[s.node]) {
      dist[s.node] = s.cost;
      queue.push({s.cost, s.node});
    }
  }
  std::vector<std::uint8_t> is_target;
  if (targets) {
    is_target.assign(free_.size(), 0);
    for (const Attach& t : *targets) is_target[t.node] = 1;
  }
  double best = kInf;
  const double res = options_.resolution;
  const double diag = std::sqrt(2.0) * res;
  while (!queue.empty()) {
    const auto [d, n] = queue.top();
    queue.pop();
    if (done[n]) continue;
    done[n] = 1;
    if (targets) {
      if (d >= best) break;
      if (is_target[n]) {
        for (const Attach& t : *targets) {
          if (t.node == n) best = std::min(best, d + t.cost);
        }
      }
    }
    const long i = i0_ + static_cast<long>(n % static_cast<std::size_t>(nx_));
    const long j = j0_ + static_cast<long>(n / static_cast<std::size_t>(nx_));
    for (int k = 0; k < 8; ++k) {
      if (!(edges_[n] & (1u << k))) continue;
      const std::size_t m = index(i + kDi[k], j + kDj[k]);
      const double nd = d + ((k & 1) ? diag : res);
      if (nd < dist[m]) {
        dist[m] = nd;
        if (parent) (*parent)[m] = n;
        queue.push({nd, m});
      }
    }
  }
  return dist;
}

double GridPlanner::shortest_path_length(Point2 a, Point2 b) const {
  require_endpoint(a, "start");
  require_endpoint(b, "end");
  if (a == b) return 0.0;
  if (visible(a, b, std::min(options_.clearance, std::min(wall_distance(a), wall_distance(b))) - 1e-9)) {
    return geometry::distance(a, b);
  }
  const double near = 1.5 * options_.resolution;
  auto sa = attachments(a, near);
  if (sa.empty()) sa = attachments(a, 1.0);
  auto sb = attachments(b, near);
  if (sb.empty()) sb = attachments(b, 1.0);
  if (sa.empty() || sb.empty()) return kInf;
  const auto dist = dijkstra(sa, nullptr, &sb);
  double best = kInf;
  for (const Attach& t : sb) best = std::min(best, dist[t.node] + t.cost);
  return best;
}

std::vector<Point2> GridPlanner::shortest_path(Point2 a, Point2 b) const {
  require_endpoint(a, "start");
  require_endpoint(b, "end");
  if (visible(a, b, std::min(options_.clearance, std::min(wall_distance(a), wall_distance(b))) - 1e-9)) {
    return {a, b};
  }
  const double near = 1.5 * options_.resolution;
  auto sa = attachments(a, near);
  if (sa.empty()) sa = attachments(a, 1.0);
  auto sb = attachments(b, near);
  if (sb.empty()) sb = attachments(b, 1.0);
  if (sa.empty() || sb.empty()) return {};
  std::vector<std::size_t> parent;
  const auto dist = dijkstra(sa, &parent, &sb);
  double best = kInf;
  std::size_t end = 0;
  for (const Attach& t : sb) {
    if (dist[t.node] + t.cost < best) {
      best = dist[t.node] + t.cost;
      end = t.node;
    }
  }
  if (!std::isfinite(best)) return {};
  std::vector<Point2> nodes;
  for (std::size_t n = end; n != static_cast<std::size_t>(-1); n = parent[n]) nodes.push_back(node_point(n));
  std::reverse(nodes.begin(), nodes.end());
  nodes.insert(nodes.begin(), a);
  nodes.push_back(b);
  return nodes;
}

DistanceField GridPlanner::distance_field(Point2 goal) const {
  auto sources = attachments(goal, 1.5 * options_.resolution);
  if (sources.empty()) sources = attachments(goal, 1.0);
  return DistanceField(*this, goal, dijkstra(sources, nullptr, nullptr));
}

std::optional<std::size_t> DistanceField::entry_node(Point2 p) const {
  for (double radius : {1.5 * planner_->options_.resolution, 1.0}) {
    double best = kInf;
    std::optional<std::size_t> node;
    for (const auto& a : planner_->attachments(p, radius)) {
      const double total = a.cost + cost_[a.node];
      if (total < best) {
        best = total;
        node = a.node;
      }
    }
    if (node) return node;
  }
  return std::nullopt;
}

bool DistanceField::reachable_from(Point2 p) const { return std::isfinite(distance_from(p)); }

double DistanceField::distance_from(Point2 p) const {
  const double local = std::min(planner_->options_.clearance, planner_->wall_distance(p));
  if (planner_->visible(p, goal_, std::max(0.0, local - 1e-9))) return geometry::distance(p, goal_);
  const auto n = entry_node(p);
  if (!n) return kInf;
  return geometry::distance(p, planner_->node_point(*n)) + cost_[*n];
}

std::optional<Point2> DistanceField::lookahead(Point2 p, double horizon) const {
  const GridPlanner& g = *planner_;
  const double local = std::max(0.0, std::min(g.options_.clearance, g.wall_distance(p)) - 1e-9);
  if (g.visible(p, goal_, local)) return goal_;
  const auto start = entry_node(p);
  if (!start) return std::nullopt;

  std::vector<std::size_t> path{*start};
  const double res = g.options_.resolution;
  const auto steps = static_cast<std::size_t>(horizon / res);
  while (path.size() < steps) {
    const std::size_t n = path.back();
    const long i = g.i0_ + static_cast<long>(n % static_cast<std::size_t>(g.nx_));
    const long j = g.j0_ + static_cast<long>(n / static_cast<std::size_t>(g.nx_));
    std::size_t next = n;
    double best = cost_[n];
    for (int k = 0; k < 8; ++k) {
      if (!(g.edges_[n] & (1u << k))) continue;
      const std::size_t m = g.index(i + kDi[k], j + kDj[k]);
      if (cost_[m] < best) {
        best = cost_[m];
        next = m;
      }
    }
    if (next == n) break;
    path.push_back(next);
  }
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const Point2 q = g.node_point(*it);
    if (g.visible(p, q, local)) return q;
  }
  return g.node_point(*start);
}

}  // namespace fpnav::eval
