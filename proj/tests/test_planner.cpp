#include <cmath>

#include "doctest.h"
#include "fpnav/error.hpp"
#include "fpnav/eval/planner.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fpnav;
using namespace fpnav::eval;
using geometry::Point2;
using fpnav::testing::rect;

namespace {

// Geodesic distance from a fine 0.05 m occupancy grid.
double oracle_distance(const geometry::FloorPlan& fp, Point2 a, Point2 b, double clearance) {
  const sim::World w(fp);
  const auto box = fp.bounds();
  const double h = 0.05;
  const int nx = static_cast<int>(std::ceil(box.width() / h)) + 1;
  const int ny = static_cast<int>(std::ceil(box.height() / h)) + 1;
  auto centre = [&](int i, int j) { return Point2{box.min_x + i * h, box.min_y + j * h}; };
  std::vector<char> free(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) free[j * nx + i] = w.in_free_space(centre(i, j), clearance);
  }
  auto cell = [&](Point2 p) {
    return std::pair<int, int>{static_cast<int>(std::lround((p.x - box.min_x) / h)),
                               static_cast<int>(std::lround((p.y - box.min_y) / h))};
  };
  const auto [gx, gy] = cell(b);
  const auto [sx, sy] = cell(a);
  const auto dist = oracle::grid_dijkstra(nx, ny, gx, gy, h, [&](int i, int j) { return free[j * nx + i] != 0; });
  return dist[sy * nx + sx];
}

geometry::FloorPlan l_plan() {
  return geometry::FloorPlan("l", "0", {rect(0, "hallway", 0, 0, 10, 2), rect(1, "office", 8, 2, 10, 8),
                                        rect(2, "kitchen", 0, 2, 4, 6)});
}

}  // namespace

TEST_CASE("straight-line distance when the goal is visible") {
  const auto fp = fpnav::testing::arena();
  GridPlanner p(fp);
  CHECK(p.shortest_path_length({-5, -5}, {5, 5}) == doctest::Approx(std::hypot(10, 10)).epsilon(0.01));
}

TEST_CASE("planner lengths agree with a fine-grid Dijkstra") {
  const auto fp = l_plan();
  GridPlanner p(fp);
  const std::vector<std::pair<Point2, Point2>> cases = {
      {{1, 1}, {9, 7}}, {{2, 5}, {9, 7}}, {{2, 5}, {9.5, 1}}, {{0.5, 0.5}, {9.5, 7.5}}, {{3, 3}, {1, 1}}};
  for (const auto& [a, b] : cases) {
    const double got = p.shortest_path_length(a, b);
    const double ref = oracle_distance(fp, a, b, sim::kWallClearance);
    CAPTURE(a.x);
    CAPTURE(b.x);
    CHECK(got >= geometry::distance(a, b) - 1e-9);
    CHECK(std::abs(got - ref) / ref < 0.06);
  }
}

TEST_CASE("disconnected regions yield infinity and an empty path") {
  const geometry::FloorPlan fp("s", "0", {rect(0, "a", 0, 0, 2, 2), rect(1, "b", 3, 0, 5, 2)});
  GridPlanner p(fp);
  CHECK(std::isinf(p.shortest_path_length({1, 1}, {4, 1})));
  CHECK(p.shortest_path({1, 1}, {4, 1}).empty());
  CHECK_THROWS_AS(p.shortest_path_length({2.5, 1}, {4, 1}), StateError);
}

TEST_CASE("paths stay in free space and end at the endpoints") {
  const auto fp = l_plan();
  PlannerOptions o;
  o.clearance = 0.25;
  GridPlanner p(fp, o);
  const auto path = p.shortest_path({2, 5}, {9, 7});
  REQUIRE(path.size() >= 2);
  CHECK(path.front() == Point2{2, 5});
  CHECK(path.back() == Point2{9, 7});
  const sim::World w(fp);
  for (std::size_t i = 1; i + 1 < path.size(); ++i) CHECK(w.in_free_space(path[i], 0.25 - 1e-9));
}

TEST_CASE("unknown areas are free regardless of walls") {
  const geometry::FloorPlan fp("s", "0", {rect(0, "a", 0, 0, 2, 2), rect(1, "b", 3, 0, 5, 2)});
  PlannerOptions o;
  o.unknown_area = geometry::Box{1.5, 0, 3.5, 2};
  GridPlanner p(fp, o);
  CHECK(std::isfinite(p.shortest_path_length({1, 1}, {4, 1})));
}

TEST_CASE("distance field matches point queries and looks ahead") {
  const auto fp = l_plan();
  GridPlanner p(fp);
  const auto field = p.distance_field({9, 7});
  CHECK(field.distance_from({2, 5}) == doctest::Approx(p.shortest_path_length({2, 5}, {9, 7})).epsilon(0.02));
  CHECK(field.reachable_from({1, 1}));
  const auto la = field.lookahead({2, 5}, 2.0);
  REQUIRE(la);
  CHECK(geometry::distance(*la, {2, 5}) <= 2.0 * std::sqrt(2.0) + 0.15);
  CHECK(p.visible({2, 5}, *la));
  const auto near = field.lookahead({9, 5}, 10.0);
  REQUIRE(near);
  CHECK(*near == Point2{9, 7});
}
