#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fpnav/error.hpp"
#include "fpnav/geometry/floorplan.hpp"
#include "fpnav/geometry/floorplan_io.hpp"
#include "fpnav/random.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fpnav;
using namespace fpnav::geometry;
using fpnav::testing::rect;

TEST_CASE("polygon construction normalizes orientation") {
  const auto cw = Polygon::from_vertices({{0, 0}, {0, 2}, {3, 2}, {3, 0}});
  CHECK(signed_area2(cw.vertices()) > 0.0);
  CHECK(cw.vertices().front() == Point2{0, 0});
  CHECK(cw.area() == doctest::Approx(6.0));
  CHECK(cw.centroid().x == doctest::Approx(1.5));
  CHECK(cw.centroid().y == doctest::Approx(1.0));
}

TEST_CASE("invalid polygons are rejected") {
  CHECK_THROWS_AS(Polygon::from_vertices({{0, 0}, {1, 0}}), SchemaError);
  CHECK_THROWS_AS(Polygon::from_vertices({{0, 0}, {2, 2}, {2, 0}, {0, 2}}), SchemaError);  // bow tie
  CHECK_THROWS_AS(Polygon::from_vertices({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), SchemaError);
  CHECK_THROWS_AS(Polygon::from_vertices({{0, 0}, {1, 0}, {2, 0}}), SchemaError);
  CHECK_THROWS_AS(Polygon::from_vertices({{0, 0}, {NAN, 0}, {0, 1}}), SchemaError);
}

TEST_CASE("point in polygon handles boundary and concave shapes") {
  const auto l = Polygon::from_vertices({{0, 0}, {4, 0}, {4, 1}, {1, 1}, {1, 4}, {0, 4}});
  CHECK(point_in_polygon({0.5, 0.5}, l) == Containment::inside);
  CHECK(point_in_polygon({3, 3}, l) == Containment::outside);
  CHECK(point_in_polygon({2, 1}, l) == Containment::on_boundary);
  CHECK(point_in_polygon({0, 0}, l) == Containment::on_boundary);
  CHECK(point_in_polygon({-1e-3, 2}, l) == Containment::outside);
  // Ray through a vertex.
  CHECK(point_in_polygon({0.5, 1.0}, l) == Containment::inside);
  CHECK(point_in_polygon({2.0, 4.0}, l) == Containment::outside);
}

TEST_CASE("point in polygon agrees with the winding-number oracle") {
  Rng rng(42);
  std::size_t compared = 0;
  for (int k = 0; k < 20; ++k) {
    const auto ring = oracle::random_star_polygon(rng, 3 + rng.index(12));
    const auto poly = Polygon::from_vertices(ring);
    for (int i = 0; i < 300; ++i) {
      const Point2 p{rng.uniform(-12, 12), rng.uniform(-12, 12)};
      if (oracle::boundary_distance(p, ring) < 1e-8) continue;
      const bool expected = oracle::winding_number(p, ring) != 0;
      REQUIRE((point_in_polygon(p, poly) == Containment::inside) == expected);
      ++compared;
    }
  }
  CHECK(compared > 5000);
}

TEST_CASE("floor plan validation carries region ids") {
  CHECK_THROWS_AS(FloorPlan("s", "0", {}), SchemaError);
  try {
    FloorPlan("s", "0", {rect(3, "a", 0, 0, 1, 1), rect(3, "b", 1, 0, 2, 1)});
    FAIL("duplicate id accepted");
  } catch (const SchemaError& e) {
    CHECK(e.region_id() == 3);
  }
  const auto fp = fpnav::testing::two_rooms();
  CHECK(fp.find(1)->type == "kitchen");
  CHECK(fp.find(5) == nullptr);
  CHECK_THROWS_AS(fp.at(5), SchemaError);
  CHECK(fp.type_catalog() == std::vector<std::string>{"kitchen", "office"});
}

TEST_CASE("locate_region breaks ties toward the smaller id") {
  const auto fp = fpnav::testing::two_rooms();
  CHECK(locate_region(fp, {4, 2})->id == 1);
  CHECK(locate_region(fp, {6, 2})->id == 2);
  CHECK(locate_region(fp, {9, 2}) == nullptr);
}

TEST_CASE("shared edges become doorways and the rest walls") {
  const auto fp = fpnav::testing::two_rooms();
  const auto ws = extract_walls(fp);
  REQUIRE(ws.doorways.size() == 2);
  for (const auto& d : ws.doorways) CHECK(d.segment.length() == doctest::Approx(4.0));
  double wall_length = 0.0;
  for (const auto& w : ws.walls) wall_length += w.segment.length();
  CHECK(wall_length == doctest::Approx(24.0));
  CHECK(region_adjacency(fp) == Adjacency{{1, 2}});
}

TEST_CASE("a partial shared edge leaves walls either side of the opening") {
  const FloorPlan fp("s", "0", {rect(1, "a", 0, 0, 4, 4), rect(2, "b", 4, 1, 8, 2)});
  const auto ws = extract_walls(fp);
  REQUIRE(ws.doorways.size() == 2);
  CHECK(ws.doorways[0].segment.length() == doctest::Approx(1.0));
  // Openings narrower than the minimum stay walls.
  const FloorPlan narrow("s", "0", {rect(1, "a", 0, 0, 4, 4), rect(2, "b", 4, 1, 8, 1.5)});
  CHECK(extract_walls(narrow).doorways.empty());
  CHECK(region_adjacency(narrow).empty());
}

TEST_CASE("pole of inaccessibility stays inside concave polygons") {
  const auto l = Polygon::from_vertices({{0, 0}, {4, 0}, {4, 1}, {1, 1}, {1, 4}, {0, 4}});
  const Point2 p = pole_of_inaccessibility(l);
  CHECK(point_in_polygon(p, l) == Containment::inside);
  CHECK(signed_boundary_distance(p, l) > 0.45);
  const auto sq = Polygon::from_vertices({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
  CHECK(signed_boundary_distance({1, 1}, sq) == doctest::Approx(1.0));
  CHECK(signed_boundary_distance({3, 1}, sq) == doctest::Approx(-1.0));
}

TEST_CASE("floor-plan documents parse and reserialize canonically") {
  const std::string doc = R"({"scene_id": "s", "floor_id": "1", "regions": [
    {"id": 2, "type": "office", "polygon": [[4,0],[4,4],[8,4],[8,0]]},
    {"id": 1, "type": "kitchen", "polygon": [[0,0],[4,0],[4,4],[0,4]]}]})";
  const auto fp = parse_floorplan(doc);
  CHECK(fp.regions().front().id == 1);
  const std::string canon = serialize_floorplan(fp);
  CHECK(serialize_floorplan(parse_floorplan(canon)) == canon);
  CHECK(canon.find("\n  \"regions\"") != std::string::npos);
}

TEST_CASE("floor-plan parse errors name the location or region") {
  try {
    parse_floorplan("{\"scene_id\": \"s\",\n \"floor_id\": }");
    FAIL("accepted malformed JSON");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  try {
    parse_floorplan(R"({"scene_id":"s","floor_id":"0","regions":[{"id":7,"type":"a","polygon":[[0,0],[1,1],[1,0],[0,1]]}]})");
    FAIL("accepted a bow tie");
  } catch (const SchemaError& e) {
    CHECK(e.region_id() == 7);
  }
  CHECK_THROWS_AS(parse_floorplan(R"({"scene_id":"s","floor_id":"0","regions":[{"id":1,"type":3,"polygon":[]}]})"),
                  SchemaError);
}
