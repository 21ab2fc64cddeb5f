#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fpnav/error.hpp"
#include "fpnav/geometry/floorplan.hpp"
#include "fpnav/render/render.hpp"
#include "support.hpp"

using namespace fpnav;
using namespace fpnav::render;
using geometry::Point2;

TEST_CASE("PNG encoding round trips and is deterministic") {
  Image img(7, 5, {10, 20, 30});
  img.set(3, 2, {255, 0, 1});
  const auto bytes = encode_png(img);
  CHECK(bytes.size() > 8);
  CHECK(bytes[1] == 'P');
  CHECK(encode_png(img) == bytes);
  CHECK(decode_png(bytes) == img);
  auto broken = bytes;
  broken.resize(20);
  CHECK_THROWS_AS(decode_png(broken), ParseError);
}

TEST_CASE("pixel mapping inverts and keeps +y up") {
  const auto fp = fpnav::testing::two_rooms();
  RasterConfig cfg;
  cfg.pixels_per_meter = 10;
  cfg.margin = 5;
  const PixelMapper map(fp, cfg);
  CHECK(map.width() == 90);
  CHECK(map.height() == 50);
  const Point2 px = map.to_pixel({0, 4});
  CHECK(px.x == doctest::Approx(5));
  CHECK(px.y == doctest::Approx(5));
  const Point2 back = map.to_meters(map.to_pixel({3.3, 1.2}));
  CHECK(back.x == doctest::Approx(3.3));
  CHECK(back.y == doctest::Approx(1.2));
}

TEST_CASE("region fills use the type palette") {
  const auto fp = fpnav::testing::two_rooms();
  RasterConfig cfg;
  const Image img = render_floorplan(fp, cfg);
  const PixelMapper map(fp, cfg);
  const Point2 p = map.to_pixel({1.0, 3.0});
  CHECK(img.at(static_cast<int>(p.x), static_cast<int>(p.y)) == region_color(fp, fp.at(1), "default"));
  const Point2 q = map.to_pixel({7.0, 1.0});
  CHECK(img.at(static_cast<int>(q.x), static_cast<int>(q.y)) == region_color(fp, fp.at(2), "default"));
  CHECK(img.at(0, 0) == Rgb{255, 255, 255});
  CHECK(render_floorplan(fp, cfg) == img);
  CHECK(palette("pastel")[0] != palette("default")[0]);
  CHECK_THROWS_AS(palette("neon"), Error);
}

TEST_CASE("more region types than palette entries is an error") {
  std::vector<geometry::Region> regions;
  for (int i = 0; i < 31; ++i) regions.push_back(fpnav::testing::rect(i, "t" + std::to_string(100 + i), i, 0, i + 1, 1));
  CHECK_THROWS_AS(render_floorplan(geometry::FloorPlan("s", "0", regions), {}), Error);
}

TEST_CASE("trajectory overlay draws one segment per history pose") {
  const auto fp = fpnav::testing::two_rooms();
  RasterConfig cfg;
  const Image base = render_floorplan(fp, cfg);
  const std::vector<sim::AgentPose> hist = {{1, 1, 0}, {1, 2, 0}, {2, 2, 0}};
  const auto ov = overlay_pose_trajectory(base, fp, cfg, hist, {3, 2, std::numbers::pi / 2});
  CHECK(ov.segments_drawn == 3);
  CHECK(ov.markers_drawn == 4);
  CHECK_FALSE(ov.image == base);
  const PixelMapper map(fp, cfg);
  const Point2 c = map.to_pixel({3, 2});
  CHECK(ov.image.at(static_cast<int>(c.x) - 2, static_cast<int>(c.y) + 2) == Rgb{0, 0, 255});
  // alpha moves the marker.
  const auto scaled = overlay_pose_trajectory(base, fp, cfg, {}, {3, 2, 0}, 0.5);
  const Point2 h = map.to_pixel({1.5, 1});
  CHECK(scaled.image.at(static_cast<int>(h.x) - 2, static_cast<int>(h.y) + 2) == Rgb{0, 0, 255});
}

TEST_CASE("dual view concatenates at the plan height") {
  const Image obs(160, 120, {1, 2, 3});
  const Image plan(300, 240, {4, 5, 6});
  const auto f = compose_dual_view(obs, plan, 9);
  CHECK(f.image.height() == 240);
  CHECK(f.observation_width == 320);
  CHECK(f.floorplan_width == 300);
  CHECK(f.image.width() == 620);
  CHECK(f.timestamp_step == 9);
  CHECK(f.image.at(319, 100) == Rgb{1, 2, 3});
  CHECK(f.image.at(320, 100) == Rgb{4, 5, 6});
  CHECK_THROWS_AS(compose_dual_view(Image(), plan), Error);
}

TEST_CASE("raycast depth matches the wall distance") {
  const sim::World w(fpnav::testing::two_rooms());
  RaycastConfig cfg;
  const auto obs = raycast_observation(w, {2, 1, 0}, cfg);
  const int mid = cfg.columns / 2;
  CHECK(column_angle(cfg, mid) == doctest::Approx(0.0));
  CHECK(obs.ray_length[mid] == doctest::Approx(3.0));
  CHECK(obs.hit_region[mid] == 1);
  for (int c = 0; c < cfg.columns; c += 17) {
    if (std::isfinite(obs.depth[c]) && obs.hit_region[c] == 1 && std::abs(column_angle(cfg, c)) < 0.5) {
      CHECK(obs.depth[c] == doctest::Approx(3.0));
    }
  }
  // Looking east through the doorway sees the far wall of the office.
  const auto east = raycast_observation(w, {2, 2, std::numbers::pi / 2}, cfg);
  CHECK(east.ray_length[mid] == doctest::Approx(6.0));
  CHECK(east.hit_region[mid] == 2);
  CHECK_THROWS_AS(raycast_observation(w, {-3, 0, 0}, cfg), StateError);
}

TEST_CASE("image primitives clip and resize") {
  Image img(10, 10);
  CHECK(draw_line(img, 0, 0, 9, 9, {9, 9, 9}) == 10);
  fill_rect(img, -5, -5, 2, 2, {1, 1, 1});
  CHECK(img.at(0, 0) == Rgb{1, 1, 1});
  const Image r = resize_to_height(img, 5);
  CHECK(r.width() == 5);
  CHECK(r.height() == 5);
}
