#include "fpnav/render/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpnav/error.hpp"

namespace fpnav::render {

using geometry::Point2;

namespace {

constexpr Palette kDefaultPalette = {{
    {0xF3, 0xC3, 0x00}, {0x87, 0x56, 0x92}, {0xF3, 0x84, 0x00}, {0xA1, 0xCA, 0xF1}, {0xBE, 0x00, 0x32},
    {0xC2, 0xB2, 0x80}, {0x84, 0x84, 0x82}, {0x00, 0x88, 0x56}, {0xE6, 0x8F, 0xAC}, {0x00, 0x67, 0xA5},
    {0xF9, 0x93, 0x79}, {0x60, 0x4E, 0x97}, {0xF6, 0xA6, 0x00}, {0xB3, 0x44, 0x6C}, {0xDC, 0xD3, 0x00},
    {0x88, 0x2D, 0x17}, {0x8D, 0xB6, 0x00}, {0x65, 0x45, 0x22}, {0xE2, 0x58, 0x22}, {0x2B, 0x3D, 0x26},
    {0x7F, 0xC9, 0x7F}, {0xBE, 0xAE, 0xD4}, {0xFD, 0xC0, 0x86}, {0xFF, 0xFF, 0x99}, {0x38, 0x6C, 0xB0},
    {0xF0, 0x02, 0x7F}, {0xBF, 0x5B, 0x17}, {0x66, 0xC2, 0xA5}, {0xFC, 0x8D, 0x62}, {0x8D, 0xA0, 0xCB},
}};

Palette make_pastel() {
  Palette p = kDefaultPalette;
  for (Rgb& c : p) {
    for (auto& ch : c) ch = static_cast<std::uint8_t>((ch + 255) / 2);
  }
  return p;
}

constexpr Rgb kBackground = {255, 255, 255};
constexpr Rgb kWallColor = {40, 40, 40};
constexpr Rgb kLabelColor = {15, 15, 15};
constexpr Rgb kMaskColor = {128, 128, 128};
constexpr Rgb kTrailColor = {40, 90, 230};
constexpr Rgb kPoseColor = {0, 0, 255};
constexpr Rgb kHeadingColor = {230, 30, 30};
constexpr Rgb kCeiling = {205, 205, 215};

Rgb scaled(Rgb c, double f) {
  return {static_cast<std::uint8_t>(std::lround(c[0] * f)), static_cast<std::uint8_t>(std::lround(c[1] * f)),
          static_cast<std::uint8_t>(std::lround(c[2] * f))};
}

int to_int(double v) { return static_cast<int>(std::floor(v)); }

}  // namespace

const Palette& palette(const std::string& palette_id) {
  static const Palette pastel = make_pastel();
  if (palette_id == "default") return kDefaultPalette;
  if (palette_id == "pastel") return pastel;
  throw Error("unknown palette \"" + palette_id + "\"");
}

PixelMapper::PixelMapper(const geometry::FloorPlan& fp, const RasterConfig& cfg)
    : bounds_(fp.bounds()), ppm_(cfg.pixels_per_meter), margin_(cfg.margin) {
  if (!(ppm_ > 0.0)) throw Error("pixels_per_meter must be positive");
  if (margin_ < 0) throw Error("margin must be non-negative");
  width_ = static_cast<int>(std::ceil(bounds_.width() * ppm_)) + 2 * margin_;
  height_ = static_cast<int>(std::ceil(bounds_.height() * ppm_)) + 2 * margin_;
}

Point2 PixelMapper::to_pixel(Point2 p) const {
  return {margin_ + (p.x - bounds_.min_x) * ppm_, margin_ + (bounds_.max_y - p.y) * ppm_};
}

Point2 PixelMapper::to_meters(Point2 px) const {
  return {bounds_.min_x + (px.x - margin_) / ppm_, bounds_.max_y - (px.y - margin_) / ppm_};
}

Rgb region_color(const geometry::FloorPlan& fp, const geometry::Region& r, const std::string& palette_id) {
  const std::size_t idx = fp.type_index(r.type);
  if (idx >= kPaletteSize) throw Error("region type index exceeds the palette");
  return palette(palette_id)[idx];
}

Image render_floorplan(const geometry::FloorPlan& fp, const RasterConfig& cfg) {
  if (fp.type_catalog().size() > kPaletteSize) {
    throw Error("floor plan has " + std::to_string(fp.type_catalog().size()) + " region types; palette holds " +
                std::to_string(kPaletteSize));
  }
  const Palette& pal = palette(cfg.palette_id);
  const PixelMapper map(fp, cfg);
  Image img(map.width(), map.height(), kBackground);

  // Paint in descending id order so the smallest id wins shared pixels,
  // matching locate_region's tie-break.
  const auto& regions = fp.regions();
  for (auto it = regions.rbegin(); it != regions.rend(); ++it) {
    const auto& r = *it;
    const Rgb color = pal[fp.type_index(r.type)];
    const auto b = r.polygon.bounds();
    const Point2 top_left = map.to_pixel({b.min_x, b.max_y});
    const Point2 bottom_right = map.to_pixel({b.max_x, b.min_y});
    const int x0 = std::max(0, to_int(top_left.x) - 1);
    const int y0 = std::max(0, to_int(top_left.y) - 1);
    const int x1 = std::min(map.width() - 1, to_int(bottom_right.x) + 1);
    const int y1 = std::min(map.height() - 1, to_int(bottom_right.y) + 1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const Point2 p = map.to_meters({x + 0.5, y + 0.5});
        if (geometry::point_in_polygon(p, r.polygon) != geometry::Containment::outside) img.set(x, y, color);
      }
    }
  }

  for (const auto& w : geometry::extract_walls(fp).walls) {
    const Point2 a = map.to_pixel(w.segment.a);
    const Point2 b = map.to_pixel(w.segment.b);
    draw_line(img, to_int(a.x), to_int(a.y), to_int(b.x), to_int(b.y), kWallColor, 2);
  }

  const int label_scale = cfg.pixels_per_meter >= 20.0 ? 2 : 1;
  for (const auto& r : regions) {
    const Point2 c = map.to_pixel(geometry::pole_of_inaccessibility(r.polygon));
    draw_number(img, to_int(c.x), to_int(c.y), r.id, kLabelColor, label_scale);
  }
  return img;
}

void apply_mask(Image& raster, const geometry::FloorPlan& fp, const RasterConfig& cfg, const geometry::Box& rect) {
  const PixelMapper map(fp, cfg);
  const Point2 a = map.to_pixel({rect.min_x, rect.max_y});
  const Point2 b = map.to_pixel({rect.max_x, rect.min_y});
  fill_rect(raster, to_int(a.x), to_int(a.y), to_int(b.x) - 1, to_int(b.y) - 1, kMaskColor);
}

PlanOverlay overlay_pose_trajectory(const Image& raster, const geometry::FloorPlan& fp, const RasterConfig& cfg,
                                    std::span<const sim::AgentPose> trajectory, const sim::AgentPose& pose,
                                    double alpha) {
  const PixelMapper map(fp, cfg);
  PlanOverlay out{raster, 0, 0};
  auto pixel_of = [&](const sim::AgentPose& p) {
    const Point2 px = map.to_pixel(alpha * p.position());
    return std::pair<int, int>{to_int(px.x), to_int(px.y)};
  };

  std::vector<std::pair<int, int>> points;
  points.reserve(trajectory.size() + 1);
  for (const auto& p : trajectory) points.push_back(pixel_of(p));
  points.push_back(pixel_of(pose));

  for (std::size_t i = 1; i < points.size(); ++i) {
    draw_line(out.image, points[i - 1].first, points[i - 1].second, points[i].first, points[i].second, kTrailColor);
    ++out.segments_drawn;
  }
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    fill_rect(out.image, points[i].first - 1, points[i].second - 1, points[i].first + 1, points[i].second + 1,
              kTrailColor);
    ++out.markers_drawn;
  }

  const auto [cx, cy] = points.back();
  const int half = cfg.marker_size / 2;
  fill_rect(out.image, cx - half, cy - half, cx + half, cy + half, kPoseColor);
  ++out.markers_drawn;
  const int hx = cx + static_cast<int>(std::lround(std::sin(pose.theta) * cfg.marker_size));
  const int hy = cy - static_cast<int>(std::lround(std::cos(pose.theta) * cfg.marker_size));
  draw_line(out.image, cx, cy, hx, hy, kHeadingColor, 2);
  return out;
}

DualViewFrame compose_dual_view(const Image& observation, const Image& plan_view, std::size_t step) {
  if (observation.empty() || plan_view.empty()) throw Error("compose_dual_view: zero-size input");
  const Image obs = resize_to_height(observation, plan_view.height());
  DualViewFrame frame;
  frame.observation_width = obs.width();
  frame.floorplan_width = plan_view.width();
  frame.timestamp_step = step;
  frame.image = Image(obs.width() + plan_view.width(), plan_view.height());
  for (int y = 0; y < plan_view.height(); ++y) {
    for (int x = 0; x < obs.width(); ++x) frame.image.set(x, y, obs.at(x, y));
    for (int x = 0; x < plan_view.width(); ++x) frame.image.set(obs.width() + x, y, plan_view.at(x, y));
  }
  return frame;
}

double column_angle(const RaycastConfig& cfg, int column) {
  const double half = cfg.columns / 2.0;
  return std::atan((column - half) / half * std::tan(cfg.fov / 2.0));
}

Observation raycast_observation(const sim::World& world, const sim::AgentPose& pose, const RaycastConfig& cfg) {
  const auto& fp = world.plan();
  const geometry::Region* here = geometry::locate_region(fp, pose.position());
  if (!here) throw StateError("raycast_observation: pose lies outside every region");
  if (cfg.columns <= 0 || cfg.height <= 0) throw Error("raycast_observation: empty view");

  const Palette& pal = palette(cfg.palette_id);
  const Rgb floor = scaled(pal[fp.type_index(here->type)], 0.5);
  Observation obs;
  obs.image = Image(cfg.columns, cfg.height, kCeiling);
  obs.ray_length.assign(cfg.columns, std::numeric_limits<double>::infinity());
  obs.depth.assign(cfg.columns, std::numeric_limits<double>::infinity());
  obs.hit_region.assign(cfg.columns, -1);

  const Point2 origin = pose.position();
  for (int c = 0; c < cfg.columns; ++c) {
    const double offset = column_angle(cfg, c);
    const double heading = pose.theta + offset;
    const Point2 dir{std::sin(heading), std::cos(heading)};
    double best = std::numeric_limits<double>::infinity();
    int owner = -1;
    for (const auto& w : world.walls().walls) {
      const Point2 e = w.segment.b - w.segment.a;
      const double denom = geometry::cross(dir, e);
      if (std::abs(denom) < 1e-15) continue;
      const Point2 rel = w.segment.a - origin;
      const double s = geometry::cross(rel, e) / denom;
      const double t = geometry::cross(rel, dir) / denom;
      if (s >= 0.0 && t >= 0.0 && t <= 1.0 && s < best) {
        best = s;
        owner = w.region_id;
      }
    }

    int wall_top = cfg.height / 2;
    int wall_bottom = cfg.height / 2;
    if (best <= cfg.max_range) {
      obs.ray_length[c] = best;
      obs.depth[c] = best * std::cos(offset);
      obs.hit_region[c] = owner;
      const int h = static_cast<int>(std::min<double>(cfg.height, std::lround(cfg.height / std::max(obs.depth[c], 1e-6))));
      wall_top = (cfg.height - h) / 2;
      wall_bottom = wall_top + h;
      const double shade = 1.0 - 0.6 * std::min(1.0, best / cfg.max_range);
      const Rgb wall = scaled(pal[fp.type_index(fp.at(owner).type)], shade);
      for (int y = wall_top; y < wall_bottom; ++y) obs.image.set(c, y, wall);
    }
    for (int y = wall_bottom; y < cfg.height; ++y) {
      if (y >= cfg.height / 2) obs.image.set(c, y, floor);
    }
  }
  return obs;
}

}  // namespace fpnav::render
