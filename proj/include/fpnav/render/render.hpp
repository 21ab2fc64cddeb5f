#pragma once

#include <array>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fpnav/geometry/floorplan.hpp"
#include "fpnav/render/image.hpp"
#include "fpnav/sim/simulator.hpp"

namespace fpnav::render {

inline constexpr std::size_t kPaletteSize = 30;
using Palette = std::array<Rgb, kPaletteSize>;

// Known ids: "default", "pastel". Throws Error for anything else.
const Palette& palette(const std::string& palette_id);

struct RasterConfig {
  double pixels_per_meter = 40.0;
  int margin = 16;
  int marker_size = 7;
  std::string palette_id = "default";
};

// Maps floor-plan meters to raster pixels. The raster covers the plan's
// bounding box plus the margin; +y in meters points up the image.
class PixelMapper {
 public:
  PixelMapper(const geometry::FloorPlan& fp, const RasterConfig& cfg);

  int width() const { return width_; }
  int height() const { return height_; }
  // Continuous pixel coordinates (pixel centers sit at +0.5).
  geometry::Point2 to_pixel(geometry::Point2 p) const;
  geometry::Point2 to_meters(geometry::Point2 pixel) const;

 private:
  geometry::Box bounds_;
  double ppm_;
  int margin_;
  int width_;
  int height_;
};

Rgb region_color(const geometry::FloorPlan& fp, const geometry::Region& r, const std::string& palette_id);

// Region fills by type color, darker wall strokes and numeric id labels at
// each region's pole of inaccessibility. Throws Error when the type catalog
// is longer than the palette.
Image render_floorplan(const geometry::FloorPlan& fp, const RasterConfig& cfg);

// Greys out a plan-space rectangle (used by the plan-masking ablation).
void apply_mask(Image& raster, const geometry::FloorPlan& fp, const RasterConfig& cfg, const geometry::Box& rect);

struct PlanOverlay {
  Image image;
  std::size_t segments_drawn = 0;
  std::size_t markers_drawn = 0;
};

// Plan view: the history polyline plus square markers and the current pose as a
// larger oriented square, all positioned through alpha * p.
PlanOverlay overlay_pose_trajectory(const Image& raster, const geometry::FloorPlan& fp, const RasterConfig& cfg,
                                    std::span<const sim::AgentPose> trajectory, const sim::AgentPose& pose,
                                    double alpha = 1.0);

struct DualViewFrame {
  Image image;
  int observation_width = 0;
  int floorplan_width = 0;
  std::size_t timestamp_step = 0;
};

// Observation and plan view side by side; the observation is rescaled to
// the plan height first.
DualViewFrame compose_dual_view(const Image& observation, const Image& plan_view, std::size_t step = 0);

struct RaycastConfig {
  double fov = std::numbers::pi / 2.0;
  int columns = 160;
  int height = 120;
  double max_range = 10.0;
  std::string palette_id = "default";
};

struct Observation {
  Image image;
  std::vector<double> ray_length;  // along the ray; infinity when nothing within range
  std::vector<double> depth;       // perpendicular-corrected
  std::vector<int> hit_region;     // owning region of the hit wall, -1 for none
};

// Column angle offset from the heading; column columns/2 looks straight ahead.
double column_angle(const RaycastConfig& cfg, int column);

// Throws StateError when the pose lies outside every region.
Observation raycast_observation(const sim::World& world, const sim::AgentPose& pose, const RaycastConfig& cfg = {});

}  // namespace fpnav::render
