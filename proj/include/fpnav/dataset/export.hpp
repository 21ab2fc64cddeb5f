#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpnav/dataset/episode.hpp"
#include "fpnav/render/render.hpp"

namespace fpnav::dataset {

// Renders observation, plan and dual-view frames for one world, reusing
// the static plan raster.
class FrameRenderer {
 public:
  FrameRenderer(std::shared_ptr<const sim::World> world, render::RasterConfig raster = {},
                render::RaycastConfig raycast = {});

  const render::Image& static_plan() const { return plan_; }
  render::Image observation(const sim::AgentPose& pose) const;
  // `history` holds the poses before `pose`; `alpha` maps world to plan.
  render::Image plan_view(std::span<const sim::AgentPose> history, const sim::AgentPose& pose,
                          double alpha = 1.0) const;
  render::DualViewFrame dual_view(std::span<const sim::AgentPose> history, const sim::AgentPose& pose,
                                  std::size_t step, double alpha = 1.0) const;

 private:
  std::shared_ptr<const sim::World> world_;
  render::RasterConfig raster_cfg_;
  render::RaycastConfig raycast_cfg_;
  render::Image plan_;
};

enum class ExportLayout { dual_view, dual_stream, interleaved, static_separate };

std::string_view to_string(ExportLayout layout);
ExportLayout export_layout_from_string(std::string_view name);

// Frame references are relative to the export directory.
struct ExportedEpisode {
  std::string episode_id;
  std::vector<std::string> frames;       // dual_view: composed; interleaved: obs, plan, obs, ...
  std::vector<std::string> obs_frames;   // dual_stream, static_separate
  std::vector<std::string> plan_frames;  // dual_stream
  std::optional<std::string> static_plan;  // static_separate
};

struct ExportManifest {
  ExportLayout layout = ExportLayout::dual_view;
  std::vector<ExportedEpisode> episodes;

  std::string to_json() const;
};

using WorldResolver = std::function<std::shared_ptr<const sim::World>(const Episode&)>;

// Renders each episode's zero-noise rollout in the chosen layout and
// writes <out_dir>/manifest.json. Composed frames land at
// <episode_id>/frames/<t>.png, matching frame_ref.
ExportManifest export_dataset(std::span<const Episode> episodes, const WorldResolver& resolve, ExportLayout layout,
                              const std::filesystem::path& out_dir, const render::RasterConfig& raster = {});

struct DatasetStats {
  std::size_t episodes = 0;
  std::map<std::string, std::size_t> primitive_actions;
  std::map<std::string, std::size_t> merged_actions;
  std::map<long, std::size_t> trajectory_length_m;  // 1 m bins, keyed by bin start
  std::map<std::size_t, std::size_t> regions_per_trajectory;

  std::string to_json() const;
};

DatasetStats dataset_stats(std::span<const Episode> episodes, const WorldResolver& resolve);

}  // namespace fpnav::dataset
