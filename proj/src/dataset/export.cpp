#include "fpnav/dataset/export.hpp"

#include <cmath>
#include <cstdio>

#include "fpnav/dataset/actions.hpp"
#include "fpnav/dataset/qa.hpp"
#include "fpnav/error.hpp"
#include "fpnav/io.hpp"
#include "json.hpp"

namespace fpnav::dataset {

using json = nlohmann::ordered_json;

FrameRenderer::FrameRenderer(std::shared_ptr<const sim::World> world, render::RasterConfig raster,
                             render::RaycastConfig raycast)
    : world_(std::move(world)), raster_cfg_(std::move(raster)), raycast_cfg_(std::move(raycast)) {
  plan_ = render::render_floorplan(world_->plan(), raster_cfg_);
}

render::Image FrameRenderer::observation(const sim::AgentPose& pose) const {
  return render::raycast_observation(*world_, pose, raycast_cfg_).image;
}

render::Image FrameRenderer::plan_view(std::span<const sim::AgentPose> history, const sim::AgentPose& pose,
                                       double alpha) const {
  return render::overlay_pose_trajectory(plan_, world_->plan(), raster_cfg_, history, pose, alpha).image;
}

render::DualViewFrame FrameRenderer::dual_view(std::span<const sim::AgentPose> history, const sim::AgentPose& pose,
                                               std::size_t step, double alpha) const {
  return render::compose_dual_view(observation(pose), plan_view(history, pose, alpha), step);
}

std::string_view to_string(ExportLayout layout) {
  switch (layout) {
    case ExportLayout::dual_view: return "dual_view";
    case ExportLayout::dual_stream: return "dual_stream";
    case ExportLayout::interleaved: return "interleaved";
    case ExportLayout::static_separate: return "static_separate";
  }
  return "dual_view";
}

ExportLayout export_layout_from_string(std::string_view name) {
  for (ExportLayout l : {ExportLayout::dual_view, ExportLayout::dual_stream, ExportLayout::interleaved,
                         ExportLayout::static_separate}) {
    if (to_string(l) == name) return l;
  }
  throw ParseError("unknown export layout \"" + std::string(name) + "\"");
}

std::string ExportManifest::to_json() const {
  json j;
  j["layout"] = std::string(dataset::to_string(layout));
  json eps = json::array();
  for (const auto& e : episodes) {
    json rec;
    rec["episode_id"] = e.episode_id;
    switch (layout) {
      case ExportLayout::dual_view:
      case ExportLayout::interleaved: rec["frames"] = e.frames; break;
      case ExportLayout::dual_stream:
        rec["obs_frames"] = e.obs_frames;
        rec["plan_frames"] = e.plan_frames;
        break;
      case ExportLayout::static_separate:
        rec["static_plan"] = e.static_plan.value_or("");
        rec["obs_frames"] = e.obs_frames;
        break;
    }
    eps.push_back(std::move(rec));
  }
  j["episodes"] = std::move(eps);
  return j.dump(2) + "\n";
}

namespace {

std::string numbered(const std::string& episode_id, const char* dir, std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%05zu", t);
  return episode_id + "/" + dir + "/" + buf + ".png";
}

}  // namespace

ExportManifest export_dataset(std::span<const Episode> episodes, const WorldResolver& resolve, ExportLayout layout,
                              const std::filesystem::path& out_dir, const render::RasterConfig& raster) {
  ExportManifest manifest;
  manifest.layout = layout;
  std::map<const sim::World*, std::unique_ptr<FrameRenderer>> renderers;

  for (const Episode& ep : episodes) {
    auto world = resolve(ep);
    auto& renderer = renderers[world.get()];
    if (!renderer) renderer = std::make_unique<FrameRenderer>(world, raster);
    const Rollout ro = rollout_episode(ep, world);

    ExportedEpisode out;
    out.episode_id = ep.episode_id;
    if (layout == ExportLayout::static_separate) {
      out.static_plan = ep.episode_id + "/plan.png";
      render::write_png(out_dir / *out.static_plan, renderer->static_plan());
    }
    for (std::size_t t = 0; t < ro.frame_count(); ++t) {
      const std::span<const sim::AgentPose> history(ro.poses.data(), t);
      const sim::AgentPose& pose = ro.poses[t];
      switch (layout) {
        case ExportLayout::dual_view: {
          const std::string ref = frame_ref(ep.episode_id, t);
          render::write_png(out_dir / ref, renderer->dual_view(history, pose, t).image);
          out.frames.push_back(ref);
          break;
        }
        case ExportLayout::dual_stream:
        case ExportLayout::interleaved: {
          const std::string obs = numbered(ep.episode_id, "obs", t);
          const std::string plan = numbered(ep.episode_id, "plan", t);
          render::write_png(out_dir / obs, renderer->observation(pose));
          render::write_png(out_dir / plan, renderer->plan_view(history, pose));
          if (layout == ExportLayout::interleaved) {
            out.frames.push_back(obs);
            out.frames.push_back(plan);
          } else {
            out.obs_frames.push_back(obs);
            out.plan_frames.push_back(plan);
          }
          break;
        }
        case ExportLayout::static_separate: {
          const std::string obs = numbered(ep.episode_id, "obs", t);
          render::write_png(out_dir / obs, renderer->observation(pose));
          out.obs_frames.push_back(obs);
          break;
        }
      }
    }
    manifest.episodes.push_back(std::move(out));
  }
  write_file_atomic(out_dir / "manifest.json", manifest.to_json());
  return manifest;
}

std::string DatasetStats::to_json() const {
  json j;
  j["episodes"] = episodes;
  j["primitive_actions"] = primitive_actions;
  j["merged_actions"] = merged_actions;
  json lengths = json::object();
  for (const auto& [bin, n] : trajectory_length_m) lengths[std::to_string(bin)] = n;
  j["trajectory_length_m"] = std::move(lengths);
  json regions = json::object();
  for (const auto& [k, n] : regions_per_trajectory) regions[std::to_string(k)] = n;
  j["regions_per_trajectory"] = std::move(regions);
  return j.dump(2) + "\n";
}

DatasetStats dataset_stats(std::span<const Episode> episodes, const WorldResolver& resolve) {
  DatasetStats s;
  s.episodes = episodes.size();
  for (const Episode& ep : episodes) {
    for (const auto& a : ep.gt_actions) ++s.primitive_actions[std::string(sim::to_string(a.kind))];
    for (const auto& a : merge_actions(ep.gt_actions)) ++s.merged_actions[std::string(sim::to_string(a.kind))];
    double length = 0.0;
    for (std::size_t i = 1; i < ep.gt_path.size(); ++i) length += geometry::distance(ep.gt_path[i - 1], ep.gt_path[i]);
    ++s.trajectory_length_m[static_cast<long>(std::floor(length))];
    const auto world = resolve(ep);
    ++s.regions_per_trajectory[annotate_trajectory(world->plan(), ep.gt_path).compressed.size()];
  }
  return s;
}

}  // namespace fpnav::dataset
