#include "fpnav/dataset/generate.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "fpnav/dataset/actions.hpp"
#include "fpnav/dataset/catalog.hpp"
#include "fpnav/dataset/trace.hpp"
#include "fpnav/error.hpp"
#include "fpnav/eval/planner.hpp"
#include "fpnav/random.hpp"

namespace fpnav::dataset {

using geometry::Point2;

namespace {

std::optional<Point2> sample_point(const sim::World& world, const geometry::Region& r, double margin, Rng& rng) {
  const auto b = r.polygon.bounds();
  for (int i = 0; i < 200; ++i) {
    const Point2 p{rng.uniform(b.min_x, b.max_x), rng.uniform(b.min_y, b.max_y)};
    if (geometry::signed_boundary_distance(p, r.polygon) < margin) continue;
    if (world.wall_distance(p) < margin) continue;
    return p;
  }
  return std::nullopt;
}

// Greedy line-of-sight shortcutting.
std::vector<Point2> simplify(const eval::GridPlanner& planner, const std::vector<Point2>& path, double clearance) {
  std::vector<Point2> out{path.front()};
  std::size_t i = 0;
  while (i + 1 < path.size()) {
    std::size_t j = path.size() - 1;
    while (j > i + 1 && !planner.visible(path[i], path[j], clearance)) --j;
    out.push_back(path[j]);
    i = j;
  }
  return out;
}

}  // namespace

std::vector<Point2> densify_path(const std::vector<Point2>& path, double spacing) {
  if (path.empty()) return {};
  std::vector<Point2> out{path.front()};
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Point2 a = path[i - 1];
    const Point2 b = path[i];
    const auto pieces = std::max<long>(1, static_cast<long>(std::ceil(geometry::distance(a, b) / spacing - 1e-9)));
    for (long k = 1; k <= pieces; ++k) {
      out.push_back(k == pieces ? b : a + (static_cast<double>(k) / static_cast<double>(pieces)) * (b - a));
    }
  }
  return out;
}

std::vector<Episode> gen_episodes(const geometry::FloorPlan& fp, const EpisodeGenOptions& options,
                                  GenerationReport* report) {
  if (fp.regions().size() < 2) throw StateError("episode generation needs at least two regions");
  auto world = std::make_shared<const sim::World>(fp);
  eval::PlannerOptions popt;
  popt.clearance = options.path_clearance;
  const eval::GridPlanner planner(fp, popt);

  Rng rng(options.seed);
  GenerationReport local;
  GenerationReport& rep = report ? *report : local;
  auto reject = [&](const char* why) { ++rep.rejections[why]; };
  const std::size_t budget = options.max_attempts ? options.max_attempts : 50 * std::max<std::size_t>(1, options.count);
  const auto& regions = fp.regions();

  std::vector<Episode> out;
  while (out.size() < options.count) {
    if (rep.attempts >= budget) {
      throw StateError("generated only " + std::to_string(out.size()) + " of " + std::to_string(options.count) +
                       " episodes in " + std::to_string(budget) + " attempts");
    }
    ++rep.attempts;
    const auto& start_region = regions[rng.index(regions.size())];
    const auto& goal_region = regions[rng.index(regions.size())];
    const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const int template_id = static_cast<int>(rng.index(kTemplateCount));
    const auto& phrases = stop_phrases(goal_region.type);
    const std::string stop = phrases[rng.index(phrases.size())];
    if (start_region.id == goal_region.id) {
      reject("same_region");
      continue;
    }
    const auto start = sample_point(*world, start_region, options.wall_margin, rng);
    const auto goal = sample_point(*world, goal_region, options.wall_margin, rng);
    if (!start || !goal) {
      reject("no_free_point");
      continue;
    }
    if (geometry::distance(*start, *goal) < options.min_separation) {
      reject("too_close");
      continue;
    }
    const auto raw = planner.shortest_path(*start, *goal);
    if (raw.empty()) {
      reject("unreachable");
      continue;
    }

    Episode ep;
    char id[32];
    std::snprintf(id, sizeof id, "-%04zu", out.size());
    ep.episode_id = fp.scene_id() + id;
    ep.floorplan_ref = options.floorplan_ref;
    ep.start_pose = {start->x, start->y, heading};
    ep.goal = *goal;
    ep.gt_path = densify_path(simplify(planner, raw, options.path_clearance), options.waypoint_spacing);

    const RegionTrace trace = annotate_trajectory(fp, ep.gt_path);
    if (auto why = rejection_reason(trace)) {
      reject(why->c_str());
      continue;
    }
    if (trace.compressed.size() < options.min_regions) {
      reject("few_regions");
      continue;
    }
    ep.instruction = gen_instruction(trace, stop, template_id, goal_region.id, goal_region.type);
    try {
      ep.gt_actions = compile_path_to_actions(*world, ep.start_pose, ep.gt_path);
      validate_episode(ep, world);
    } catch (const Error&) {
      reject("replay");
      continue;
    }
    out.push_back(std::move(ep));
  }
  return out;
}

std::vector<Episode> filter_episodes(std::vector<Episode> episodes, const geometry::FloorPlan& fp,
                                     FilterReport* report) {
  FilterReport local;
  FilterReport& rep = report ? *report : local;
  rep.input = episodes.size();
  std::vector<Episode> kept;
  for (auto& ep : episodes) {
    if (auto why = rejection_reason(annotate_trajectory(fp, ep.gt_path))) {
      ++rep.rejected[*why];
      continue;
    }
    kept.push_back(std::move(ep));
  }
  rep.kept = kept.size();
  return kept;
}

}  // namespace fpnav::dataset
