#include "fpnav/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpnav/error.hpp"

namespace fpnav::eval {

using geometry::Point2;

namespace {

double distance_to_goal(Point2 p, Point2 goal, DistanceMode mode, const GridPlanner* planner) {
  if (mode == DistanceMode::euclidean) return geometry::distance(p, goal);
  if (!planner) throw Error("geodesic distance needs a planner");
  try {
    return planner->shortest_path_length(p, goal);
  } catch (const StateError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

std::string_view to_string(DistanceMode mode) { return mode == DistanceMode::euclidean ? "euclidean" : "geodesic"; }

DistanceMode distance_mode_from_string(std::string_view name) {
  if (name == "euclidean") return DistanceMode::euclidean;
  if (name == "geodesic") return DistanceMode::geodesic;
  throw ParseError("unknown distance mode \"" + std::string(name) + "\"");
}

double navigation_error(const EpisodeResult& r, DistanceMode mode, const GridPlanner* planner) {
  if (!r.terminated) throw StateError("navigation error of an episode that has not terminated");
  return distance_to_goal(r.final_pose.position(), r.goal, mode, planner);
}

bool success(const EpisodeResult& r) { return r.ne < sim::kSuccessDistance; }

bool oracle_success(const EpisodeResult& r, DistanceMode mode, const GridPlanner* planner) {
  // Euclidean distance never exceeds geodesic, so it prunes cheaply.
  for (const Point2& p : r.positions) {
    if (geometry::distance(p, r.goal) >= sim::kSuccessDistance) continue;
    if (distance_to_goal(p, r.goal, mode, planner) < sim::kSuccessDistance) return true;
  }
  return false;
}

void score_result(EpisodeResult& r, DistanceMode mode, const GridPlanner* planner) {
  r.ne = navigation_error(r, mode, planner);
  r.success = success(r);
  r.oracle_success = r.success || oracle_success(r, mode, planner);
}

double spl(std::span<const EpisodeResult> results) {
  if (results.empty()) throw Error("SPL of an empty batch");
  double total = 0.0;
  for (const auto& r : results) {
    if (!(r.shortest_path_length > 0.0)) {
      throw Error("episode " + r.episode_id + " has non-positive shortest path length");
    }
    if (!r.success) continue;
    // A disconnected start and goal leaves nothing to normalize against.
    total += std::isinf(r.shortest_path_length) ? 1.0
                                                : r.shortest_path_length / std::max(r.path_length, r.shortest_path_length);
  }
  return total / static_cast<double>(results.size());
}

MetricsSummary summarize(std::span<const EpisodeResult> results) {
  if (results.empty()) throw Error("cannot summarize an empty batch");
  MetricsSummary m;
  m.n_episodes = results.size();
  for (const auto& r : results) {
    m.ne_mean += r.ne;
    m.sr += r.success ? 1.0 : 0.0;
    m.osr += r.oracle_success ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(results.size());
  m.ne_mean /= n;
  m.sr /= n;
  m.osr /= n;
  m.spl = spl(results);
  return m;
}

}  // namespace fpnav::eval
