#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fpnav/eval/planner.hpp"
#include "fpnav/sim/simulator.hpp"

namespace fpnav::eval {

enum class DistanceMode { euclidean, geodesic };

std::string_view to_string(DistanceMode mode);
DistanceMode distance_mode_from_string(std::string_view name);

struct EpisodeResult {
  std::string episode_id;
  std::uint64_t seed = 0;
  bool terminated = false;
  geometry::Point2 goal;
  std::vector<geometry::Point2> positions;  // true trajectory, [0] = start
  sim::AgentPose final_pose;
  std::size_t steps = 0;
  double path_length = 0.0;           // P: distance actually travelled
  double shortest_path_length = 0.0;  // L: geodesic start-goal distance
  // Filled by score_result.
  double ne = 0.0;
  bool success = false;
  bool oracle_success = false;
  std::string diagnostic;
};

// Final-to-goal distance. Geodesic mode needs a planner over the true plan
// and yields infinity when disconnected. Throws StateError for a result
// that never terminated.
double navigation_error(const EpisodeResult& r, DistanceMode mode, const GridPlanner* planner = nullptr);

// NE strictly below the success radius; reads r.ne.
bool success(const EpisodeResult& r);

// Some trajectory position came strictly within the success radius.
bool oracle_success(const EpisodeResult& r, DistanceMode mode, const GridPlanner* planner = nullptr);

// Fills ne, success and oracle_success.
void score_result(EpisodeResult& r, DistanceMode mode, const GridPlanner* planner = nullptr);

// Mean of S_i L_i / max(P_i, L_i). Throws Error when some L_i <= 0.
double spl(std::span<const EpisodeResult> results);

struct MetricsSummary {
  std::size_t n_episodes = 0;
  double ne_mean = 0.0;
  double sr = 0.0;
  double osr = 0.0;
  double spl = 0.0;
};

// Throws Error on an empty batch.
MetricsSummary summarize(std::span<const EpisodeResult> results);

}  // namespace fpnav::eval
