#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fpnav/geometry/floorplan.hpp"
#include "fpnav/sim/action.hpp"
#include "fpnav/sim/world.hpp"

namespace fpnav::sim {

// Heading 0 faces +y and grows clockwise: x += d sin(theta), y += d cos(theta).
struct AgentPose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  geometry::Point2 position() const { return {x, y}; }
  friend bool operator==(const AgentPose&, const AgentPose&) = default;
};

// Wraps to [0, 2*pi).
double normalize_angle(double theta);
// Signed difference to - from, wrapped to (-pi, pi].
double angle_difference(double to, double from);

struct NoiseConfig {
  double sigma_move = 0.0;   // relative distance error, unitless
  double sigma_rot = 0.0;    // turn error, radians
  std::optional<double> sigma_drift;  // straight-line heading drift, radians; defaults to 0.1 * sigma_move
  double sigma_scale = 0.0;  // std of the projection scale multiplier about 1
  double sigma_jitter = 0.0; // vertex displacement, meters
  std::uint64_t seed = 0;

  double drift() const { return sigma_drift.value_or(0.1 * sigma_move); }
  bool actuation_free() const { return sigma_move == 0.0 && sigma_rot == 0.0 && drift() == 0.0; }
};

// Draw slots within one step. The scale multiplier uses its own index.
inline constexpr std::uint64_t kSlotMove = 0;
inline constexpr std::uint64_t kSlotDrift = 1;
inline constexpr std::uint64_t kSlotRotation = 2;
inline constexpr std::uint64_t kScaleDrawIndex = ~0ull;

struct EpisodeState {
  std::shared_ptr<const World> world;
  NoiseConfig noise;
  AgentPose true_pose;
  AgentPose believed_pose;
  geometry::Point2 goal;
  std::vector<AgentPose> trajectory;           // true poses, [0] = start
  std::vector<AgentPose> believed_trajectory;  // dead-reckoned poses, same indexing
  std::vector<Action> actions;                 // executed primitives
  std::size_t step_count = 0;
  bool terminated = false;
  double scale_alpha = 1.0;
};

// Throws StateError when start or goal lies outside every region.
EpisodeState reset(std::shared_ptr<const World> world, const AgentPose& start, geometry::Point2 goal,
                   const NoiseConfig& noise);

// Executes one primitive action. Throws StateError after termination or
// for a non-primitive magnitude.
void step(EpisodeState& state, const Action& action);

// Floor-plan coordinates of a world point under the episode's scale multiplier.
geometry::Point2 project_to_plan(const EpisodeState& state, geometry::Point2 p);

// Draws the per-episode scale multiplier (exactly 1 when sigma_scale is 0).
double draw_scale_alpha(const NoiseConfig& noise);

// Displaces every vertex by N(0, sigma^2 I). A draw that would break
// polygon simplicity is retried up to 16 times, then the vertex stays put.
geometry::FloorPlan jitter_floorplan(const geometry::FloorPlan& fp, double sigma_jitter, std::uint64_t seed);

using DistanceFn = std::function<double(geometry::Point2, geometry::Point2)>;

// Final true position strictly within kSuccessDistance of the goal.
// Throws StateError before termination.
bool check_success(const EpisodeState& state);
bool check_success(const EpisodeState& state, const DistanceFn& distance);

// One line-delimited JSON record per executed primitive:
//   { "t", "action", "mag", "true_pose": [x,y,theta], "believed_pose": [x,y,theta] }
std::string trajectory_log_jsonl(const EpisodeState& state);

struct LogRecord {
  std::size_t t = 0;
  Action action;
  AgentPose true_pose;
  AgentPose believed_pose;
};

std::vector<LogRecord> parse_trajectory_log(const std::string& text);

}  // namespace fpnav::sim
