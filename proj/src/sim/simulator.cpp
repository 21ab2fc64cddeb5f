#include "fpnav/sim/simulator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fpnav/error.hpp"
#include "fpnav/random.hpp"
#include "json.hpp"

namespace fpnav::sim {

using geometry::Point2;

double normalize_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t -= two_pi;
  return t;
}

double angle_difference(double to, double from) {
  double d = normalize_angle(to - from);
  if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
  return d;
}

namespace {

std::string describe_point(Point2 p) {
  std::ostringstream ss;
  ss << "(" << p.x << ", " << p.y << ")";
  return ss.str();
}

// Applies one action to `pose` with the given perturbations, truncating
// translation against the world's walls.
AgentPose advance(const World& world, const AgentPose& pose, const Action& a, double eps_move,
                  double eps_drift, double eps_rot) {
  AgentPose next = pose;
  switch (a.kind) {
    case ActionKind::TurnLeft:
      next.theta = normalize_angle(pose.theta - a.magnitude + eps_rot);
      break;
    case ActionKind::TurnRight:
      next.theta = normalize_angle(pose.theta + a.magnitude + eps_rot);
      break;
    case ActionKind::MoveForward: {
      const double d = a.magnitude * (1.0 + eps_move);
      const double theta = normalize_angle(pose.theta + eps_drift);
      Point2 dir{std::sin(theta), std::cos(theta)};
      if (d < 0.0) dir = -1.0 * dir;
      const double travel = world.free_travel(pose.position(), dir, std::abs(d));
      next.theta = theta;
      if (travel == std::abs(d)) {
        // Untruncated moves follow the closed form exactly.
        next.x = pose.x + d * std::sin(theta);
        next.y = pose.y + d * std::cos(theta);
      } else {
        next.x = pose.x + travel * dir.x;
        next.y = pose.y + travel * dir.y;
      }
      break;
    }
    case ActionKind::Stop:
      break;
  }
  return next;
}

}  // namespace

double draw_scale_alpha(const NoiseConfig& noise) {
  if (noise.sigma_scale == 0.0) return 1.0;
  return 1.0 + noise.sigma_scale * keyed_normal(noise.seed, kScaleDrawIndex, 0);
}

EpisodeState reset(std::shared_ptr<const World> world, const AgentPose& start, Point2 goal,
                   const NoiseConfig& noise) {
  if (!world) throw StateError("reset: no world");
  if (!is_finite(start.position()) || !std::isfinite(start.theta)) throw StateError("reset: non-finite start pose");
  if (!geometry::locate_region(world->plan(), start.position())) {
    throw StateError("start " + describe_point(start.position()) + " lies outside every region");
  }
  if (!geometry::locate_region(world->plan(), goal)) {
    throw StateError("goal " + describe_point(goal) + " lies outside every region");
  }
  for (double s : {noise.sigma_move, noise.sigma_rot, noise.drift(), noise.sigma_scale, noise.sigma_jitter}) {
    if (!(s >= 0.0)) throw StateError("noise standard deviations must be non-negative");
  }
  EpisodeState state;
  state.world = std::move(world);
  state.noise = noise;
  state.true_pose = {start.x, start.y, normalize_angle(start.theta)};
  state.believed_pose = state.true_pose;
  state.goal = goal;
  state.trajectory.push_back(state.true_pose);
  state.believed_trajectory.push_back(state.believed_pose);
  state.scale_alpha = draw_scale_alpha(noise);
  return state;
}

void step(EpisodeState& state, const Action& action) {
  if (state.terminated) throw StateError("step after episode termination");
  if (!action.is_primitive()) {
    throw StateError("step expects a primitive action; decompose \"" + describe(action) + "\" first");
  }
  const NoiseConfig& n = state.noise;
  const std::uint64_t k = state.step_count;
  double eps_move = 0.0;
  double eps_drift = 0.0;
  double eps_rot = 0.0;
  if (action.kind == ActionKind::MoveForward) {
    if (n.sigma_move != 0.0) eps_move = n.sigma_move * keyed_normal(n.seed, k, kSlotMove);
    if (n.drift() != 0.0) eps_drift = n.drift() * keyed_normal(n.seed, k, kSlotDrift);
  } else if (action.kind == ActionKind::TurnLeft || action.kind == ActionKind::TurnRight) {
    if (n.sigma_rot != 0.0) eps_rot = n.sigma_rot * keyed_normal(n.seed, k, kSlotRotation);
  }

  state.true_pose = advance(*state.world, state.true_pose, action, eps_move, eps_drift, eps_rot);
  state.believed_pose = advance(*state.world, state.believed_pose, action, 0.0, 0.0, 0.0);
  if (action.kind == ActionKind::Stop) state.terminated = true;
  state.trajectory.push_back(state.true_pose);
  state.believed_trajectory.push_back(state.believed_pose);
  state.actions.push_back(action);
  ++state.step_count;
}

Point2 project_to_plan(const EpisodeState& state, Point2 p) { return state.scale_alpha * p; }

geometry::FloorPlan jitter_floorplan(const geometry::FloorPlan& fp, double sigma_jitter, std::uint64_t seed) {
  if (sigma_jitter == 0.0) return fp;
  std::vector<geometry::Region> regions;
  std::uint64_t vertex_index = 0;
  for (const auto& r : fp.regions()) {
    std::vector<Point2> ring = r.polygon.vertices();
    for (std::size_t i = 0; i < ring.size(); ++i, ++vertex_index) {
      const Point2 original = ring[i];
      bool accepted = false;
      for (std::uint64_t attempt = 0; attempt < 16 && !accepted; ++attempt) {
        ring[i] = original + sigma_jitter * Point2{keyed_normal(seed, vertex_index, 2 * attempt),
                                                   keyed_normal(seed, vertex_index, 2 * attempt + 1)};
        accepted = geometry::is_simple(ring) && geometry::signed_area2(ring) > 0.0;
      }
      if (!accepted) ring[i] = original;
    }
    regions.push_back({geometry::Polygon::from_vertices(std::move(ring)), r.type, r.id});
  }
  return geometry::FloorPlan(fp.scene_id(), fp.floor_id(), std::move(regions));
}

bool check_success(const EpisodeState& state) {
  return check_success(state, [](Point2 a, Point2 b) { return geometry::distance(a, b); });
}

bool check_success(const EpisodeState& state, const DistanceFn& distance) {
  if (!state.terminated) throw StateError("check_success before the episode terminated");
  return distance(state.true_pose.position(), state.goal) < kSuccessDistance;
}

std::string trajectory_log_jsonl(const EpisodeState& state) {
  std::string out;
  for (std::size_t t = 0; t < state.actions.size(); ++t) {
    const Action& a = state.actions[t];
    const AgentPose& p = state.trajectory[t + 1];
    const AgentPose& b = state.believed_trajectory[t + 1];
    nlohmann::ordered_json rec;
    rec["t"] = t;
    rec["action"] = to_string(a.kind);
    rec["mag"] = a.kind == ActionKind::Stop ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(a.magnitude);
    rec["true_pose"] = {p.x, p.y, p.theta};
    rec["believed_pose"] = {b.x, b.y, b.theta};
    out += rec.dump() + "\n";
  }
  return out;
}

std::vector<LogRecord> parse_trajectory_log(const std::string& text) {
  std::vector<LogRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      LogRecord r;
      r.t = j.at("t").get<std::size_t>();
      r.action.kind = action_kind_from_string(j.at("action").get<std::string>());
      r.action.magnitude = j.at("mag").is_null() ? 0.0 : j.at("mag").get<double>();
      const auto& tp = j.at("true_pose");
      const auto& bp = j.at("believed_pose");
      r.true_pose = {tp.at(0).get<double>(), tp.at(1).get<double>(), tp.at(2).get<double>()};
      r.believed_pose = {bp.at(0).get<double>(), bp.at(1).get<double>(), bp.at(2).get<double>()};
      out.push_back(r);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("trajectory log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace fpnav::sim
