#include "fpnav/service/session.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "fpnav/dataset/actions.hpp"
#include "fpnav/dataset/episode.hpp"
#include "fpnav/dataset/export.hpp"
#include "fpnav/eval/planner.hpp"
#include "fpnav/io.hpp"
#include "json.hpp"

namespace fpnav::service {

using geometry::Point2;

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::running: return "running";
    case SessionStatus::success: return "success";
    case SessionStatus::failure: return "failure";
  }
  return "running";
}

struct SessionManager::Session {
  std::mutex mutex;
  std::string id;
  std::string floorplan_id;
  dataset::Instruction instruction;
  std::string created_at;
  std::shared_ptr<const sim::World> world;
  std::unique_ptr<dataset::FrameRenderer> renderer;
  sim::EpisodeState state;
  SessionStatus status = SessionStatus::running;
  std::optional<double> ne;
  std::vector<std::uint8_t> frame;  // PNG of the latest dual-view frame

  SessionFrame snapshot() const {
    return {id, state.step_count, status, "/sessions/" + id + "/frame.png?step=" + std::to_string(state.step_count),
            state.believed_pose, state.goal, ne};
  }

  void render_frame() {
    std::vector<sim::AgentPose> history(state.believed_trajectory.begin(), state.believed_trajectory.end() - 1);
    frame = render::encode_png(renderer->dual_view(history, state.believed_pose, state.step_count, state.scale_alpha).image);
  }

  std::string snapshot_json() const {
    nlohmann::ordered_json j;
    j["session_id"] = id;
    j["floorplan_id"] = floorplan_id;
    j["instruction"] = instruction.rendered;
    j["created_at"] = created_at;
    j["step"] = state.step_count;
    j["status"] = std::string(to_string(status));
    j["goal"] = {state.goal.x, state.goal.y};
    j["noise"] = {{"sigma_move", state.noise.sigma_move}, {"sigma_rot", state.noise.sigma_rot},
                  {"sigma_drift", state.noise.drift()},   {"sigma_scale", state.noise.sigma_scale},
                  {"seed", state.noise.seed}};
    j["trajectory"] = nlohmann::ordered_json::array();
    for (const auto& p : state.trajectory) j["trajectory"].push_back({p.x, p.y, p.theta});
    j["actions"] = nlohmann::ordered_json::array();
    for (const auto& a : state.actions) j["actions"].push_back(std::string(sim::to_string(a.kind)));
    return j.dump(2) + "\n";
  }
};

SessionManager::SessionManager(Store& store, render::RasterConfig raster) : store_(store), raster_(std::move(raster)) {}
SessionManager::~SessionManager() = default;

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError("unknown_session", 404, "no session with id \"" + id + "\"");
  return it->second;
}

SessionFrame SessionManager::create(const std::string& floorplan_id, const sim::AgentPose& start,
                                    const std::string& instruction_text, const sim::NoiseConfig& noise) {
  const geometry::FloorPlan fp = store_.get_floorplan(floorplan_id);

  dataset::Instruction instruction;
  try {
    instruction = dataset::parse_instruction(instruction_text);
  } catch (const ParseError& e) {
    throw ServiceError("instruction_parse", 400, e.what());
  }
  const geometry::Region* goal_region = fp.find(instruction.goal_id);
  if (!goal_region || goal_region->type != instruction.goal_type) {
    throw ServiceError("instruction_parse", 400,
                       "goal region " + instruction.goal_type + " " + std::to_string(instruction.goal_id) +
                           " does not exist in this floor plan");
  }

  auto world = std::make_shared<const sim::World>(fp);
  if (!std::isfinite(start.x) || !std::isfinite(start.y) || !std::isfinite(start.theta) ||
      !world->in_free_space(start.position())) {
    throw ServiceError("pose_invalid", 400, "start pose must lie inside a region and clear of every wall");
  }
  for (double s : {noise.sigma_move, noise.sigma_rot, noise.drift(), noise.sigma_scale, noise.sigma_jitter}) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ServiceError("noise_invalid", 400, "noise levels must be non-negative");
  }

  auto session = std::make_shared<Session>();
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  session->created_at = stamp;
  {
    std::lock_guard lock(mutex_);
    const auto ticks = std::chrono::duration_cast<std::chrono::nanoseconds>(now.time_since_epoch()).count();
    session->id = "s" + hex64(fnv1a64(std::to_string(++counter_) + "/" + std::to_string(ticks))).substr(0, 12);
  }
  session->floorplan_id = floorplan_id;
  session->instruction = instruction;
  session->world = world;
  session->renderer = std::make_unique<dataset::FrameRenderer>(world, raster_);
  session->state = sim::reset(world, start, geometry::pole_of_inaccessibility(goal_region->polygon), noise);
  session->render_frame();
  store_.put_session_snapshot(session->id, session->snapshot_json());

  SessionFrame out = session->snapshot();
  std::lock_guard lock(mutex_);
  sessions_[session->id] = std::move(session);
  return out;
}

SessionFrame SessionManager::step(const std::string& session_id, const sim::Action& action) {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  if (s->state.terminated) throw ServiceError("session_stopped", 409, "session " + session_id + " has stopped");
  for (const auto& a : dataset::decompose_action(action)) {
    sim::step(s->state, a);
    if (s->state.terminated) break;
  }
  if (s->state.terminated) {
    s->ne = geometry::distance(s->state.true_pose.position(), s->state.goal);
    s->status = sim::check_success(s->state) ? SessionStatus::success : SessionStatus::failure;
  }
  s->render_frame();
  store_.put_session_snapshot(s->id, s->snapshot_json());
  return s->snapshot();
}

SessionFrame SessionManager::status(const std::string& session_id) const {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  return s->snapshot();
}

std::vector<std::uint8_t> SessionManager::frame_png(const std::string& session_id) const {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  return s->frame;
}

std::string SessionManager::save_as_episode(const std::string& session_id) {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  if (!s->state.terminated) {
    throw ServiceError("session_running", 409, "session " + session_id + " is still running; stop it first");
  }
  dataset::Episode ep;
  ep.episode_id = "session-" + s->id;
  ep.floorplan_ref = s->floorplan_id;
  ep.start_pose = s->state.trajectory.front();
  ep.goal = s->state.goal;
  ep.instruction = s->instruction;
  for (const auto& p : s->state.trajectory) {
    if (ep.gt_path.empty() || !(ep.gt_path.back() == p.position())) ep.gt_path.push_back(p.position());
  }
  if (s->state.noise.actuation_free()) {
    ep.gt_actions = s->state.actions;
  } else {
    // The executed primitives would not retrace a noisy path; recompile.
    const eval::GridPlanner planner(s->world->plan());
    try {
      ep.gt_actions = dataset::compile_path_to_actions(*s->world, ep.start_pose, ep.gt_path, &planner);
    } catch (const Error& e) {
      throw ServiceError("episode_invalid", 422, e.what());
    }
  }
  try {
    dataset::validate_episode(ep, s->world);
  } catch (const SchemaError& e) {
    throw ServiceError("episode_invalid", 422, e.what());
  }
  store_.put_episode(ep);
  return ep.episode_id;
}

}  // namespace fpnav::service
