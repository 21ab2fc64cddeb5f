#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fpnav/dataset/instruction.hpp"
#include "fpnav/render/render.hpp"
#include "fpnav/service/store.hpp"
#include "fpnav/sim/simulator.hpp"

namespace fpnav::service {

enum class SessionStatus { running, success, failure };

std::string_view to_string(SessionStatus s);

struct SessionFrame {
  std::string session_id;
  std::size_t step = 0;
  SessionStatus status = SessionStatus::running;
  std::string frame_url;  // relative reference to the latest dual-view frame
  sim::AgentPose believed_pose;
  geometry::Point2 goal;
  std::optional<double> navigation_error;  // set once the session stops
};

// Interactive episodes. Sessions are independent; calls on one session are
// serialized by its own mutex, so concurrent steps behave like some
// sequential order.
class SessionManager {
 public:
  explicit SessionManager(Store& store, render::RasterConfig raster = {});
  ~SessionManager();

  // Errors (ServiceError): unknown_floorplan 404, instruction_parse 400,
  // pose_invalid 400.
  SessionFrame create(const std::string& floorplan_id, const sim::AgentPose& start,
                      const std::string& instruction_text, const sim::NoiseConfig& noise = {});

  // Composite actions are decomposed and executed in order. Errors:
  // unknown_session 404, session_stopped 409.
  SessionFrame step(const std::string& session_id, const sim::Action& action);

  SessionFrame status(const std::string& session_id) const;
  std::vector<std::uint8_t> frame_png(const std::string& session_id) const;

  // Persists the recorded trajectory as an episode and returns its id.
  // Errors: unknown_session 404, session_running 409, episode_invalid 422
  // when the recording does not meet the episode invariants.
  std::string save_as_episode(const std::string& session_id);

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;

  Store& store_;
  render::RasterConfig raster_;
  mutable std::mutex mutex_;  // guards the session table only
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace fpnav::service
