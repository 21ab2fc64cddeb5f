#pragma once

#include <memory>
#include <string>

#include "fpnav/service/session.hpp"
#include "fpnav/service/store.hpp"

namespace fpnav::service {

// JSON-over-HTTP API:
//   POST /floorplans                  upload a floor-plan document -> {"id"}
//   GET  /floorplans/{id}             the stored document
//   GET  /floorplans/{id}/raster.png  rendered plan
//   POST /sessions                    {"floorplan_id", "start_pose": [x,y,theta], "instruction", "noise"?}
//   POST /sessions/{id}/step          {"action", "magnitude": num|null}
//   GET  /sessions/{id}               current status
//   GET  /sessions/{id}/frame.png     latest dual-view frame
//   POST /sessions/{id}/save          -> {"episode_id"}
//   GET  /episodes                    {"episodes": [ids]}
//   GET  /runs/{id}/table             results table (?format=md|csv)
// Errors answer {"error": {"code", "message"}} with a matching status.
class ApiServer {
 public:
  explicit ApiServer(Store& store, render::RasterConfig raster = {});
  ~ApiServer();

  // Binds and serves until stop(); returns false when binding fails.
  bool listen(const std::string& host, int port);
  // Binds to an ephemeral port and returns it (or -1); serve with run().
  int bind_any_port(const std::string& host);
  bool run();
  void stop();
  void wait_until_ready() const;

  SessionManager& sessions() { return sessions_; }

 private:
  struct Impl;
  Store& store_;
  SessionManager sessions_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fpnav::service
