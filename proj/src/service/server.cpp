#include "fpnav/service/server.hpp"

#include "fpnav/eval/benchmark.hpp"
#include "fpnav/geometry/floorplan_io.hpp"
#include "httplib.h"
#include "json.hpp"

namespace fpnav::service {

using json = nlohmann::ordered_json;

namespace {

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  json j;
  j["error"] = {{"code", code}, {"message", message}};
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

void send_json(httplib::Response& res, const json& j) { res.set_content(j.dump(), "application/json"); }

json frame_json(const SessionFrame& f) {
  json j;
  j["session_id"] = f.session_id;
  j["step"] = f.step;
  j["status"] = std::string(to_string(f.status));
  j["frame_url"] = f.frame_url;
  j["believed_pose"] = {f.believed_pose.x, f.believed_pose.y, f.believed_pose.theta};
  j["goal"] = {f.goal.x, f.goal.y};
  j["ne"] = f.navigation_error ? json(*f.navigation_error) : json(nullptr);
  return j;
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ServiceError("bad_request", 400, std::string("request body is not valid JSON: ") + e.what());
  }
}

// Runs a handler, mapping library errors onto API error codes.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e.http_status(), e.code(), e.what());
    } catch (const SchemaError& e) {
      send_error(res, 400, "schema", e.what());
    } catch (const ParseError& e) {
      send_error(res, 400, "parse", e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "bad_request", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

struct ApiServer::Impl {
  httplib::Server http;
};

ApiServer::ApiServer(Store& store, render::RasterConfig raster)
    : store_(store), sessions_(store, raster), impl_(std::make_unique<Impl>()) {
  auto& http = impl_->http;
  const render::RasterConfig raster_cfg = raster;

  http.Post("/floorplans", guarded([this](const httplib::Request& req, httplib::Response& res) {
              geometry::FloorPlan fp;
              try {
                fp = geometry::parse_floorplan(req.body);
              } catch (const ParseError& e) {
                throw ServiceError("floorplan_parse", 400, e.what());
              } catch (const SchemaError& e) {
                json j;
                j["error"] = {{"code", "floorplan_invalid"}, {"message", e.what()}};
                if (e.region_id()) j["error"]["region_id"] = *e.region_id();
                res.status = 400;
                res.set_content(j.dump(), "application/json");
                return;
              }
              send_json(res, {{"id", store_.put_floorplan(fp)}});
            }));

  http.Get(R"(/floorplans/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             res.set_content(store_.floorplan_document(req.matches[1]), "application/json");
           }));

  http.Get(R"(/floorplans/([^/]+)/raster\.png)",
           guarded([this, raster_cfg](const httplib::Request& req, httplib::Response& res) {
             const auto png = render::encode_png(render::render_floorplan(store_.get_floorplan(req.matches[1]), raster_cfg));
             res.set_content(std::string(png.begin(), png.end()), "image/png");
           }));

  http.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
              const json body = parse_body(req);
              const auto& pose = body.at("start_pose");
              if (!pose.is_array() || pose.size() != 3) {
                throw ServiceError("pose_invalid", 400, "start_pose must be [x, y, theta]");
              }
              sim::NoiseConfig noise;
              if (auto it = body.find("noise"); it != body.end() && !it->is_null()) {
                noise.sigma_move = it->value("sigma_move", 0.0);
                noise.sigma_rot = it->value("sigma_rot", 0.0);
                if (it->contains("sigma_drift") && !it->at("sigma_drift").is_null()) {
                  noise.sigma_drift = it->at("sigma_drift").get<double>();
                }
                noise.sigma_scale = it->value("sigma_scale", 0.0);
                noise.seed = it->value("seed", std::uint64_t{0});
              }
              const SessionFrame f = sessions_.create(
                  body.at("floorplan_id").get<std::string>(),
                  {pose[0].get<double>(), pose[1].get<double>(), pose[2].get<double>()},
                  body.at("instruction").get<std::string>(), noise);
              send_json(res, frame_json(f));
            }));

  http.Post(R"(/sessions/([^/]+)/step)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              const json body = parse_body(req);
              sim::Action a;
              try {
                a.kind = sim::action_kind_from_string(body.at("action").get<std::string>());
              } catch (const ParseError& e) {
                throw ServiceError("action_invalid", 400, e.what());
              }
              const json mag = body.contains("magnitude") ? body.at("magnitude") : json(nullptr);
              if (a.kind == sim::ActionKind::Stop) {
                a.magnitude = 0.0;
              } else if (mag.is_null()) {
                a.magnitude = a.primitive();
              } else if (mag.is_number() && mag.get<double>() > 0.0) {
                a.magnitude = mag.get<double>();
              } else {
                throw ServiceError("action_invalid", 400, "magnitude must be a positive number or null");
              }
              send_json(res, frame_json(sessions_.step(req.matches[1], a)));
            }));

  http.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             send_json(res, frame_json(sessions_.status(req.matches[1])));
           }));

  http.Get(R"(/sessions/([^/]+)/frame\.png)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const auto png = sessions_.frame_png(req.matches[1]);
             res.set_content(std::string(png.begin(), png.end()), "image/png");
           }));

  http.Post(R"(/sessions/([^/]+)/save)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              send_json(res, {{"episode_id", sessions_.save_as_episode(req.matches[1])}});
            }));

  http.Get("/episodes", guarded([this](const httplib::Request&, httplib::Response& res) {
             send_json(res, {{"episodes", store_.list_episodes()}});
           }));

  http.Get(R"(/runs/([^/]+)/table)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const auto format =
                 eval::table_format_from_string(req.has_param("format") ? req.get_param_value("format") : "md");
             const auto rows = eval::summarize_log(eval::parse_episode_log(store_.run_log(req.matches[1])));
             res.set_content(eval::format_table(rows, format),
                             format == eval::TableFormat::csv ? "text/csv" : "text/markdown");
           }));
}

ApiServer::~ApiServer() { stop(); }

bool ApiServer::listen(const std::string& host, int port) { return impl_->http.listen(host, port); }

int ApiServer::bind_any_port(const std::string& host) { return impl_->http.bind_to_any_port(host); }

bool ApiServer::run() { return impl_->http.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_) impl_->http.stop();
}

void ApiServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace fpnav::service
