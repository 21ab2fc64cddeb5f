#include "fpnav/service/store.hpp"

#include <algorithm>

#include "fpnav/geometry/floorplan_io.hpp"
#include "fpnav/io.hpp"

namespace fpnav::service {

namespace fs = std::filesystem;

bool is_safe_id(std::string_view id) {
  if (id.empty() || id.front() == '.' || id.size() > 200) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
           c == '-';
  });
}

Store::Store(fs::path root) : root_(std::move(root)) {
  for (const char* sub : {"floorplans", "episodes", "runs", "sessions"}) fs::create_directories(root_ / sub);
}

fs::path Store::path_for(std::string_view kind, const std::string& id, std::string_view ext) const {
  if (!is_safe_id(id)) throw ServiceError("invalid_id", 400, "invalid id \"" + id + "\"");
  return root_ / std::string(kind) / (id + std::string(ext));
}

std::string Store::put_floorplan(const geometry::FloorPlan& fp) {
  const std::string doc = geometry::serialize_floorplan(fp);
  const std::string id = hex64(fnv1a64(doc));
  geometry::parse_floorplan(doc);
  const fs::path path = path_for("floorplans", id, ".json");
  if (!fs::exists(path)) write_file_atomic(path, doc);
  return id;
}

bool Store::has_floorplan(const std::string& id) const {
  return is_safe_id(id) && fs::exists(path_for("floorplans", id, ".json"));
}

std::string Store::floorplan_document(const std::string& id) const {
  if (!has_floorplan(id)) throw ServiceError("unknown_floorplan", 404, "no floor plan with id \"" + id + "\"");
  return read_text_file(path_for("floorplans", id, ".json"));
}

geometry::FloorPlan Store::get_floorplan(const std::string& id) const {
  return geometry::parse_floorplan(floorplan_document(id));
}

void Store::put_episode(const dataset::Episode& ep) {
  dataset::save_episode(ep, path_for("episodes", ep.episode_id, ".json"));
}

dataset::Episode Store::get_episode(const std::string& id) const {
  const fs::path path = path_for("episodes", id, ".json");
  if (!fs::exists(path)) throw ServiceError("unknown_episode", 404, "no episode with id \"" + id + "\"");
  return dataset::load_episode(path);
}

std::vector<std::string> Store::list_episodes() const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root_ / "episodes")) {
    if (entry.path().extension() == ".json") ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

fs::path Store::run_dir(const std::string& id) const {
  if (!is_safe_id(id)) throw ServiceError("invalid_id", 400, "invalid id \"" + id + "\"");
  return root_ / "runs" / id;
}

std::string Store::run_log(const std::string& id) const {
  const fs::path path = run_dir(id) / "episodes.jsonl";
  if (!fs::exists(path)) throw ServiceError("unknown_run", 404, "no run with id \"" + id + "\"");
  return read_text_file(path);
}

void Store::put_session_snapshot(const std::string& id, const std::string& json) {
  write_file_atomic(path_for("sessions", id, ".json"), json);
}

}  // namespace fpnav::service
