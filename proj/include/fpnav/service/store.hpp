#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fpnav/dataset/episode.hpp"
#include "fpnav/error.hpp"
#include "fpnav/geometry/floorplan.hpp"

namespace fpnav::service {

// Error surfaced to API clients with a stable code and an HTTP status.
class ServiceError : public Error {
 public:
  ServiceError(std::string code, int http_status, const std::string& what)
      : Error(what), code_(std::move(code)), status_(http_status) {}

  const std::string& code() const { return code_; }
  int http_status() const { return status_; }

 private:
  std::string code_;
  int status_;
};

// On-disk layout: floorplans/, episodes/, runs/, sessions/ under one root.
// Every write goes through a temporary file and a rename, and is parsed
// back before it is committed.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Content-addressed: the id is the hash of the canonical document, so
  // uploading the same plan twice yields the same id.
  std::string put_floorplan(const geometry::FloorPlan& fp);
  bool has_floorplan(const std::string& id) const;
  // Throws ServiceError "unknown_floorplan".
  geometry::FloorPlan get_floorplan(const std::string& id) const;
  std::string floorplan_document(const std::string& id) const;

  void put_episode(const dataset::Episode& ep);
  dataset::Episode get_episode(const std::string& id) const;
  std::vector<std::string> list_episodes() const;

  // runs/<id>/episodes.jsonl holds the per-episode log.
  std::filesystem::path run_dir(const std::string& id) const;
  std::string run_log(const std::string& id) const;

  void put_session_snapshot(const std::string& id, const std::string& json);

 private:
  std::filesystem::path path_for(std::string_view kind, const std::string& id, std::string_view ext) const;

  std::filesystem::path root_;
};

// Ids become file names; only [A-Za-z0-9._-] is accepted and a leading dot
// is rejected.
bool is_safe_id(std::string_view id);

}  // namespace fpnav::service
