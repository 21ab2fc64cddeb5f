#include "fpnav/geometry/floorplan_io.hpp"

#include <fstream>
#include <sstream>

#include "fpnav/error.hpp"
#include "fpnav/io.hpp"
#include "json.hpp"

namespace fpnav::geometry {

using nlohmann::json;

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& require(const json& obj, const char* key, std::optional<int> region_id) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    std::string msg = std::string("missing field \"") + key + "\"";
    if (region_id) msg += " in region " + std::to_string(*region_id);
    throw SchemaError(msg, region_id);
  }
  return *it;
}

Region parse_region(const json& jr, std::size_t index) {
  if (!jr.is_object()) throw SchemaError("regions[" + std::to_string(index) + "] is not an object");
  const json& jid = require(jr, "id", std::nullopt);
  if (!jid.is_number_integer() || jid.get<long long>() < 0) {
    throw SchemaError("regions[" + std::to_string(index) + "].id must be a non-negative integer");
  }
  const int id = jid.get<int>();
  const json& jtype = require(jr, "type", id);
  if (!jtype.is_string()) throw SchemaError("region " + std::to_string(id) + ": type must be a string", id);
  const json& jpoly = require(jr, "polygon", id);
  if (!jpoly.is_array()) throw SchemaError("region " + std::to_string(id) + ": polygon must be an array", id);

  std::vector<Point2> pts;
  for (const json& jp : jpoly) {
    if (!jp.is_array() || jp.size() != 2 || !jp[0].is_number() || !jp[1].is_number()) {
      throw SchemaError("region " + std::to_string(id) + ": vertices must be [x, y] pairs", id);
    }
    pts.push_back({jp[0].get<double>(), jp[1].get<double>()});
  }
  if (pts.size() > 3 && pts.front() == pts.back()) pts.pop_back();

  Region r;
  r.id = id;
  r.type = jtype.get<std::string>();
  try {
    r.polygon = Polygon::from_vertices(std::move(pts));
  } catch (const SchemaError& e) {
    throw SchemaError("region " + std::to_string(id) + ": " + e.what(), id);
  }
  return r;
}

}  // namespace

FloorPlan parse_floorplan(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("floor plan syntax error at " + line_column(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw SchemaError("floor plan document must be a JSON object");
  const json& scene = require(doc, "scene_id", std::nullopt);
  const json& floor = require(doc, "floor_id", std::nullopt);
  const json& regions = require(doc, "regions", std::nullopt);
  if (!scene.is_string() || !floor.is_string()) throw SchemaError("scene_id and floor_id must be strings");
  if (!regions.is_array()) throw SchemaError("regions must be an array");

  std::vector<Region> parsed;
  for (std::size_t i = 0; i < regions.size(); ++i) parsed.push_back(parse_region(regions[i], i));
  return FloorPlan(scene.get<std::string>(), floor.get<std::string>(), std::move(parsed));
}

std::string serialize_floorplan(const FloorPlan& fp) {
  nlohmann::ordered_json doc;
  doc["scene_id"] = fp.scene_id();
  doc["floor_id"] = fp.floor_id();
  doc["regions"] = nlohmann::ordered_json::array();
  for (const Region& r : fp.regions()) {
    nlohmann::ordered_json jr;
    jr["id"] = r.id;
    jr["type"] = r.type;
    jr["polygon"] = nlohmann::ordered_json::array();
    for (const Point2& p : r.polygon.vertices()) jr["polygon"].push_back({p.x, p.y});
    doc["regions"].push_back(std::move(jr));
  }
  return doc.dump(2) + "\n";
}

FloorPlan load_floorplan(const std::filesystem::path& path) { return parse_floorplan(read_text_file(path)); }

void save_floorplan(const FloorPlan& fp, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_floorplan(fp));
}

}  // namespace fpnav::geometry
