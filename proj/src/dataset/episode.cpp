#include "fpnav/dataset/episode.hpp"

#include "fpnav/error.hpp"
#include "fpnav/io.hpp"
#include "json.hpp"

namespace fpnav::dataset {

using geometry::Point2;
using json = nlohmann::ordered_json;

namespace {

Point2 read_point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SchemaError(std::string(what) + " must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("episode is missing \"") + key + "\"");
  return *it;
}

template <typename T>
T typed(const json& j, const char* key) {
  const json& v = field(j, key);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("episode field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

std::string serialize_episode(const Episode& ep) {
  json j;
  j["episode_id"] = ep.episode_id;
  j["floorplan"] = ep.floorplan_ref;
  j["start_pose"] = {ep.start_pose.x, ep.start_pose.y, ep.start_pose.theta};
  j["goal"] = {ep.goal.x, ep.goal.y};
  const Instruction& in = ep.instruction;
  j["instruction"] = {{"template_id", in.template_id}, {"start_type", in.start_type},   {"start_id", in.start_id},
                      {"goal_type", in.goal_type},     {"goal_id", in.goal_id},
                      {"stop_condition", in.stop_condition}, {"rendered", in.rendered}};
  json path = json::array();
  for (const Point2& p : ep.gt_path) path.push_back({p.x, p.y});
  j["gt_path"] = std::move(path);
  if (!ep.gt_actions.empty()) {
    json actions = json::array();
    for (const auto& a : ep.gt_actions) {
      json rec;
      rec["action"] = std::string(sim::to_string(a.kind));
      rec["mag"] = a.kind == sim::ActionKind::Stop ? json(nullptr) : json(a.magnitude);
      actions.push_back(std::move(rec));
    }
    j["gt_actions"] = std::move(actions);
  }
  return j.dump(2) + "\n";
}

Episode parse_episode(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("episode JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("episode document must be a JSON object");

  Episode ep;
  ep.episode_id = typed<std::string>(j, "episode_id");
  ep.floorplan_ref = typed<std::string>(j, "floorplan");
  const json& pose = field(j, "start_pose");
  if (!pose.is_array() || pose.size() != 3) throw SchemaError("start_pose must be [x, y, theta]");
  for (const auto& v : pose) {
    if (!v.is_number()) throw SchemaError("start_pose must be [x, y, theta]");
  }
  ep.start_pose = {pose[0].get<double>(), pose[1].get<double>(), pose[2].get<double>()};
  ep.goal = read_point(field(j, "goal"), "goal");

  const json& in = field(j, "instruction");
  if (!in.is_object()) throw SchemaError("instruction must be an object");
  const std::string rendered = typed<std::string>(in, "rendered");
  ep.instruction = make_instruction(typed<int>(in, "template_id"), typed<std::string>(in, "start_type"),
                                    typed<int>(in, "start_id"), typed<std::string>(in, "goal_type"),
                                    typed<int>(in, "goal_id"), typed<std::string>(in, "stop_condition"));
  if (ep.instruction.rendered != rendered) {
    throw SchemaError("instruction.rendered does not match its template instantiation");
  }

  const json& path = field(j, "gt_path");
  if (!path.is_array() || path.empty()) throw SchemaError("gt_path must be a non-empty array");
  for (const auto& p : path) ep.gt_path.push_back(read_point(p, "gt_path entry"));

  if (auto it = j.find("gt_actions"); it != j.end()) {
    if (!it->is_array()) throw SchemaError("gt_actions must be an array");
    for (const auto& rec : *it) {
      if (!rec.is_object()) throw SchemaError("gt_actions entries must be objects");
      sim::Action a;
      try {
        a.kind = sim::action_kind_from_string(typed<std::string>(rec, "action"));
      } catch (const ParseError& e) {
        throw SchemaError(e.what());
      }
      const json& mag = field(rec, "mag");
      if (a.kind == sim::ActionKind::Stop) {
        a.magnitude = 0.0;
      } else if (mag.is_number()) {
        a.magnitude = mag.get<double>();
      } else if (mag.is_null()) {
        a.magnitude = a.primitive();
      } else {
        throw SchemaError("gt_actions mag must be a number or null");
      }
      ep.gt_actions.push_back(a);
    }
  }
  return ep;
}

Episode load_episode(const std::filesystem::path& path) { return parse_episode(read_text_file(path)); }

void save_episode(const Episode& ep, const std::filesystem::path& path) {
  const std::string text = serialize_episode(ep);
  parse_episode(text);
  write_file_atomic(path, text);
}

sim::EpisodeState replay(const Episode& ep, std::shared_ptr<const sim::World> world) {
  sim::EpisodeState state = sim::reset(std::move(world), ep.start_pose, ep.goal, {});
  for (const auto& a : ep.gt_actions) {
    if (state.terminated) break;
    sim::step(state, a);
  }
  if (!state.terminated) sim::step(state, sim::Action::stop());
  return state;
}

void validate_episode(const Episode& ep, std::shared_ptr<const sim::World> world) {
  const auto& fp = world->plan();
  if (ep.gt_path.empty()) throw SchemaError("episode " + ep.episode_id + ": empty gt_path");
  if (geometry::distance(ep.gt_path.front(), ep.start_pose.position()) > 1e-6) {
    throw SchemaError("episode " + ep.episode_id + ": gt_path does not begin at the start position");
  }
  const geometry::Region* goal_region = geometry::locate_region(fp, ep.goal);
  if (!goal_region) throw SchemaError("episode " + ep.episode_id + ": goal lies outside every region");
  if (goal_region->id != ep.instruction.goal_id) {
    throw SchemaError("episode " + ep.episode_id + ": goal lies in region " + std::to_string(goal_region->id) +
                          ", not the instructed goal region",
                      goal_region->id);
  }
  if (ep.gt_actions.empty()) throw SchemaError("episode " + ep.episode_id + ": no gt_actions to replay");
  for (const auto& a : ep.gt_actions) {
    if (!a.is_primitive()) throw SchemaError("episode " + ep.episode_id + ": gt_actions must be primitives");
  }

  const sim::EpisodeState state = replay(ep, world);
  std::size_t next = 0;
  for (const auto& pose : state.trajectory) {
    while (next < ep.gt_path.size() &&
           geometry::distance(pose.position(), ep.gt_path[next]) <= kReplayTolerance + 1e-9) {
      ++next;
    }
  }
  if (next < ep.gt_path.size()) {
    throw SchemaError("episode " + ep.episode_id + ": replay misses waypoint " + std::to_string(next));
  }
  if (!sim::check_success(state)) {
    throw SchemaError("episode " + ep.episode_id + ": replay does not end within the success radius");
  }
}

}  // namespace fpnav::dataset
