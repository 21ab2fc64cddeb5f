#include "fpnav/dataset/qa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fpnav/dataset/actions.hpp"
#include "fpnav/error.hpp"
#include "json.hpp"

namespace fpnav::dataset {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kNavPrefix = "The next action is ";

std::string region_list(std::span<const TraceEntry> entries) {
  std::string out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ", ";
    out += entries[i].region_type + " " + std::to_string(entries[i].region_id);
  }
  return out;
}

std::string name(const TraceEntry& e) { return e.region_type + " " + std::to_string(e.region_id); }

std::vector<std::string> frame_refs(const std::string& episode_id, std::size_t frame_count) {
  std::vector<std::string> out;
  for (std::size_t i : sample_video_frames(frame_count)) out.push_back(frame_ref(episode_id, i));
  return out;
}

void require_step(const Rollout& ro, std::size_t t) {
  if (t >= ro.frame_count()) {
    throw StateError("step " + std::to_string(t) + " is beyond the trajectory (" + std::to_string(ro.frame_count()) +
                     " frames)");
  }
}

}  // namespace

std::vector<std::size_t> sample_video_frames(std::size_t frame_count, std::size_t h) {
  if (frame_count == 0) throw StateError("sample_video_frames needs at least one frame");
  std::vector<std::size_t> out;
  if (frame_count <= h) {
    for (std::size_t i = 0; i < frame_count; ++i) out.push_back(i);
    return out;
  }
  for (std::size_t k = 0; k < h; ++k) {
    const double v = static_cast<double>(k) * static_cast<double>(frame_count - 1) / static_cast<double>(h - 1);
    const auto i = static_cast<std::size_t>(std::lround(v));
    if (out.empty() || out.back() != i) out.push_back(i);
  }
  return out;
}

std::string_view to_string(QaTask task) {
  switch (task) {
    case QaTask::nav: return "nav";
    case QaTask::region_localization: return "region_localization";
    case QaTask::trajectory_reasoning: return "trajectory_reasoning";
    case QaTask::instruction_summarization: return "instruction_summarization";
  }
  return "nav";
}

QaTask qa_task_from_string(std::string_view name) {
  for (QaTask t : {QaTask::nav, QaTask::region_localization, QaTask::trajectory_reasoning,
                   QaTask::instruction_summarization}) {
    if (to_string(t) == name) return t;
  }
  throw ParseError("unknown QA task \"" + std::string(name) + "\"");
}

std::string qa_record_json(const QaRecord& r) {
  json j;
  j["task"] = std::string(to_string(r.task));
  j["episode_id"] = r.episode_id;
  j["step"] = r.step;
  j["prompt"] = r.prompt;
  j["frames"] = r.frames;
  j["target"] = r.target;
  j["caption"] = r.caption ? json(*r.caption) : json(nullptr);
  return j.dump();
}

QaRecord parse_qa_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("QA record: ") + e.what());
  }
  try {
    QaRecord r;
    r.task = qa_task_from_string(j.at("task").get<std::string>());
    r.episode_id = j.at("episode_id").get<std::string>();
    r.step = j.at("step").get<std::size_t>();
    r.prompt = j.at("prompt").get<std::string>();
    r.frames = j.at("frames").get<std::vector<std::string>>();
    r.target = j.at("target").get<std::string>();
    if (!j.at("caption").is_null()) r.caption = j.at("caption").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("QA record: ") + e.what());
  }
}

std::string frame_ref(const std::string& episode_id, std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%05zu", t);
  return episode_id + "/frames/" + buf + ".png";
}

Rollout rollout_episode(const Episode& ep, std::shared_ptr<const sim::World> world) {
  const auto& plan = world->plan();
  const sim::EpisodeState state = replay(ep, std::move(world));
  Rollout ro;
  ro.poses = state.trajectory;
  ro.actions = state.actions;
  std::vector<geometry::Point2> points;
  for (const auto& p : ro.poses) points.push_back(p.position());
  ro.trace = annotate_trajectory(plan, points);
  return ro;
}

std::vector<QaRecord> gen_nav_qa(const Episode& ep, const Rollout& ro) {
  std::vector<QaRecord> out;
  std::size_t t = 0;
  for (const sim::Action& a : merge_actions(ro.actions)) {
    QaRecord r;
    r.task = QaTask::nav;
    r.episode_id = ep.episode_id;
    r.step = t;
    r.prompt = "Instruction: " + ep.instruction.rendered +
               "\nThe frames show your navigation so far, each pairing your view with the floor plan. "
               "What is your next action?";
    r.frames = frame_refs(ep.episode_id, t + 1);
    r.target = std::string(kNavPrefix) + sim::describe(a) + ".";
    out.push_back(std::move(r));
    t += a.kind == sim::ActionKind::Stop ? 1 : decompose_action(a).size();
  }
  return out;
}

QaRecord gen_localization_qa(const Episode& ep, const Rollout& ro, const geometry::FloorPlan& fp, std::size_t t) {
  require_step(ro, t);
  const geometry::Region* r = geometry::locate_region(fp, ro.poses[t].position());
  if (!r) throw StateError("pose at step " + std::to_string(t) + " lies outside every region");
  QaRecord rec;
  rec.task = QaTask::region_localization;
  rec.episode_id = ep.episode_id;
  rec.step = t;
  rec.prompt = "Describe what you currently see, then name the type of region you are in.";
  rec.frames = {frame_ref(ep.episode_id, t)};
  rec.target = "Region type: " + r->type + ".";
  return rec;
}

ReasoningStage reasoning_stage(const Episode& ep, const Rollout& ro, std::size_t t) {
  require_step(ro, t);
  const auto history = compress_prefix(ro.trace, t + 1);
  if (history.size() <= 1) return ReasoningStage::initialization;
  if (history.back().region_id == ep.instruction.goal_id) return ReasoningStage::termination;
  return ReasoningStage::navigation;
}

std::string_view to_string(ReasoningStage stage) {
  switch (stage) {
    case ReasoningStage::initialization: return "initialization";
    case ReasoningStage::navigation: return "navigation";
    case ReasoningStage::termination: return "termination";
  }
  return "navigation";
}

QaRecord gen_trajectory_reasoning_qa(const Episode& ep, const Rollout& ro, std::size_t t) {
  const ReasoningStage stage = reasoning_stage(ep, ro, t);
  const auto history = compress_prefix(ro.trace, t + 1);
  if (history.empty()) throw StateError("pose at step " + std::to_string(t) + " lies outside every region");
  const TraceEntry& current = history.back();

  std::string target;
  if (stage != ReasoningStage::initialization) target += "Visited regions: " + region_list(history) + ". ";
  target += "Current region: " + name(current) + ". ";
  if (stage == ReasoningStage::termination) {
    target += ep.instruction.stop_condition.empty() ? "Stop here." : "Stop " + ep.instruction.stop_condition + ".";
  } else {
    const auto& full = ro.trace.compressed;
    const std::size_t next = history.size();
    if (next < full.size()) {
      target += "Next region: " + name(full[next]) + ".";
    } else {
      target += "Next region: " + ep.instruction.goal_type + " " + std::to_string(ep.instruction.goal_id) + ".";
    }
  }

  QaRecord rec;
  rec.task = QaTask::trajectory_reasoning;
  rec.episode_id = ep.episode_id;
  rec.step = t;
  rec.prompt = "Instruction: " + ep.instruction.rendered +
               "\nSummarize the regions visited so far in order, name the current region, and state what comes "
               "next.";
  rec.frames = frame_refs(ep.episode_id, t + 1);
  rec.target = std::move(target);
  return rec;
}

QaRecord gen_summarization_qa(const Episode& ep, const Rollout& ro) {
  QaRecord rec;
  rec.task = QaTask::instruction_summarization;
  rec.episode_id = ep.episode_id;
  rec.step = ro.frame_count() == 0 ? 0 : ro.frame_count() - 1;
  rec.prompt = "Summarize this navigation video as a concise instruction naming the start region, the goal region "
               "and where to stop.";
  rec.frames = frame_refs(ep.episode_id, std::max<std::size_t>(1, ro.frame_count()));
  rec.target = ep.instruction.rendered;
  return rec;
}

std::string nav_action_class(const QaRecord& r) {
  static const std::pair<std::string_view, std::string_view> kClasses[] = {
      {"move forward", "MoveForward"}, {"turn left", "TurnLeft"}, {"turn right", "TurnRight"}, {"stop", "Stop"}};
  const std::string_view prefix = kNavPrefix;
  std::string_view body(r.target);
  if (r.task != QaTask::nav || body.substr(0, prefix.size()) != prefix) {
    throw SchemaError("not a nav record: \"" + r.target + "\"");
  }
  body.remove_prefix(prefix.size());
  for (const auto& [text, cls] : kClasses) {
    if (body.substr(0, text.size()) == text) return std::string(cls);
  }
  throw SchemaError("unrecognized action in \"" + r.target + "\"");
}

std::vector<QaRecord> balance_actions(std::span<const QaRecord> records, BalanceReport* report, double floor) {
  // At floor >= 1 every duplicate raises the target as fast as the count.
  if (!(floor >= 0.0 && floor < 1.0)) throw Error("balance floor must lie in [0, 1)");
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < records.size(); ++i) by_class[nav_action_class(records[i])].push_back(i);

  std::vector<QaRecord> out(records.begin(), records.end());
  std::map<std::string, std::size_t> counts;
  for (const auto& [cls, idx] : by_class) counts[cls] = idx.size();
  if (report) report->before = counts;

  if (!by_class.empty()) {
    // Duplication raises the mean, so iterate until the floor holds.
    std::map<std::string, std::size_t> cursor;
    while (true) {
      std::size_t total = 0;
      for (const auto& [cls, n] : counts) total += n;
      const double threshold = floor * static_cast<double>(total) / static_cast<double>(counts.size());
      bool changed = false;
      for (auto& [cls, n] : counts) {
        if (static_cast<double>(n) >= threshold) continue;
        const auto& idx = by_class[cls];
        out.push_back(records[idx[cursor[cls]++ % idx.size()]]);
        ++n;
        changed = true;
      }
      if (!changed) break;
    }
  }
  if (report) report->after = counts;
  return out;
}

}  // namespace fpnav::dataset
