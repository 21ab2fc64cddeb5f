#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpnav/dataset/episode.hpp"
#include "fpnav/dataset/trace.hpp"

namespace fpnav::dataset {

inline constexpr std::size_t kVideoLength = 6;

// Frame indices kept from a T-frame video: all of them when T <= h,
// otherwise round(k (T-1) / (h-1)) for k = 0..h-1, deduplicated.
std::vector<std::size_t> sample_video_frames(std::size_t frame_count, std::size_t h = kVideoLength);

enum class QaTask { nav, region_localization, trajectory_reasoning, instruction_summarization };

std::string_view to_string(QaTask task);
QaTask qa_task_from_string(std::string_view name);

struct QaRecord {
  QaTask task = QaTask::nav;
  std::string episode_id;
  std::size_t step = 0;
  std::string prompt;
  std::vector<std::string> frames;
  std::string target;
  std::optional<std::string> caption;
};

std::string qa_record_json(const QaRecord& r);
QaRecord parse_qa_record(std::string_view line);

// Relative reference of the frame captured before action t.
std::string frame_ref(const std::string& episode_id, std::size_t t);

// Zero-noise execution of an episode's ground truth: poses[t] is the pose
// before action t, so poses has one more entry than actions. Frame t shows
// poses[t]; an episode has actions.size() frames.
struct Rollout {
  std::vector<sim::AgentPose> poses;
  std::vector<sim::Action> actions;
  RegionTrace trace;  // over the rollout positions

  std::size_t frame_count() const { return actions.size(); }
};

Rollout rollout_episode(const Episode& ep, std::shared_ptr<const sim::World> world);

// One record per merged action, placed at the step where the run begins.
// Targets read "The next action is <a>."
std::vector<QaRecord> gen_nav_qa(const Episode& ep, const Rollout& ro);

// Throws StateError when t is past the last frame or the pose lies outside
// every region.
QaRecord gen_localization_qa(const Episode& ep, const Rollout& ro, const geometry::FloorPlan& fp, std::size_t t);

enum class ReasoningStage { initialization, navigation, termination };
std::string_view to_string(ReasoningStage stage);

// Initialization while the trace so far covers one region, Termination
// once the current region is the goal region, Navigation otherwise.
ReasoningStage reasoning_stage(const Episode& ep, const Rollout& ro, std::size_t t);

// Target lists visited regions (Navigation, Termination), the current
// region (always), and the next region of the full compressed trace
// (Initialization, Navigation) or the stop condition (Termination).
QaRecord gen_trajectory_reasoning_qa(const Episode& ep, const Rollout& ro, std::size_t t);

QaRecord gen_summarization_qa(const Episode& ep, const Rollout& ro);

// Action class of a nav record ("MoveForward", ...), read from its target.
std::string nav_action_class(const QaRecord& r);

struct BalanceReport {
  std::map<std::string, std::size_t> before;
  std::map<std::string, std::size_t> after;
};

inline constexpr double kDefaultBalanceFloor = 0.5;

// Duplicates records of underrepresented classes (cycling through each
// class's records in order) until every class present holds at least
// floor * mean class count. Originals keep their order; duplicates follow.
std::vector<QaRecord> balance_actions(std::span<const QaRecord> records, BalanceReport* report = nullptr,
                                      double floor = kDefaultBalanceFloor);

}  // namespace fpnav::dataset
