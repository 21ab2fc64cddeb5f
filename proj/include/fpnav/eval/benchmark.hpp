#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpnav/dataset/episode.hpp"
#include "fpnav/eval/metrics.hpp"
#include "fpnav/eval/policy.hpp"

namespace fpnav::eval {

enum class PlanMode { full, mask, random_plan };

struct AblationSpec {
  PlanMode plan_mode = PlanMode::full;
  double mask_fraction = 0.0;  // used when plan_mode is mask, in [0, 1]
  sim::NoiseConfig noise;

  // "full", "mask:0.25", "random"; throws ParseError.
  static AblationSpec parse_plan_mode(std::string_view text);
  std::string plan_mode_label() const;
};

// Plan-space rectangle greyed out for a mask fraction: a full-height strip
// covering `fraction` of the plan width at a seeded offset.
geometry::Box mask_rectangle(const geometry::FloorPlan& fp, double fraction, std::uint64_t seed);

// The policy's floor plan for one ablation: jittered when sigma_jitter > 0,
// with the masked strip as unknown free space, or `substitute` for
// random_plan. Jitter loosens doorway matching and region membership by
// four standard deviations so displaced shared edges still connect.
std::shared_ptr<const PolicyMap> make_policy_map(const geometry::FloorPlan& true_plan, const AblationSpec& ablation,
                                                 std::uint64_t seed,
                                                 const geometry::FloorPlan* substitute = nullptr);

// Steps the simulator on the true world until the policy stops or the
// max_steps-th action, which is forced to Stop. The result is scored with
// `mode`; `true_planner` (clearance 0.05 over the true plan) provides L and
// geodesic distances and is built on the fly when null.
EpisodeResult run_episode(const dataset::Episode& episode, std::shared_ptr<const sim::World> world,
                          std::shared_ptr<const PolicyMap> map, const PolicySpec& policy,
                          const sim::NoiseConfig& noise, DistanceMode mode = DistanceMode::euclidean,
                          const GridPlanner* true_planner = nullptr, sim::EpisodeState* final_state = nullptr);

struct BenchmarkEpisode {
  dataset::Episode episode;
  std::shared_ptr<const sim::World> world;
};

struct BenchmarkCell {
  std::string setting;
  AblationSpec ablation;
};

struct BenchmarkConfig {
  PolicySpec policy;
  std::vector<BenchmarkCell> cells;
  std::vector<std::uint64_t> seeds{0};
  DistanceMode mode = DistanceMode::euclidean;
  std::size_t threads = 0;  // 0 picks the hardware concurrency
};

struct LoggedResult;

// Invoked from worker threads once per finished episode, with the final
// simulator state; must be safe to call concurrently.
using EpisodeCallback = std::function<void(const LoggedResult&, const sim::EpisodeState&)>;

struct CellResult {
  std::string setting;
  MetricsSummary summary;
};

struct LoggedResult {
  std::size_t cell = 0;
  std::string setting;
  EpisodeResult result;
};

struct BenchmarkResult {
  std::vector<CellResult> rows;
  std::vector<LoggedResult> episodes;  // sorted by cell, seed, episode id
};

// Seed actually fed to the simulator for one (episode, benchmark seed).
std::uint64_t episode_noise_seed(const std::string& episode_id, std::uint64_t seed);

// Runs every cell x seed x episode. Results do not depend on thread count
// or scheduling. Throws Error on an empty episode list.
BenchmarkResult run_benchmark(std::span<const BenchmarkEpisode> episodes, const BenchmarkConfig& config,
                              const EpisodeCallback& on_episode = {});

// One JSON object per line, in the result's order.
std::string episode_log_jsonl(std::span<const LoggedResult> episodes);
std::vector<LoggedResult> parse_episode_log(std::string_view text);

// Groups a log by cell (in cell order) and summarizes each.
std::vector<CellResult> summarize_log(std::span<const LoggedResult> episodes);

enum class TableFormat { markdown, csv };
TableFormat table_format_from_string(std::string_view name);

// Columns: #, Setting, NE, OSR, SR, SPL. NE in meters with two decimals,
// rates as percentages with one decimal.
std::string format_table(std::span<const CellResult> rows, TableFormat format);

// Named ablation grids: "actuation", "scale", "jitter", "plan".
std::vector<BenchmarkCell> grid_preset(std::string_view name);

}  // namespace fpnav::eval
