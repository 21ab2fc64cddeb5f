// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>

#include "fixtures.hpp"
#include "fpnav/dataset/actions.hpp"
#include "fpnav/dataset/catalog.hpp"
#include "fpnav/dataset/episode.hpp"
#include "fpnav/dataset/export.hpp"
#include "fpnav/dataset/instruction.hpp"
#include "fpnav/dataset/procedural.hpp"
#include "fpnav/dataset/qa.hpp"
#include "fpnav/eval/benchmark.hpp"
#include "fpnav/geometry/floorplan_io.hpp"
#include "fpnav/random.hpp"
#include "fpnav/render/image.hpp"
#include "fpnav/sim/simulator.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fpnav;
using geometry::Point2;
using sim::Action;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 10 procedural plans with 6 rooms, 10 episodes each.
std::vector<eval::BenchmarkEpisode> benchmark_episodes() {
  std::vector<eval::BenchmarkEpisode> eps;
  for (std::uint64_t s = 0; s < 10; ++s) {
    dataset::ProceduralSpec spec;
    spec.room_count = 6;
    spec.seed = s;
    auto world = std::make_shared<const sim::World>(dataset::gen_synthetic_floorplan(spec));
    dataset::EpisodeGenOptions o;
    o.count = 10;
    o.seed = s;
    o.floorplan_ref = world->plan().scene_id() + ".json";
    for (auto& e : dataset::gen_episodes(world->plan(), o)) eps.push_back({std::move(e), world});
  }
  return eps;
}

const std::vector<eval::BenchmarkEpisode>& episodes() {
  static const auto eps = benchmark_episodes();
  return eps;
}

// Every summary row of every benchmark run, for the metric identities.
std::vector<eval::CellResult>& all_rows() {
  static std::vector<eval::CellResult> rows;
  return rows;
}

eval::BenchmarkResult run(const eval::BenchmarkConfig& cfg) {
  auto r = eval::run_benchmark(episodes(), cfg);
  all_rows().insert(all_rows().end(), r.rows.begin(), r.rows.end());
  return r;
}

Outcome geometry_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  std::size_t compared = 0, disagreements = 0;
  for (int k = 0; k < 50; ++k) {
    const auto ring = oracle::random_star_polygon(rng, 3 + rng.index(30));
    const auto poly = geometry::Polygon::from_vertices(ring);
    int n = 0;
    while (n < 1000) {
      const Point2 p{rng.uniform(-12, 12), rng.uniform(-12, 12)};
      if (oracle::boundary_distance(p, ring) < 1e-8) continue;
      ++n;
      ++compared;
      const bool inside = geometry::point_in_polygon(p, poly) == geometry::Containment::inside;
      if (inside != (oracle::winding_number(p, ring) != 0)) ++disagreements;
    }
  }
  const double dt = seconds_since(t0);
  return {disagreements == 0 && dt < 10.0,
          fmt("%.0f points, %.0f disagreements, %.2f s", static_cast<double>(compared),
              static_cast<double>(disagreements), dt)};
}

Outcome kinematics_closed_form() {
  auto w = fpnav::testing::world_of(fpnav::testing::arena());
  Rng rng(77);
  double worst_pos = 0.0, worst_rot = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const sim::AgentPose start{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0, 2 * std::numbers::pi)};
    auto s = sim::reset(w, start, {0, 0}, {});
    double x = start.x, y = start.y, th = sim::normalize_angle(start.theta);
    const std::size_t len = 1 + rng.index(50);
    for (std::size_t i = 0; i < len; ++i) {
      const auto pick = rng.index(3);
      sim::step(s, pick == 0 ? Action::forward() : pick == 1 ? Action::left() : Action::right());
      if (pick == 0) {
        x += sim::kStepSize * std::sin(th);
        y += sim::kStepSize * std::cos(th);
      } else {
        th = sim::normalize_angle(th + (pick == 1 ? -sim::kTurnAngle : sim::kTurnAngle));
      }
    }
    worst_pos = std::max(worst_pos, std::hypot(s.true_pose.x - x, s.true_pose.y - y));
    worst_rot = std::max(worst_rot, std::abs(sim::angle_difference(s.true_pose.theta, th)));
  }
  return {worst_pos <= 1e-9 && worst_rot <= 1e-12,
          fmt("max position error %.2e m, max heading error %.2e rad", worst_pos, worst_rot)};
}

double sample_std(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

Outcome noise_statistics() {
  auto w = fpnav::testing::world_of(fpnav::testing::arena());
  sim::NoiseConfig n;
  n.sigma_move = 0.1;
  n.sigma_rot = 0.05;
  std::vector<double> move, drift, rot;
  const std::size_t kSteps = 100000;
  sim::EpisodeState s;
  for (std::size_t i = 0; i < kSteps; ++i) {
    // Fresh episodes every 12.5 m keep the agent clear of the arena walls.
    if (i % 50 == 0) {
      n.seed = i;
      s = sim::reset(w, {0, 0, 0}, {1, 1}, n);
    }
    const sim::AgentPose before = s.true_pose;
    sim::step(s, Action::forward());
    move.push_back(geometry::distance(before.position(), s.true_pose.position()));
    drift.push_back(sim::angle_difference(s.true_pose.theta, before.theta));
  }
  for (std::size_t i = 0; i < kSteps; ++i) {
    if (i % 100 == 0) {
      n.seed = 1000000 + i;
      s = sim::reset(w, {0, 0, 0}, {1, 1}, n);
    }
    const double before = s.true_pose.theta;
    sim::step(s, Action::right());
    rot.push_back(sim::angle_difference(s.true_pose.theta, before) - sim::kTurnAngle);
  }
  const double sm = sample_std(move), sd = sample_std(drift), sr = sample_std(rot);
  const bool ok = std::abs(sm / 0.025 - 1) <= 0.03 && std::abs(sd / 0.01 - 1) <= 0.03 && std::abs(sr / 0.05 - 1) <= 0.03;
  return {ok, fmt("forward std %.5f m (0.025), drift std %.5f rad (0.01), turn std %.5f rad (0.05)", sm, sd, sr)};
}

Outcome oracle_sanity() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& eps = episodes();
  std::size_t min_regions = 1000;
  for (const auto& e : eps) {
    min_regions = std::min(min_regions, dataset::annotate_trajectory(e.world->plan(), e.episode.gt_path).compressed.size());
  }
  eval::BenchmarkConfig cfg;
  cfg.cells = {{"full floorplan", {}}};
  const auto r = run(cfg);
  const auto& s = r.rows[0].summary;
  const double dt = seconds_since(t0);
  return {eps.size() == 100 && min_regions >= 3 && s.sr >= 0.95 && s.spl >= 0.85 && dt < 120.0,
          fmt("%.0f episodes (min %.0f regions), SR %.3f, SPL %.3f", static_cast<double>(eps.size()),
              static_cast<double>(min_regions), s.sr, s.spl) +
              fmt(", %.1f s", dt)};
}

Outcome noise_trend() {
  eval::BenchmarkConfig cfg;
  cfg.policy.kind = eval::PolicyKind::dead_reckoning;
  cfg.cells = eval::grid_preset("actuation");
  cfg.seeds = {0, 1, 2, 3, 4};
  const auto r = run(cfg);
  const double sr0 = 100 * r.rows[0].summary.sr, sr1 = 100 * r.rows[1].summary.sr;
  const double sr2 = 100 * r.rows[2].summary.sr, sr3 = 100 * r.rows[3].summary.sr;
  return {sr3 <= sr0 - 5.0 && sr3 <= sr2, fmt("SR %.1f / %.1f / %.1f / %.1f", sr0, sr1, sr2, sr3)};
}

Outcome plan_dependence() {
  eval::BenchmarkConfig cfg;
  cfg.policy.kind = eval::PolicyKind::dead_reckoning;
  cfg.cells = {{"full floorplan", eval::AblationSpec::parse_plan_mode("full")},
               {"random floorplan", eval::AblationSpec::parse_plan_mode("random")}};
  const auto r = run(cfg);
  const double full = 100 * r.rows[0].summary.sr, random = 100 * r.rows[1].summary.sr;
  return {random <= full - 10.0, fmt("SR full %.1f, random %.1f", full, random)};
}

Outcome metrics_identities() {
  std::size_t violations = 0;
  for (const auto& row : all_rows()) {
    if (row.summary.spl > row.summary.sr + 1e-12 || row.summary.sr > row.summary.osr + 1e-12) ++violations;
  }
  auto fixture = [](bool s, double p, double l) {
    eval::EpisodeResult r;
    r.terminated = true;
    r.success = s;
    r.path_length = p;
    r.shortest_path_length = l;
    return std::vector<eval::EpisodeResult>{r};
  };
  const double a = eval::spl(fixture(true, 5, 5)), b = eval::spl(fixture(false, 5, 5)), c = eval::spl(fixture(true, 10, 5));
  eval::EpisodeResult ne;
  ne.terminated = true;
  ne.final_pose = {3, 4, 0};
  ne.goal = {0, 0};
  const double d = eval::navigation_error(ne, eval::DistanceMode::euclidean);
  return {!all_rows().empty() && violations == 0 && a == 1.0 && b == 0.0 && c == 0.5 && d == 5.0,
          fmt("%.0f rows checked, %.0f violations", static_cast<double>(all_rows().size()),
              static_cast<double>(violations)) +
              fmt("; SPL fixtures %.2f / %.2f / %.2f; NE %.3f", a, b, c, d)};
}

Outcome pipeline_round_trips() {
  Rng rng(8);
  std::size_t bad_merge = 0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<Action> seq;
    const std::size_t n = rng.index(60);
    for (std::size_t i = 0; i < n; ++i) {
      const auto pick = rng.index(4);
      seq.push_back(pick == 0 ? Action::forward() : pick == 1 ? Action::left() : pick == 2 ? Action::right() : Action::stop());
    }
    if (dataset::decompose_actions(dataset::merge_actions(seq)) != seq) ++bad_merge;
  }
  std::size_t bad_instr = 0;
  const auto& types = dataset::region_type_catalog();
  for (int t = 0; t < dataset::kTemplateCount; ++t) {
    for (int k = 0; k < 100; ++k) {
      const std::string goal(types[rng.index(types.size())]);
      const auto& phrases = dataset::stop_phrases(goal);
      const auto ins = dataset::make_instruction(t, std::string(types[rng.index(types.size())]),
                                                 static_cast<int>(rng.index(500)), goal,
                                                 static_cast<int>(rng.index(500)),
                                                 k % 2 ? phrases[rng.index(phrases.size())] : "");
      if (!(dataset::parse_instruction(ins.rendered) == ins)) ++bad_instr;
    }
  }
  const bool frames_ok = dataset::sample_video_frames(4) == std::vector<std::size_t>{0, 1, 2, 3} &&
                         dataset::sample_video_frames(10) == std::vector<std::size_t>{0, 2, 4, 5, 7, 9};
  std::size_t bad_docs = 0;
  std::map<const sim::World*, bool> seen;
  for (const auto& e : episodes()) {
    const std::string text = dataset::serialize_episode(e.episode);
    if (dataset::serialize_episode(dataset::parse_episode(text)) != text) ++bad_docs;
    if (!seen[e.world.get()]) {
      seen[e.world.get()] = true;
      const std::string plan = geometry::serialize_floorplan(e.world->plan());
      if (geometry::serialize_floorplan(geometry::parse_floorplan(plan)) != plan) ++bad_docs;
    }
  }
  return {bad_merge == 0 && bad_instr == 0 && frames_ok && bad_docs == 0,
          fmt("merge/decompose mismatches %.0f/1000, instruction mismatches %.0f/1000, ", static_cast<double>(bad_merge),
              static_cast<double>(bad_instr)) +
              std::string(frames_ok ? "frame fixtures exact" : "frame fixtures differ") +
              fmt(", document mismatches %.0f", static_cast<double>(bad_docs))};
}

Outcome qa_oracle() {
  Rng rng(19);
  std::size_t checked = 0, wrong = 0;
  const auto& eps = episodes();
  while (checked < 500) {
    const auto& e = eps[rng.index(eps.size())];
    const auto ro = dataset::rollout_episode(e.episode, e.world);
    const std::size_t t = rng.index(ro.frame_count());
    const Point2 p = ro.poses[t].position();
    std::string expected = "(none)";
    for (const auto& r : e.world->plan().regions()) {
      const auto& ring = r.polygon.vertices();
      if (oracle::boundary_distance(p, ring) < 1e-9 || oracle::winding_number(p, ring) != 0) {
        expected = r.type;
        break;
      }
    }
    if (dataset::gen_localization_qa(e.episode, ro, e.world->plan(), t).target != "Region type: " + expected + ".") {
      ++wrong;
    }
    ++checked;
  }
  auto w = fpnav::testing::world_of(fpnav::testing::row_plan());
  const auto ep = fpnav::testing::row_episode();
  const auto ro = dataset::rollout_episode(ep, w);
  std::size_t stage_wrong = 0;
  const auto fixture = fpnav::testing::row_stage_fixture();
  for (const auto& [t, stage] : fixture) {
    if (dataset::reasoning_stage(ep, ro, t) != stage) ++stage_wrong;
  }
  return {wrong == 0 && stage_wrong == 0 && fixture.size() == 20,
          fmt("localization mismatches %.0f/%.0f, stage mismatches %.0f/%.0f", static_cast<double>(wrong),
              static_cast<double>(checked), static_cast<double>(stage_wrong), static_cast<double>(fixture.size()))};
}

Outcome determinism() {
  // A noisy benchmark with frame rendering, run twice with different
  // thread counts.
  std::vector<eval::BenchmarkEpisode> subset(episodes().begin(), episodes().begin() + 12);
  auto once = [&](std::size_t threads) {
    eval::BenchmarkConfig cfg;
    cfg.policy.kind = eval::PolicyKind::dead_reckoning;
    auto grid = eval::grid_preset("actuation");
    cfg.cells = {grid[2]};
    auto jitter = eval::grid_preset("jitter");
    cfg.cells.push_back(jitter.back());
    cfg.seeds = {3, 4};
    cfg.threads = threads;
    std::map<std::string, std::vector<std::uint8_t>> frames;
    std::mutex m;
    auto on_episode = [&](const eval::LoggedResult& r, const sim::EpisodeState& s) {
      dataset::FrameRenderer renderer(s.world);
      std::map<std::string, std::vector<std::uint8_t>> local;
      for (std::size_t t = 0; t + 1 < s.believed_trajectory.size(); t += 7) {
        const std::span<const sim::AgentPose> hist(s.believed_trajectory.data(), t);
        const auto png = render::encode_png(renderer.dual_view(hist, s.believed_trajectory[t], t, s.scale_alpha).image);
        local[std::to_string(r.cell) + "/" + std::to_string(r.result.seed) + "/" + r.result.episode_id + "/" +
              std::to_string(t)] = png;
      }
      std::lock_guard lock(m);
      frames.merge(local);
    };
    const auto res = eval::run_benchmark(subset, cfg, on_episode);
    all_rows().insert(all_rows().end(), res.rows.begin(), res.rows.end());
    return std::make_tuple(eval::format_table(res.rows, eval::TableFormat::markdown),
                           eval::format_table(res.rows, eval::TableFormat::csv), eval::episode_log_jsonl(res.episodes),
                           frames);
  };
  const auto a = once(1);
  const auto b = once(0);
  const bool ok = std::get<0>(a) == std::get<0>(b) && std::get<1>(a) == std::get<1>(b) &&
                  std::get<2>(a) == std::get<2>(b) && std::get<3>(a) == std::get<3>(b) && !std::get<3>(a).empty();
  return {ok, fmt("tables, logs and %.0f frame PNGs compared", static_cast<double>(std::get<3>(a).size()))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"geometry oracle equivalence", geometry_oracle},
      {"kinematics closed form", kinematics_closed_form},
      {"noise statistics", noise_statistics},
      {"oracle planner sanity", oracle_sanity},
      {"noise-robustness trend", noise_trend},
      {"floor-plan dependence", plan_dependence},
      {"determinism", determinism},
      // Runs after the benchmarks so it sees every summary row.
      {"metrics identities", metrics_identities},
      {"pipeline round-trips", pipeline_round_trips},
      {"QA generation oracle", qa_oracle},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
