#include <numbers>

#include "doctest.h"
#include "fpnav/dataset/actions.hpp"
#include "fpnav/dataset/catalog.hpp"
#include "fpnav/dataset/episode.hpp"
#include "fpnav/dataset/generate.hpp"
#include "fpnav/dataset/instruction.hpp"
#include "fpnav/dataset/procedural.hpp"
#include "fpnav/dataset/qa.hpp"
#include "fpnav/dataset/trace.hpp"
#include "fpnav/error.hpp"
#include "fpnav/eval/planner.hpp"
#include "fpnav/random.hpp"
#include "oracles.hpp"
#include "fixtures.hpp"
#include "support.hpp"

using namespace fpnav;
using namespace fpnav::dataset;
using geometry::Point2;
using sim::Action;
using sim::ActionKind;
using fpnav::testing::rect;
using fpnav::testing::row_episode;
using fpnav::testing::row_plan;

namespace {

std::vector<Action> repeat(Action a, std::size_t n) { return std::vector<Action>(n, a); }

std::vector<Action> concat(std::initializer_list<std::vector<Action>> parts) {
  std::vector<Action> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

TEST_CASE("merge and decompose are inverse on primitive sequences") {
  Rng rng(11);
  for (int k = 0; k < 300; ++k) {
    std::vector<Action> seq;
    const std::size_t n = rng.index(40);
    for (std::size_t i = 0; i < n; ++i) {
      const auto pick = rng.index(4);
      seq.push_back(pick == 0 ? Action::forward() : pick == 1 ? Action::left() : pick == 2 ? Action::right() : Action::stop());
    }
    const auto merged = merge_actions(seq);
    for (std::size_t i = 1; i < merged.size(); ++i) {
      if (merged[i].kind != ActionKind::Stop) REQUIRE(merged[i].kind != merged[i - 1].kind);
    }
    REQUIRE(decompose_actions(merged) == seq);
  }
}

TEST_CASE("merging sums magnitudes and keeps Stop separate") {
  const auto merged = merge_actions(concat({repeat(Action::forward(), 3), repeat(Action::left(), 2),
                                            {Action::stop(), Action::stop()}}));
  REQUIRE(merged.size() == 4);
  CHECK(merged[0].magnitude == doctest::Approx(0.75));
  CHECK(sim::describe(merged[0]) == "move forward 75 cm");
  CHECK(sim::describe(merged[1]) == "turn left 30 degrees");
  CHECK(sim::describe(merged[2]) == "stop");
}

TEST_CASE("off-grid composites round to the nearest multiple") {
  CHECK(decompose_action(Action::forward(0.6)).size() == 2);
  CHECK(decompose_action(Action::forward(0.05)).size() == 1);
  CHECK(decompose_action(Action::right(0.5)).size() == 2);
  CHECK(decompose_action(Action::stop()) == std::vector<Action>{Action::stop()});
}

TEST_CASE("path compiler fixtures") {
  const sim::World w(fpnav::testing::arena());
  const std::vector<Point2> north = {{0, 0}, {0, 1}};
  CHECK(compile_path_to_actions(w, {0, 0, 0}, north) == concat({repeat(Action::forward(), 4), {Action::stop()}}));
  const std::vector<Point2> west = {{0, 0}, {-0.5, 0}};
  CHECK(compile_path_to_actions(w, {0, 0, 0}, west) ==
        concat({repeat(Action::left(), 6), repeat(Action::forward(), 2), {Action::stop()}}));
  const std::vector<Point2> empty;
  CHECK(compile_path_to_actions(w, {0, 0, 0}, empty) == std::vector<Action>{Action::stop()});
}

TEST_CASE("path compiler routes around walls with a planner") {
  const auto fp = geometry::FloorPlan("u", "0", {rect(0, "hallway", 0, 0, 6, 2), rect(1, "office", 0, 2, 2, 6),
                                                 rect(2, "kitchen", 4, 2, 6, 6)});
  auto w = fpnav::testing::world_of(fp);
  const std::vector<Point2> path = {{1, 5}, {5, 5}};
  CHECK_THROWS_AS(compile_path_to_actions(*w, {1, 5, 0}, path), StateError);
  eval::GridPlanner planner(fp);
  const auto actions = compile_path_to_actions(*w, {1, 5, 0}, path, &planner);
  auto s = sim::reset(w, {1, 5, 0}, {5, 5}, {});
  for (const auto& a : actions) sim::step(s, a);
  CHECK(geometry::distance(s.true_pose.position(), {5, 5}) <= kWaypointTolerance);
}

TEST_CASE("instruction parse inverts generation over every template") {
  Rng rng(3);
  const auto& types = region_type_catalog();
  for (int t = 0; t < kTemplateCount; ++t) {
    for (int k = 0; k < 100; ++k) {
      const std::string start(types[rng.index(types.size())]);
      const std::string goal(types[rng.index(types.size())]);
      const auto& phrases = stop_phrases(goal);
      const std::string stop = rng.index(3) == 0 ? "" : phrases[rng.index(phrases.size())];
      const auto ins = make_instruction(t, start, static_cast<int>(rng.index(200)), goal,
                                        static_cast<int>(rng.index(200)), stop);
      REQUIRE(parse_instruction(ins.rendered) == ins);
    }
  }
}

TEST_CASE("instruction rendering and errors") {
  const auto ins = make_instruction(0, "living room", 3, "kitchen", 7, "in front of the sink");
  CHECK(ins.rendered == "You are in living room 3. Go to kitchen 7 and stop in front of the sink.");
  CHECK_THROWS_AS(make_instruction(10, "a", 1, "b", 2, ""), SchemaError);
  CHECK_THROWS_AS(make_instruction(0, "room2", 1, "b", 2, ""), SchemaError);
  CHECK_THROWS_AS(make_instruction(0, "a", 1, "b", 2, "by the door."), SchemaError);
  try {
    parse_instruction("You are in kitchen 3. Go to office and stop.");
    FAIL("parsed malformed text");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("template 0") != std::string::npos);
  }
}

TEST_CASE("video frame sampling fixtures") {
  CHECK(sample_video_frames(4) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(sample_video_frames(10) == std::vector<std::size_t>{0, 2, 4, 5, 7, 9});
  CHECK(sample_video_frames(6) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  CHECK_THROWS_AS(sample_video_frames(0), Error);
  CHECK(sample_video_frames(100).size() == 6);
}

TEST_CASE("region traces compress repeats and flag revisits") {
  const auto fp = row_plan();
  const std::vector<Point2> path = {{1, 1}, {2, 1}, {5, 1}, {13, 1}, {9, 1}, {5, 2}};
  const auto trace = annotate_trajectory(fp, path);
  CHECK(trace.per_waypoint.size() == 6);
  CHECK_FALSE(trace.per_waypoint[3].region);
  REQUIRE(trace.compressed.size() == 4);
  CHECK(trace.compressed[0] == TraceEntry{1, "kitchen"});
  CHECK(trace.compressed[3] == TraceEntry{2, "hallway"});
  CHECK(rejection_reason(trace) == std::optional<std::string>(kRejectOffPlan));
  const std::vector<Point2> back = {{1, 1}, {5, 1}, {9, 1}, {5, 2}};
  CHECK(rejection_reason(annotate_trajectory(fp, back)) == std::optional<std::string>(kRejectRevisit));
  const std::vector<Point2> clean = {{1, 1}, {5, 1}, {9, 1}};
  CHECK_FALSE(rejection_reason(annotate_trajectory(fp, clean)));
  CHECK(compress_prefix(annotate_trajectory(fp, clean), 2).size() == 2);
}

TEST_CASE("episode documents survive serialize and parse byte for byte") {
  const Episode ep = row_episode();
  const std::string text = serialize_episode(ep);
  CHECK(serialize_episode(parse_episode(text)) == text);
  CHECK(text.find("\"gt_actions\"") != std::string::npos);
  Episode bare = ep;
  bare.gt_actions.clear();
  CHECK(serialize_episode(parse_episode(serialize_episode(bare))).find("gt_actions") == std::string::npos);
  std::string tampered = text;
  tampered.replace(tampered.find("You are in"), 10, "You were in");
  CHECK_THROWS_AS(parse_episode(tampered), SchemaError);
  CHECK_THROWS_AS(parse_episode("{"), ParseError);
}

TEST_CASE("episode validation checks the invariants") {
  auto w = fpnav::testing::world_of(row_plan());
  CHECK_NOTHROW(validate_episode(row_episode(), w));
  Episode wrong_goal = row_episode();
  wrong_goal.goal = {6, 2};
  CHECK_THROWS_AS(validate_episode(wrong_goal, w), SchemaError);
  Episode short_actions = row_episode();
  short_actions.gt_actions = concat({repeat(Action::forward(), 10), {Action::stop()}});
  CHECK_THROWS_AS(validate_episode(short_actions, w), SchemaError);
  Episode shifted = row_episode();
  shifted.gt_path.front() = {2, 2};
  CHECK_THROWS_AS(validate_episode(shifted, w), SchemaError);
}

TEST_CASE("trajectory reasoning stages follow the hand-checked fixture") {
  auto w = fpnav::testing::world_of(row_plan());
  const Episode ep = row_episode();
  const auto ro = rollout_episode(ep, w);
  REQUIRE(ro.frame_count() == 41);
  const auto fixture = fpnav::testing::row_stage_fixture();
  REQUIRE(fixture.size() == 20);
  for (const auto& [t, stage] : fixture) {
    CAPTURE(t);
    CHECK(reasoning_stage(ep, ro, t) == stage);
  }
  CHECK(gen_trajectory_reasoning_qa(ep, ro, 3).target == "Current region: kitchen 1. Next region: hallway 2.");
  CHECK(gen_trajectory_reasoning_qa(ep, ro, 20).target ==
        "Visited regions: kitchen 1, hallway 2. Current region: hallway 2. Next region: bedroom 3.");
  CHECK(gen_trajectory_reasoning_qa(ep, ro, 35).target ==
        "Visited regions: kitchen 1, hallway 2, bedroom 3. Current region: bedroom 3. Stop next to the bed.");
  const auto plain = row_episode("");
  CHECK(gen_trajectory_reasoning_qa(plain, rollout_episode(plain, w), 35).target.ends_with("Stop here."));
  CHECK_THROWS_AS(reasoning_stage(ep, ro, 41), StateError);
}

TEST_CASE("localization targets match brute-force containment") {
  const auto set = fpnav::testing::generated_set(3, 4);
  Rng rng(5);
  std::size_t checked = 0;
  for (std::size_t e = 0; e < set.episodes.size(); ++e) {
    const auto& ep = set.episodes[e];
    const auto& w = set.worlds[set.world_of_episode[e]];
    const auto ro = rollout_episode(ep, w);
    for (int k = 0; k < 10; ++k) {
      const std::size_t t = rng.index(ro.frame_count());
      const Point2 p = ro.poses[t].position();
      std::string expected;
      for (const auto& r : w->plan().regions()) {
        const auto& ring = r.polygon.vertices();
        if (oracle::boundary_distance(p, ring) < 1e-9 || oracle::winding_number(p, ring) != 0) {
          expected = r.type;
          break;
        }
      }
      REQUIRE(gen_localization_qa(ep, ro, w->plan(), t).target == "Region type: " + expected + ".");
      ++checked;
    }
  }
  CHECK(checked == 120);
}

TEST_CASE("nav QA records one target per merged action") {
  auto w = fpnav::testing::world_of(row_plan());
  Episode ep = row_episode();
  ep.gt_actions = concat({repeat(Action::left(), 2), repeat(Action::right(), 2), repeat(Action::forward(), 40),
                          {Action::stop()}});
  const auto ro = rollout_episode(ep, w);
  const auto recs = gen_nav_qa(ep, ro);
  REQUIRE(recs.size() == 4);
  CHECK(recs[0].target == "The next action is turn left 30 degrees.");
  CHECK(recs[1].step == 2);
  CHECK(recs[2].target == "The next action is move forward 1000 cm.");
  CHECK(recs[3].step == 44);
  CHECK(recs[3].frames.back() == frame_ref(ep.episode_id, 44));
  CHECK(nav_action_class(recs[2]) == "MoveForward");
  const auto line = qa_record_json(recs[1]);
  CHECK(qa_record_json(parse_qa_record(line)) == line);
}

TEST_CASE("balancing upsamples rare classes only") {
  std::vector<QaRecord> recs;
  auto add = [&](const std::string& a, int n) {
    for (int i = 0; i < n; ++i) recs.push_back({QaTask::nav, "e", 0, "", {}, "The next action is " + a + ".", {}});
  };
  add("move forward 25 cm", 10);
  add("turn left 15 degrees", 6);
  add("stop", 1);
  BalanceReport rep;
  const auto out = balance_actions(recs, &rep);
  CHECK(rep.before.at("Stop") == 1);
  CHECK(rep.after.at("Stop") >= 3);
  CHECK(rep.after.at("MoveForward") == 10);
  CHECK(rep.after.at("TurnLeft") == 6);
  CHECK(std::equal(recs.begin(), recs.end(), out.begin(),
                   [](const QaRecord& a, const QaRecord& b) { return a.target == b.target; }));
  CHECK_THROWS_AS(balance_actions(recs, nullptr, 1.0), Error);
}

TEST_CASE("procedural plans connect every room through the corridor") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ProceduralSpec spec;
    spec.room_count = 6;
    spec.seed = seed;
    const auto fp = gen_synthetic_floorplan(spec);
    REQUIRE(fp.regions().size() == 7);
    CHECK(fp.at(0).type == kCorridorType);
    const auto adj = geometry::region_adjacency(fp);
    CHECK(adj.size() == 6);
    for (const auto& [a, b] : adj) CHECK(a == 0);
  }
  ProceduralSpec bad;
  bad.room_count = 50;
  bad.max_extent = 20;
  CHECK_THROWS_AS(gen_synthetic_floorplan(bad), SchemaError);
}

TEST_CASE("generated episodes validate and traverse three regions") {
  const auto set = fpnav::testing::generated_set(2, 5);
  REQUIRE(set.episodes.size() == 10);
  for (std::size_t e = 0; e < set.episodes.size(); ++e) {
    const auto& ep = set.episodes[e];
    const auto& w = set.worlds[set.world_of_episode[e]];
    CHECK_NOTHROW(validate_episode(ep, w));
    CHECK(annotate_trajectory(w->plan(), ep.gt_path).compressed.size() >= 3);
    CHECK(parse_instruction(ep.instruction.rendered) == ep.instruction);
    for (std::size_t i = 1; i < ep.gt_path.size(); ++i) {
      CHECK(geometry::distance(ep.gt_path[i - 1], ep.gt_path[i]) <= 0.5 + 1e-9);
    }
  }
  const auto again = fpnav::testing::generated_set(2, 5);
  for (std::size_t e = 0; e < set.episodes.size(); ++e) {
    CHECK(serialize_episode(again.episodes[e]) == serialize_episode(set.episodes[e]));
  }
}

TEST_CASE("filtering drops revisiting and off-plan episodes") {
  Episode ok = row_episode();
  Episode revisit = row_episode();
  revisit.episode_id = "row-0001";
  revisit.gt_path = {{1, 2}, {5, 2}, {9, 2}, {5, 2}};
  FilterReport rep;
  const auto kept = filter_episodes({ok, revisit}, row_plan(), &rep);
  CHECK(kept.size() == 1);
  CHECK(rep.rejected.at(kRejectRevisit) == 1);
}
