#include "fpnav/eval/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "fpnav/error.hpp"
#include "fpnav/io.hpp"
#include "fpnav/random.hpp"
#include "json.hpp"

namespace fpnav::eval {

using geometry::Point2;
using json = nlohmann::ordered_json;

namespace {

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

AblationSpec AblationSpec::parse_plan_mode(std::string_view text) {
  AblationSpec a;
  if (text == "full") return a;
  if (text == "random" || text == "random_plan") {
    a.plan_mode = PlanMode::random_plan;
    return a;
  }
  if (text.substr(0, 5) == "mask:") {
    const std::string value(text.substr(5));
    std::size_t used = 0;
    double f = 0.0;
    try {
      f = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty() || !(f >= 0.0 && f <= 1.0)) {
      throw ParseError("mask fraction must be a number in [0, 1], got \"" + value + "\"");
    }
    a.plan_mode = PlanMode::mask;
    a.mask_fraction = f;
    return a;
  }
  throw ParseError("unknown plan mode \"" + std::string(text) + "\"; expected full, mask:<f> or random");
}

std::string AblationSpec::plan_mode_label() const {
  switch (plan_mode) {
    case PlanMode::full: return "full";
    case PlanMode::mask: return "mask:" + fixed(mask_fraction, 2);
    case PlanMode::random_plan: return "random";
  }
  return "full";
}

geometry::Box mask_rectangle(const geometry::FloorPlan& fp, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error("mask fraction must lie in [0, 1]");
  const geometry::Box b = fp.bounds();
  const double w = fraction * b.width();
  const double x0 = b.min_x + keyed_uniform(seed, 0, 0x3a5c) * (b.width() - w);
  return {x0, b.min_y, x0 + w, b.max_y};
}

std::shared_ptr<const PolicyMap> make_policy_map(const geometry::FloorPlan& true_plan, const AblationSpec& ablation,
                                                 std::uint64_t seed, const geometry::FloorPlan* substitute) {
  PlannerOptions base;
  if (ablation.plan_mode == PlanMode::random_plan) {
    if (!substitute) throw Error("random_plan needs a substitute floor plan");
    return std::make_shared<const PolicyMap>(*substitute, base);
  }
  geometry::FloorPlan plan = true_plan;
  const double jitter = ablation.noise.sigma_jitter;
  if (jitter > 0.0) {
    plan = sim::jitter_floorplan(true_plan, jitter, hash_key(seed, 0, 0x7177));
    base.walls.lateral_tolerance = geometry::kCoincidenceTolerance + 4.0 * jitter;
    base.boundary_slack = 4.0 * jitter;
  }
  if (ablation.plan_mode == PlanMode::mask && ablation.mask_fraction > 0.0) {
    base.unknown_area = mask_rectangle(plan, ablation.mask_fraction, seed);
  }
  return std::make_shared<const PolicyMap>(std::move(plan), base);
}

EpisodeResult run_episode(const dataset::Episode& episode, std::shared_ptr<const sim::World> world,
                          std::shared_ptr<const PolicyMap> map, const PolicySpec& policy,
                          const sim::NoiseConfig& noise, DistanceMode mode, const GridPlanner* true_planner,
                          sim::EpisodeState* final_state) {
  if (policy.max_steps == 0) throw Error("max_steps must be positive");
  std::optional<GridPlanner> own_planner;
  if (!true_planner) true_planner = &own_planner.emplace(world->plan());

  sim::EpisodeState state = sim::reset(world, episode.start_pose, episode.goal, noise);
  std::unique_ptr<Policy> agent;
  switch (policy.kind) {
    case PolicyKind::oracle_closed_loop:
    case PolicyKind::dead_reckoning:
      agent = make_planning_policy(std::move(map), episode.goal, policy.kind == PolicyKind::oracle_closed_loop,
                                   policy.replan_period);
      break;
    case PolicyKind::random:
      agent = make_random_policy(hash_key(policy.seed, noise.seed, 0x7a), policy.stop_probability);
      break;
    case PolicyKind::external:
      agent = make_external_policy(policy.command, episode.episode_id, episode.instruction.rendered, episode.goal);
      break;
  }

  while (!state.terminated) {
    sim::Action a = sim::Action::stop();
    if (state.step_count + 1 < policy.max_steps) a = agent->act(state);
    if (!a.is_primitive()) {
      throw Error("policy emitted a malformed action (" + sim::describe(a) + ") in episode " + episode.episode_id);
    }
    sim::step(state, a);
  }

  EpisodeResult r;
  r.episode_id = episode.episode_id;
  r.seed = noise.seed;
  r.terminated = true;
  r.goal = episode.goal;
  r.final_pose = state.true_pose;
  r.steps = state.step_count;
  for (const auto& p : state.trajectory) r.positions.push_back(p.position());
  for (std::size_t i = 1; i < r.positions.size(); ++i) r.path_length += geometry::distance(r.positions[i - 1], r.positions[i]);
  r.shortest_path_length = true_planner->shortest_path_length(episode.start_pose.position(), episode.goal);
  r.diagnostic = agent->diagnostic();
  score_result(r, mode, true_planner);
  if (final_state) *final_state = std::move(state);
  return r;
}

std::uint64_t episode_noise_seed(const std::string& episode_id, std::uint64_t seed) {
  return hash_key(seed, fnv1a64(episode_id), 0x6e01);
}

BenchmarkResult run_benchmark(std::span<const BenchmarkEpisode> episodes, const BenchmarkConfig& config,
                              const EpisodeCallback& on_episode) {
  if (episodes.empty()) throw Error("benchmark needs at least one episode");
  if (config.cells.empty()) throw Error("benchmark needs at least one ablation cell");
  if (config.seeds.empty()) throw Error("benchmark needs at least one seed");

  // Distinct plans, by scene id, in sorted order.
  std::map<std::string, const sim::World*> scenes;
  for (const auto& e : episodes) scenes.emplace(e.world->plan().scene_id(), e.world.get());
  std::vector<std::string> scene_ids;
  for (const auto& [id, w] : scenes) scene_ids.push_back(id);

  std::vector<const sim::World*> scene_worlds;
  for (const auto& id : scene_ids) scene_worlds.push_back(scenes.at(id));
  std::vector<std::unique_ptr<GridPlanner>> true_planners(scene_ids.size());
  parallel_for(scene_ids.size(), config.threads,
               [&](std::size_t i) { true_planners[i] = std::make_unique<GridPlanner>(scene_worlds[i]->plan()); });
  auto scene_index = [&](const BenchmarkEpisode& e) {
    return static_cast<std::size_t>(
        std::lower_bound(scene_ids.begin(), scene_ids.end(), e.world->plan().scene_id()) - scene_ids.begin());
  };

  // Policy maps, deduplicated by everything that shapes them.
  struct MapKey {
    std::size_t scene;
    std::string mode;
    double jitter;
    std::uint64_t seed;
    auto operator<=>(const MapKey&) const = default;
  };
  auto key_of = [&](std::size_t scene, const AblationSpec& a, std::uint64_t seed) {
    const bool seeded = a.noise.sigma_jitter > 0.0 || a.plan_mode != PlanMode::full;
    return MapKey{scene, a.plan_mode_label(), a.noise.sigma_jitter, seeded ? seed : 0};
  };
  std::map<MapKey, std::shared_ptr<const PolicyMap>> maps;
  std::vector<std::pair<MapKey, const AblationSpec*>> to_build;
  for (const auto& cell : config.cells) {
    for (std::uint64_t seed : config.seeds) {
      for (std::size_t s = 0; s < scene_ids.size(); ++s) {
        const MapKey k = key_of(s, cell.ablation, seed);
        if (maps.emplace(k, nullptr).second) to_build.push_back({k, &cell.ablation});
      }
    }
  }
  parallel_for(to_build.size(), config.threads, [&](std::size_t i) {
    const auto& [k, ablation] = to_build[i];
    const geometry::FloorPlan* substitute = nullptr;
    if (ablation->plan_mode == PlanMode::random_plan) {
      const std::size_t n = scene_ids.size();
      if (n < 2) throw Error("random_plan needs episodes from at least two floor plans");
      substitute = &scene_worlds[(k.scene + 1 + k.seed % (n - 1)) % n]->plan();
    }
    maps.at(k) = make_policy_map(scene_worlds[k.scene]->plan(), *ablation, hash_key(k.seed, k.scene, 0x3a9),
                                 substitute);
  });

  // Tasks in output order: cell, seed, episode id.
  std::vector<std::size_t> order(episodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return episodes[a].episode.episode_id < episodes[b].episode.episode_id;
  });
  struct Task {
    std::size_t cell;
    std::uint64_t seed;
    std::size_t episode;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < config.cells.size(); ++c) {
    for (std::uint64_t seed : config.seeds) {
      for (std::size_t e : order) tasks.push_back({c, seed, e});
    }
  }

  BenchmarkResult out;
  out.episodes.resize(tasks.size());
  parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    const BenchmarkEpisode& be = episodes[t.episode];
    const BenchmarkCell& cell = config.cells[t.cell];
    const std::size_t s = scene_index(be);
    sim::NoiseConfig noise = cell.ablation.noise;
    noise.seed = episode_noise_seed(be.episode.episode_id, t.seed);
    PolicySpec policy = config.policy;
    policy.seed = hash_key(config.policy.seed, t.seed, 0x90);
    sim::EpisodeState final_state;
    out.episodes[i] = {t.cell, cell.setting,
                       run_episode(be.episode, be.world, maps.at(key_of(s, cell.ablation, t.seed)), policy, noise,
                                   config.mode, true_planners[s].get(), on_episode ? &final_state : nullptr)};
    out.episodes[i].result.seed = t.seed;
    if (on_episode) on_episode(out.episodes[i], final_state);
  });
  out.rows = summarize_log(out.episodes);
  return out;
}

std::string episode_log_jsonl(std::span<const LoggedResult> episodes) {
  std::string out;
  for (const auto& e : episodes) {
    const EpisodeResult& r = e.result;
    json j;
    j["cell"] = e.cell;
    j["setting"] = e.setting;
    j["seed"] = r.seed;
    j["episode_id"] = r.episode_id;
    j["success"] = r.success;
    j["oracle_success"] = r.oracle_success;
    j["ne"] = r.ne;
    j["path_length"] = r.path_length;
    j["shortest_path_length"] = r.shortest_path_length;
    j["steps"] = r.steps;
    j["final_pose"] = {r.final_pose.x, r.final_pose.y, r.final_pose.theta};
    j["goal"] = {r.goal.x, r.goal.y};
    j["diagnostic"] = r.diagnostic;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<LoggedResult> parse_episode_log(std::string_view text) {
  std::vector<LoggedResult> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      LoggedResult e;
      e.cell = j.at("cell").get<std::size_t>();
      e.setting = j.at("setting").get<std::string>();
      EpisodeResult& r = e.result;
      r.terminated = true;
      r.seed = j.at("seed").get<std::uint64_t>();
      r.episode_id = j.at("episode_id").get<std::string>();
      r.success = j.at("success").get<bool>();
      r.oracle_success = j.at("oracle_success").get<bool>();
      r.ne = j.at("ne").is_null() ? std::numeric_limits<double>::infinity() : j.at("ne").get<double>();
      r.path_length = j.at("path_length").get<double>();
      r.shortest_path_length = j.at("shortest_path_length").get<double>();
      r.steps = j.at("steps").get<std::size_t>();
      const auto& fp = j.at("final_pose");
      r.final_pose = {fp.at(0).get<double>(), fp.at(1).get<double>(), fp.at(2).get<double>()};
      r.goal = {j.at("goal").at(0).get<double>(), j.at("goal").at(1).get<double>()};
      r.diagnostic = j.value("diagnostic", "");
      out.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw ParseError("episode log line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return out;
}

std::vector<CellResult> summarize_log(std::span<const LoggedResult> episodes) {
  std::map<std::size_t, std::pair<std::string, std::vector<EpisodeResult>>> cells;
  for (const auto& e : episodes) {
    auto& slot = cells[e.cell];
    slot.first = e.setting;
    slot.second.push_back(e.result);
  }
  std::vector<CellResult> rows;
  for (auto& [index, cell] : cells) {
    auto& results = cell.second;
    std::sort(results.begin(), results.end(), [](const EpisodeResult& a, const EpisodeResult& b) {
      return a.seed != b.seed ? a.seed < b.seed : a.episode_id < b.episode_id;
    });
    rows.push_back({cell.first, summarize(results)});
  }
  return rows;
}

TableFormat table_format_from_string(std::string_view name) {
  if (name == "md" || name == "markdown") return TableFormat::markdown;
  if (name == "csv") return TableFormat::csv;
  throw ParseError("unknown table format \"" + std::string(name) + "\"");
}

std::string format_table(std::span<const CellResult> rows, TableFormat format) {
  std::ostringstream out;
  auto pct = [](double v) { return fixed(100.0 * v, 1); };
  if (format == TableFormat::csv) {
    out << "#,Setting,NE,OSR,SR,SPL\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::string setting = rows[i].setting;
      if (setting.find_first_of(",\"") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : setting) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        setting = quoted + "\"";
      }
      const auto& m = rows[i].summary;
      out << i + 1 << "," << setting << "," << fixed(m.ne_mean, 2) << "," << pct(m.osr) << "," << pct(m.sr) << ","
          << pct(m.spl) << "\n";
    }
    return out.str();
  }
  out << "| # | Setting | NE | OSR | SR | SPL |\n";
  out << "|---|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& m = rows[i].summary;
    out << "| " << i + 1 << " | " << rows[i].setting << " | " << fixed(m.ne_mean, 2) << " | " << pct(m.osr) << " | "
        << pct(m.sr) << " | " << pct(m.spl) << " |\n";
  }
  return out.str();
}

std::vector<BenchmarkCell> grid_preset(std::string_view name) {
  std::vector<BenchmarkCell> cells;
  if (name == "actuation") {
    const double levels[4][2] = {{0.0, 0.0}, {0.10, 0.05}, {0.30, 0.10}, {0.50, 0.30}};
    for (const auto& l : levels) {
      BenchmarkCell c;
      c.setting = "sigma_move=" + fixed(l[0], 2) + ", sigma_rot=" + fixed(l[1], 2);
      c.ablation.noise.sigma_move = l[0];
      c.ablation.noise.sigma_rot = l[1];
      cells.push_back(c);
    }
  } else if (name == "scale") {
    for (double s : {0.0, 0.01, 0.03, 0.05}) {
      BenchmarkCell c;
      c.setting = "sigma_scale=" + fixed(s, 2);
      c.ablation.noise.sigma_scale = s;
      cells.push_back(c);
    }
  } else if (name == "jitter") {
    for (double s : {0.0, 0.005, 0.010, 0.030}) {
      BenchmarkCell c;
      c.setting = "sigma_jitter=" + fixed(s, 3);
      c.ablation.noise.sigma_jitter = s;
      cells.push_back(c);
    }
  } else if (name == "plan") {
    cells.push_back({"full floorplan", {}});
    for (double f : {0.25, 0.5, 0.75, 1.0}) {
      BenchmarkCell c;
      c.setting = "mask " + std::to_string(static_cast<int>(std::lround(f * 100))) + "%";
      c.ablation.plan_mode = PlanMode::mask;
      c.ablation.mask_fraction = f;
      cells.push_back(c);
    }
    BenchmarkCell r;
    r.setting = "random floorplan";
    r.ablation.plan_mode = PlanMode::random_plan;
    cells.push_back(r);
  } else {
    throw ParseError("unknown grid \"" + std::string(name) + "\"; expected actuation, scale, jitter or plan");
  }
  return cells;
}

}  // namespace fpnav::eval
