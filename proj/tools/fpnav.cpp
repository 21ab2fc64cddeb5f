// Command-line front end: data generation, rendering, benchmarking and the
// HTTP service.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"
#include "fpnav/dataset/export.hpp"
#include "fpnav/dataset/generate.hpp"
#include "fpnav/dataset/procedural.hpp"
#include "fpnav/dataset/qa.hpp"
#include "fpnav/eval/benchmark.hpp"
#include "fpnav/geometry/floorplan_io.hpp"
#include "fpnav/io.hpp"
#include "fpnav/random.hpp"
#include "fpnav/render/render.hpp"
#include "fpnav/service/server.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace fpnav;

namespace {

// Loads episodes from a directory (every *.json, sorted) or a single file
// and resolves each floor-plan reference relative to its episode file.
struct EpisodeSet {
  std::vector<dataset::Episode> episodes;
  std::vector<std::shared_ptr<const sim::World>> worlds;  // parallel to episodes
};

EpisodeSet load_episode_set(const fs::path& where) {
  std::vector<fs::path> files;
  if (fs::is_directory(where)) {
    for (const auto& e : fs::directory_iterator(where)) {
      if (e.path().extension() == ".json" && e.path().filename() != "manifest.json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(where);
  }
  if (files.empty()) throw Error("no episode files under " + where.string());

  std::map<fs::path, std::shared_ptr<const sim::World>> cache;
  EpisodeSet set;
  for (const auto& f : files) {
    dataset::Episode ep = dataset::load_episode(f);
    fs::path plan = ep.floorplan_ref;
    if (plan.is_relative()) plan = f.parent_path() / plan;
    plan = fs::weakly_canonical(plan);
    auto& world = cache[plan];
    if (!world) world = std::make_shared<const sim::World>(geometry::load_floorplan(plan));
    set.episodes.push_back(std::move(ep));
    set.worlds.push_back(world);
  }
  return set;
}

dataset::WorldResolver resolver_for(const EpisodeSet& set) {
  std::map<std::string, std::shared_ptr<const sim::World>> by_id;
  for (std::size_t i = 0; i < set.episodes.size(); ++i) by_id[set.episodes[i].episode_id] = set.worlds[i];
  return [by_id](const dataset::Episode& ep) { return by_id.at(ep.episode_id); };
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      seeds.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("seed \"" + item + "\" is not a non-negative integer");
    }
  }
  if (seeds.empty()) throw ParseError("at least one seed is required");
  return seeds;
}

int cmd_gen_floorplan(const dataset::ProceduralSpec& spec, const fs::path& out) {
  const auto fp = dataset::gen_synthetic_floorplan(spec);
  geometry::save_floorplan(fp, out);
  std::cout << "wrote " << out.string() << " (" << fp.regions().size() << " regions)\n";
  return 0;
}

int cmd_render(const fs::path& plan_path, const fs::path& out, const render::RasterConfig& cfg,
               const std::string& trajectory) {
  const auto fp = geometry::load_floorplan(plan_path);
  render::Image img = render::render_floorplan(fp, cfg);
  if (!trajectory.empty()) {
    const auto log = sim::parse_trajectory_log(read_text_file(trajectory));
    if (!log.empty()) {
      std::vector<sim::AgentPose> poses;
      for (std::size_t i = 0; i + 1 < log.size(); ++i) poses.push_back(log[i].true_pose);
      img = render::overlay_pose_trajectory(img, fp, cfg, poses, log.back().true_pose).image;
    }
  }
  render::write_png(out, img);
  std::cout << "wrote " << out.string() << " (" << img.width() << "x" << img.height() << ")\n";
  return 0;
}

int cmd_gen_episodes(const std::vector<std::string>& plans, dataset::EpisodeGenOptions options, const fs::path& out) {
  fs::create_directories(out);
  std::size_t written = 0;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const fs::path plan_path = fs::weakly_canonical(plans[i]);
    const auto fp = geometry::load_floorplan(plan_path);
    dataset::EpisodeGenOptions o = options;
    o.seed = hash_key(options.seed, i, 0xe9);
    o.floorplan_ref = fs::relative(plan_path, fs::weakly_canonical(out)).generic_string();
    dataset::GenerationReport report;
    for (const auto& ep : dataset::gen_episodes(fp, o, &report)) {
      dataset::save_episode(ep, out / (ep.episode_id + ".json"));
      ++written;
    }
    std::cout << plan_path.filename().string() << ": " << report.attempts << " attempts";
    for (const auto& [why, n] : report.rejections) std::cout << ", " << why << "=" << n;
    std::cout << "\n";
  }
  std::cout << "wrote " << written << " episodes to " << out.string() << "\n";
  return 0;
}

int cmd_annotate(const fs::path& episodes) {
  const EpisodeSet set = load_episode_set(episodes);
  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < set.episodes.size(); ++i) {
    const auto& ep = set.episodes[i];
    const auto trace = dataset::annotate_trajectory(set.worlds[i]->plan(), ep.gt_path);
    nlohmann::ordered_json j;
    j["episode_id"] = ep.episode_id;
    j["per_waypoint"] = nlohmann::ordered_json::array();
    for (const auto& w : trace.per_waypoint) {
      nlohmann::ordered_json rec;
      rec["index"] = w.index;
      rec["region_id"] = w.region ? nlohmann::ordered_json(w.region->region_id) : nullptr;
      rec["region_type"] = w.region ? nlohmann::ordered_json(w.region->region_type) : nullptr;
      j["per_waypoint"].push_back(rec);
    }
    j["compressed"] = nlohmann::ordered_json::array();
    for (const auto& e : trace.compressed) j["compressed"].push_back({e.region_id, e.region_type});
    const auto why = dataset::rejection_reason(trace);
    j["filter"] = why ? *why : "kept";
    all.push_back(j);
  }
  std::cout << all.dump(2) << "\n";
  return 0;
}

int cmd_qa_gen(const fs::path& episodes, const std::string& task_name, const fs::path& out, std::size_t per_episode,
               std::uint64_t seed, bool balance) {
  const EpisodeSet set = load_episode_set(episodes);
  const auto task = dataset::qa_task_from_string(task_name);
  std::vector<dataset::QaRecord> records;
  for (std::size_t i = 0; i < set.episodes.size(); ++i) {
    const auto& ep = set.episodes[i];
    const auto ro = dataset::rollout_episode(ep, set.worlds[i]);
    switch (task) {
      case dataset::QaTask::nav: {
        auto r = dataset::gen_nav_qa(ep, ro);
        records.insert(records.end(), r.begin(), r.end());
        break;
      }
      case dataset::QaTask::instruction_summarization:
        records.push_back(dataset::gen_summarization_qa(ep, ro));
        break;
      case dataset::QaTask::region_localization:
      case dataset::QaTask::trajectory_reasoning: {
        // Uniformly sampled steps, keyed by episode so runs are reproducible.
        const std::uint64_t key = hash_key(seed, fnv1a64(ep.episode_id), 0x9a);
        for (std::size_t k = 0; k < per_episode; ++k) {
          const auto t = static_cast<std::size_t>(keyed_uniform(key, k, 0) * static_cast<double>(ro.frame_count()));
          records.push_back(task == dataset::QaTask::region_localization
                                ? dataset::gen_localization_qa(ep, ro, set.worlds[i]->plan(), t)
                                : dataset::gen_trajectory_reasoning_qa(ep, ro, t));
        }
        break;
      }
    }
  }
  if (balance) {
    if (task != dataset::QaTask::nav) throw Error("--balance applies to the nav task only");
    dataset::BalanceReport report;
    records = dataset::balance_actions(records, &report);
    for (const auto& [cls, n] : report.before) {
      std::cout << cls << ": " << n << " -> " << report.after.at(cls) << "\n";
    }
  }
  std::string text;
  for (const auto& r : records) text += dataset::qa_record_json(r) + "\n";
  write_file_atomic(out, text);
  std::cout << "wrote " << records.size() << " records to " << out.string() << "\n";
  return 0;
}

int cmd_export(const fs::path& episodes, const std::string& layout, const fs::path& out,
               const render::RasterConfig& cfg) {
  const EpisodeSet set = load_episode_set(episodes);
  const auto manifest = dataset::export_dataset(set.episodes, resolver_for(set),
                                                dataset::export_layout_from_string(layout), out, cfg);
  std::size_t frames = 0;
  for (const auto& e : manifest.episodes) {
    frames += e.frames.size() + e.obs_frames.size() + e.plan_frames.size() + (e.static_plan ? 1 : 0);
  }
  std::cout << "exported " << manifest.episodes.size() << " episodes, " << frames << " frames to " << out.string()
            << "\n";
  return 0;
}

int cmd_stats(const fs::path& episodes) {
  const EpisodeSet set = load_episode_set(episodes);
  std::cout << dataset::dataset_stats(set.episodes, resolver_for(set)).to_json();
  return 0;
}

struct RunOptions {
  std::string episodes;
  std::string policy = "oracle";
  std::string policy_command;
  double sigma_move = 0.0, sigma_rot = 0.0, sigma_scale = 0.0, sigma_jitter = 0.0;
  std::optional<double> sigma_drift;
  std::string plan_mode = "full";
  std::string grid;
  std::string seeds = "0";
  std::size_t max_steps = 500;
  std::string distance = "euclidean";
  std::size_t threads = 0;
  bool frames = false;
  std::string out;
};

std::string cell_label(const eval::AblationSpec& a) {
  std::ostringstream ss;
  ss << "plan=" << a.plan_mode_label() << ", sigma_move=" << a.noise.sigma_move << ", sigma_rot=" << a.noise.sigma_rot;
  if (a.noise.sigma_drift) ss << ", sigma_drift=" << *a.noise.sigma_drift;
  if (a.noise.sigma_scale > 0) ss << ", sigma_scale=" << a.noise.sigma_scale;
  if (a.noise.sigma_jitter > 0) ss << ", sigma_jitter=" << a.noise.sigma_jitter;
  return ss.str();
}

int cmd_run(const RunOptions& o) {
  const EpisodeSet set = load_episode_set(o.episodes);
  std::vector<eval::BenchmarkEpisode> episodes;
  for (std::size_t i = 0; i < set.episodes.size(); ++i) episodes.push_back({set.episodes[i], set.worlds[i]});

  eval::BenchmarkConfig cfg;
  cfg.policy.kind = eval::policy_kind_from_string(o.policy);
  cfg.policy.max_steps = o.max_steps;
  cfg.policy.command = o.policy_command;
  if (cfg.policy.kind == eval::PolicyKind::external && o.policy_command.empty()) {
    throw Error("--policy external needs --policy-command");
  }
  cfg.seeds = parse_seeds(o.seeds);
  cfg.mode = eval::distance_mode_from_string(o.distance);
  cfg.threads = o.threads;
  if (!o.grid.empty()) {
    cfg.cells = eval::grid_preset(o.grid);
  } else {
    eval::AblationSpec a = eval::AblationSpec::parse_plan_mode(o.plan_mode);
    a.noise.sigma_move = o.sigma_move;
    a.noise.sigma_rot = o.sigma_rot;
    a.noise.sigma_drift = o.sigma_drift;
    a.noise.sigma_scale = o.sigma_scale;
    a.noise.sigma_jitter = o.sigma_jitter;
    cfg.cells.push_back({cell_label(a), a});
  }

  const fs::path out = o.out;
  eval::EpisodeCallback on_episode;
  if (o.frames) {
    auto renderers = std::make_shared<std::map<const sim::World*, std::shared_ptr<dataset::FrameRenderer>>>();
    auto guard = std::make_shared<std::mutex>();
    on_episode = [out, renderers, guard](const eval::LoggedResult& r, const sim::EpisodeState& s) {
      std::shared_ptr<dataset::FrameRenderer> renderer;
      {
        std::lock_guard lock(*guard);
        auto& slot = (*renderers)[s.world.get()];
        if (!slot) slot = std::make_shared<dataset::FrameRenderer>(s.world);
        renderer = slot;
      }
      const fs::path dir = out / "frames" / ("cell" + std::to_string(r.cell)) /
                           ("seed" + std::to_string(r.result.seed)) / r.result.episode_id;
      for (std::size_t t = 0; t + 1 < s.believed_trajectory.size(); ++t) {
        const std::span<const sim::AgentPose> history(s.believed_trajectory.data(), t);
        char name[32];
        std::snprintf(name, sizeof name, "%05zu.png", t);
        render::write_png(dir / name, renderer->dual_view(history, s.believed_trajectory[t], t, s.scale_alpha).image);
      }
      write_file_atomic(dir / "trajectory.jsonl", sim::trajectory_log_jsonl(s));
    };
  }

  const auto result = eval::run_benchmark(episodes, cfg, on_episode);
  write_file_atomic(out / "episodes.jsonl", eval::episode_log_jsonl(result.episodes));
  const std::string table = eval::format_table(result.rows, eval::TableFormat::markdown);
  write_file_atomic(out / "table.md", table);
  write_file_atomic(out / "table.csv", eval::format_table(result.rows, eval::TableFormat::csv));
  std::cout << table;
  return 0;
}

int cmd_eval(const fs::path& results, const std::string& table) {
  const fs::path log = fs::is_directory(results) ? results / "episodes.jsonl" : results;
  const auto rows = eval::summarize_log(eval::parse_episode_log(read_text_file(log)));
  std::cout << eval::format_table(rows, eval::table_format_from_string(table));
  return 0;
}

int cmd_serve(int port, std::string store_root, const std::string& host) {
  if (store_root.empty()) {
    const char* env = std::getenv("FPNAV_STORE");
    store_root = env ? env : "fpnav-store";
  }
  service::Store store(store_root);
  service::ApiServer server(store);
  std::cout << "serving " << fs::absolute(store_root).string() << " on http://" << host << ":" << port << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floor-plan guided navigation: simulation, datasets and benchmarks"};
  app.require_subcommand(1);

  render::RasterConfig raster;
  auto add_raster = [&raster](CLI::App* cmd) {
    cmd->add_option("--ppm", raster.pixels_per_meter, "Pixels per meter")->check(CLI::PositiveNumber);
    cmd->add_option("--palette", raster.palette_id, "Palette id (default, pastel)");
  };

  std::string plan_path, out_path, trajectory;
  auto* render_cmd = app.add_subcommand("render", "Rasterize a floor plan");
  render_cmd->add_option("--floorplan", plan_path, "Floor-plan JSON")->required();
  render_cmd->add_option("--out", out_path, "Output PNG")->required();
  render_cmd->add_option("--trajectory", trajectory, "Trajectory log (JSONL) to overlay");
  add_raster(render_cmd);

  dataset::ProceduralSpec spec;
  auto* genfp = app.add_subcommand("gen-floorplan", "Generate a procedural floor plan");
  genfp->add_option("--rooms", spec.room_count, "Number of rooms")->check(CLI::PositiveNumber);
  genfp->add_option("--seed", spec.seed, "Random seed");
  genfp->add_option("--min-size", spec.min_room_size, "Minimum room side (m)");
  genfp->add_option("--max-size", spec.max_room_size, "Maximum room side (m)");
  genfp->add_option("--corridor-width", spec.corridor_width, "Corridor width (m)");
  genfp->add_option("--max-extent", spec.max_extent, "Largest allowed plan side (m)");
  genfp->add_option("--scene-id", spec.scene_id, "Scene id");
  genfp->add_option("--out", out_path, "Output JSON")->required();

  std::vector<std::string> plans;
  dataset::EpisodeGenOptions gen_options;
  auto* genep = app.add_subcommand("gen-episodes", "Generate episodes on floor plans");
  genep->add_option("--floorplan", plans, "Floor-plan JSON (repeatable)")->required();
  genep->add_option("--count", gen_options.count, "Episodes per floor plan");
  genep->add_option("--seed", gen_options.seed, "Random seed");
  genep->add_option("--min-regions", gen_options.min_regions, "Minimum regions traversed");
  genep->add_option("--out", out_path, "Output directory")->required();

  std::string episodes_path;
  auto* annotate = app.add_subcommand("annotate", "Print region traces of episodes");
  annotate->add_option("--episodes", episodes_path, "Episode file or directory")->required();

  std::string task;
  std::size_t per_episode = 3;
  std::uint64_t qa_seed = 0;
  bool balance = false;
  auto* qa = app.add_subcommand("qa-gen", "Generate QA records");
  qa->add_option("--task", task, "nav, region_localization, trajectory_reasoning, instruction_summarization")
      ->required();
  qa->add_option("--episodes", episodes_path, "Episode file or directory")->required();
  qa->add_option("--out", out_path, "Output JSONL")->required();
  qa->add_option("--steps-per-episode", per_episode, "Sampled steps for step-level tasks");
  qa->add_option("--seed", qa_seed, "Seed for step sampling");
  qa->add_flag("--balance", balance, "Upsample underrepresented nav actions");

  std::string layout;
  auto* exp = app.add_subcommand("export", "Render episode frames in a dataset layout");
  exp->add_option("--layout", layout, "dual_view, dual_stream, interleaved, static_separate")->required();
  exp->add_option("--episodes", episodes_path, "Episode file or directory")->required();
  exp->add_option("--out", out_path, "Output directory")->required();
  add_raster(exp);

  auto* stats = app.add_subcommand("stats", "Action and trajectory histograms");
  stats->add_option("--episodes", episodes_path, "Episode file or directory")->required();

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a policy over episodes");
  run_cmd->add_option("--episodes", run.episodes, "Episode file or directory")->required();
  run_cmd->add_option("--policy", run.policy, "oracle, deadreck, random or external");
  run_cmd->add_option("--policy-command", run.policy_command, "Command for the external policy");
  run_cmd->add_option("--sigma-move", run.sigma_move, "Relative distance noise");
  run_cmd->add_option("--sigma-rot", run.sigma_rot, "Turn noise (rad)");
  run_cmd->add_option("--sigma-drift", run.sigma_drift, "Heading drift (rad), default 0.1 * sigma-move");
  run_cmd->add_option("--sigma-scale", run.sigma_scale, "Plan scale noise");
  run_cmd->add_option("--sigma-jitter", run.sigma_jitter, "Vertex jitter (m)");
  run_cmd->add_option("--plan-mode", run.plan_mode, "full, mask:<fraction> or random");
  run_cmd->add_option("--grid", run.grid, "Preset grid: actuation, scale, jitter or plan");
  auto* seeds_opt = run_cmd->add_option("--seeds", run.seeds, "Comma-separated seeds");
  run_cmd->add_option("--seed", run.seeds, "Single seed")->excludes(seeds_opt);
  run_cmd->add_option("--max-steps", run.max_steps, "Step cap")->check(CLI::PositiveNumber);
  run_cmd->add_option("--distance", run.distance, "euclidean or geodesic");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");
  run_cmd->add_flag("--frames", run.frames, "Write dual-view frames per episode");
  run_cmd->add_option("--out", run.out, "Results directory")->required();

  std::string results, table = "md";
  auto* eval_cmd = app.add_subcommand("eval", "Summarize a results directory");
  eval_cmd->add_option("--results", results, "Results directory or episodes.jsonl")->required();
  eval_cmd->add_option("--table", table, "md or csv");

  int port = 8080;
  std::string store_root, host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Start the HTTP API");
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--store-root", store_root, "Store directory (default $FPNAV_STORE)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*render_cmd) return cmd_render(plan_path, out_path, raster, trajectory);
    if (*genfp) return cmd_gen_floorplan(spec, out_path);
    if (*genep) return cmd_gen_episodes(plans, gen_options, out_path);
    if (*annotate) return cmd_annotate(episodes_path);
    if (*qa) return cmd_qa_gen(episodes_path, task, out_path, per_episode, qa_seed, balance);
    if (*exp) return cmd_export(episodes_path, layout, out_path, raster);
    if (*stats) return cmd_stats(episodes_path);
    if (*run_cmd) return cmd_run(run);
    if (*eval_cmd) return cmd_eval(results, table);
    if (*serve) return cmd_serve(port, store_root, host);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
