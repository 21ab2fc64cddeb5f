#include "fpnav/eval/policy.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <deque>

#include "fpnav/dataset/actions.hpp"
#include "fpnav/error.hpp"
#include "fpnav/random.hpp"
#include "json.hpp"

namespace fpnav::eval {

using geometry::Point2;
using sim::Action;

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::oracle_closed_loop: return "oracle_closed_loop";
    case PolicyKind::dead_reckoning: return "dead_reckoning";
    case PolicyKind::random: return "random";
    case PolicyKind::external: return "external";
  }
  return "oracle_closed_loop";
}

PolicyKind policy_kind_from_string(std::string_view name) {
  if (name == "oracle" || name == "oracle_closed_loop") return PolicyKind::oracle_closed_loop;
  if (name == "deadreck" || name == "dead_reckoning") return PolicyKind::dead_reckoning;
  if (name == "random") return PolicyKind::random;
  if (name == "external") return PolicyKind::external;
  throw ParseError("unknown policy \"" + std::string(name) + "\"");
}

namespace {

PlannerOptions with_clearance(PlannerOptions o, double clearance) {
  o.clearance = clearance;
  return o;
}

}  // namespace

PolicyMap::PolicyMap(geometry::FloorPlan plan, PlannerOptions base)
    : plan_(std::move(plan)),
      wide_(plan_, with_clearance(base, kWidePlannerClearance)),
      narrow_(plan_, with_clearance(base, sim::kWallClearance)) {}

namespace {

class PlanningPolicy final : public Policy {
 public:
  PlanningPolicy(std::shared_ptr<const PolicyMap> map, Point2 goal, bool use_true_pose, std::size_t replan_period)
      : map_(std::move(map)), goal_(goal), use_true_pose_(use_true_pose), replan_period_(std::max<std::size_t>(1, replan_period)) {}

  Action act(const sim::EpisodeState& state) override {
    const sim::AgentPose& pose = use_true_pose_ ? state.true_pose : state.believed_pose;
    const Point2 p = sim::project_to_plan(state, pose.position());
    if (geometry::distance(p, goal_) < kOracleStopDistance) return Action::stop();

    if (last_forward_ && geometry::distance(p, *last_forward_) < 1e-6) short_horizon_ = 8;
    last_forward_.reset();

    if (!field_ && !select_field(p)) return Action::stop();

    const double horizon = short_horizon_ > 0 ? 0.3 : kLookaheadHorizon;
    if (short_horizon_ > 0) --short_horizon_;
    if (!target_ || since_plan_ >= replan_period_ || geometry::distance(p, *target_) < 0.2) {
      target_ = field_->lookahead(p, horizon);
      since_plan_ = 0;
    }
    ++since_plan_;
    if (!target_) {
      diagnostic_ = "no path from the current position to the goal";
      return Action::stop();
    }

    const double bearing = std::atan2(target_->x - p.x, target_->y - p.y);
    const double err = sim::angle_difference(bearing, pose.theta);
    if (std::abs(err) > kHeadingTolerance) return err > 0.0 ? Action::right() : Action::left();
    last_forward_ = p;
    return Action::forward();
  }

  std::string diagnostic() const override { return diagnostic_; }

 private:
  bool select_field(Point2 p) {
    for (const GridPlanner* planner : {&map_->wide(), &map_->narrow()}) {
      auto field = std::make_unique<DistanceField>(planner->distance_field(goal_));
      if (field->reachable_from(p)) {
        field_ = std::move(field);
        return true;
      }
    }
    diagnostic_ = "goal unreachable on the policy's floor plan";
    return false;
  }

  std::shared_ptr<const PolicyMap> map_;
  Point2 goal_;
  bool use_true_pose_;
  std::size_t replan_period_;
  std::unique_ptr<DistanceField> field_;
  std::optional<Point2> target_;
  std::size_t since_plan_ = 0;
  std::optional<Point2> last_forward_;
  int short_horizon_ = 0;
  std::string diagnostic_;
};

class RandomPolicy final : public Policy {
 public:
  RandomPolicy(std::uint64_t seed, double stop_probability) : seed_(seed), p_stop_(stop_probability) {}

  Action act(const sim::EpisodeState& state) override {
    const double u = keyed_uniform(seed_, state.step_count, 0);
    if (u < p_stop_) return Action::stop();
    const double v = (u - p_stop_) / (1.0 - p_stop_);
    if (v < 0.5) return Action::forward();
    return v < 0.75 ? Action::left() : Action::right();
  }

 private:
  std::uint64_t seed_;
  double p_stop_;
};

class ExternalPolicy final : public Policy {
 public:
  ExternalPolicy(const std::string& command, std::string episode_id, std::string instruction, Point2 goal)
      : episode_id_(std::move(episode_id)), instruction_(std::move(instruction)), goal_(goal) {
    // A child that exits early must surface as an error, not kill us.
    static const bool ignore_sigpipe = [] {
      signal(SIGPIPE, SIG_IGN);
      return true;
    }();
    (void)ignore_sigpipe;
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) throw Error("external policy: pipe failed");
    pid_ = fork();
    if (pid_ < 0) throw Error("external policy: fork failed");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    fcntl(to_child[1], F_SETFD, FD_CLOEXEC);
    fcntl(from_child[0], F_SETFD, FD_CLOEXEC);
    out_ = fdopen(to_child[1], "w");
    in_ = fdopen(from_child[0], "r");
  }

  ~ExternalPolicy() override {
    if (out_) std::fclose(out_);
    if (in_) std::fclose(in_);
    if (pid_ > 0) {
      int status = 0;
      if (waitpid(pid_, &status, WNOHANG) == 0) {
        kill(pid_, SIGTERM);
        waitpid(pid_, &status, 0);
      }
    }
  }

  Action act(const sim::EpisodeState& state) override {
    if (!pending_.empty()) {
      const Action a = pending_.front();
      pending_.pop_front();
      return a;
    }
    const Point2 p = sim::project_to_plan(state, state.believed_pose.position());
    nlohmann::ordered_json req;
    req["step"] = state.step_count;
    req["episode_id"] = episode_id_;
    req["instruction"] = instruction_;
    req["pose"] = {p.x, p.y, state.believed_pose.theta};
    req["goal"] = {goal_.x, goal_.y};
    const std::string line = req.dump() + "\n";
    if (std::fputs(line.c_str(), out_) < 0 || std::fflush(out_) != 0) {
      throw Error("external policy: cannot write to the child process");
    }

    std::string reply;
    for (int c; (c = std::fgetc(in_)) != EOF && c != '\n';) reply += static_cast<char>(c);
    if (reply.empty()) throw Error("external policy: child process closed its output");
    Action a;
    try {
      const auto j = nlohmann::json::parse(reply);
      a.kind = sim::action_kind_from_string(j.at("action").get<std::string>());
      const auto& mag = j.contains("magnitude") ? j.at("magnitude") : nlohmann::json(nullptr);
      if (a.kind == sim::ActionKind::Stop) {
        a.magnitude = 0.0;
      } else if (mag.is_null()) {
        a.magnitude = a.primitive();
      } else {
        a.magnitude = mag.get<double>();
        if (!(a.magnitude > 0.0) || !std::isfinite(a.magnitude)) throw Error("magnitude must be positive");
      }
    } catch (const std::exception& e) {
      throw Error("external policy: malformed action \"" + reply + "\": " + e.what());
    }
    const auto parts = dataset::decompose_action(a);
    pending_.assign(parts.begin() + 1, parts.end());
    return parts.front();
  }

 private:
  std::string episode_id_;
  std::string instruction_;
  Point2 goal_;
  pid_t pid_ = -1;
  std::FILE* out_ = nullptr;
  std::FILE* in_ = nullptr;
  std::deque<Action> pending_;
};

}  // namespace

std::unique_ptr<Policy> make_planning_policy(std::shared_ptr<const PolicyMap> map, Point2 goal, bool use_true_pose,
                                             std::size_t replan_period) {
  return std::make_unique<PlanningPolicy>(std::move(map), goal, use_true_pose, replan_period);
}

std::unique_ptr<Policy> make_random_policy(std::uint64_t seed, double stop_probability) {
  return std::make_unique<RandomPolicy>(seed, stop_probability);
}

std::unique_ptr<Policy> make_external_policy(const std::string& command, std::string episode_id,
                                             std::string instruction, Point2 goal) {
  return std::make_unique<ExternalPolicy>(command, std::move(episode_id), std::move(instruction), goal);
}

}  // namespace fpnav::eval
