#include "mrta/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mrta/policies.hpp"

namespace mrta {

RewardMatrix Policy::rewards(const WorldState&) const {
  throw Error("policy " + name() + " does not produce reward matrices");
}

AssignmentMatrix Policy::assign(const WorldState&) const {
  throw Error("policy " + name() + " does not produce assignments");
}

void RolloutConfig::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidInput("sigma must be >= 0");
  if (n_rollouts < 1) throw InvalidInput("n_rollouts must be >= 1");
}

namespace {

using Clock = std::chrono::steady_clock;

// Events closer than this are handled together.
constexpr double kMerge = 1e-9;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxDecisions = 5'000'000;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

enum class Mode { kFree, kPreMoving, kCommitted, kBusy };
enum class Phase { kWaiting, kReady, kAssigned, kDone };

struct RobotSim {
  Mode mode = Mode::kFree;
  // Current leg: leave `origin` at `depart`, reach `dest` at `arrive`. A robot
  // at rest has origin == dest.
  Point origin;
  Point dest;
  double depart = 0.0;
  double arrive = 0.0;
  bool arrival_pending = false;
  std::size_t target = kNone;
  double free_at = 0.0;  // earliest time it may leave its current spot
};

struct TaskSim {
  Phase phase = Phase::kWaiting;
  double start = 0.0;
  double finish = 0.0;
};

class Simulation {
 public:
  Simulation(const ProblemInstance& instance, const Policy& policy,
             const SimulationOptions& options)
      : instance_(instance), policy_(policy), options_(options),
        tasks_(instance.tasks()), precedence_(instance.precedence()) {
    const std::size_t n = instance.num_robots();
    robots_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      RobotSim& r = robots_[i];
      r.origin = r.dest = instance.start_positions()[i];
      r.free_at = instance.robot(i).remaining_duration;
      r.mode = r.free_at > 0.0 ? Mode::kBusy : Mode::kFree;
    }
    state_.resize(tasks_.size());
    for (std::size_t j = 0; j < tasks_.size(); ++j) {
      tasks_[j].status = TaskStatus{};
      state_[j].phase = instance.predecessors(j).empty() ? Phase::kReady : Phase::kWaiting;
    }
    announcements_ = options.announcements;
    std::stable_sort(announcements_.begin(), announcements_.end(),
                     [](const TaskAnnouncement& a, const TaskAnnouncement& b) {
                       return a.time < b.time;
                     });
  }

  SimulationResult run() {
    const auto t0 = Clock::now();
    double t = 0.0;
    std::size_t stalled = 0;
    for (;;) {
      advance_to(t);
      if (all_done() && next_announcement_ == announcements_.size()) break;
      bool committed = false;
      if (any_available()) committed = decide(t, false);
      const bool progressing = any_running() || next_announcement_ < announcements_.size();
      stalled = (committed || progressing) ? 0 : stalled + 1;
      double next = next_event();
      if (!progressing && !committed &&
          (next == std::numeric_limits<double>::infinity() || stalled >= options_.stall_limit)) {
        if (policy_.flavor() == PolicyFlavor::kDirect) {
          throw SimulationError("livelock: policy " + policy_.name() +
                                " makes no progress at t=" + std::to_string(t));
        }
        if (!decide(t, true)) {
          throw SimulationError("livelock: forced decision could not start any task at t=" +
                                std::to_string(t));
        }
        ++result_.forced_decisions;
        stalled = 0;
        next = next_event();
      }
      if (result_.decisions > kMaxDecisions) {
        throw SimulationError("decision limit exceeded at t=" + std::to_string(t));
      }
      t = next;
    }

    result_.instance = final_instance();
    sort_entries(result_.schedule);
    result_.schedule.makespan = makespan(result_.schedule, result_.instance);
    result_.total_ms = ms_since(t0);
    return std::move(result_);
  }

 private:
  Point position_at(const RobotSim& r, double t) const {
    if (r.mode == Mode::kFree || r.mode == Mode::kBusy) return r.origin;
    const double leg = r.arrive - r.depart;
    if (leg <= 0.0 || t >= r.arrive) return r.dest;
    if (t <= r.depart) return r.origin;
    const double frac = (t - r.depart) / leg;
    return Point{r.origin.x + frac * (r.dest.x - r.origin.x),
                 r.origin.y + frac * (r.dest.y - r.origin.y)};
  }

  void advance_to(double t) {
    while (next_announcement_ < announcements_.size() &&
           announcements_[next_announcement_].time <= t + kMerge) {
      announce(announcements_[next_announcement_++]);
    }
    for (std::size_t j = 0; j < tasks_.size(); ++j) {
      if (state_[j].phase == Phase::kAssigned && state_[j].finish <= t + kMerge) {
        complete(j);
      }
    }
    for (std::size_t j = 0; j < tasks_.size(); ++j) {
      if (state_[j].phase != Phase::kWaiting) continue;
      bool ready = true;
      for (std::size_t p = 0; p < tasks_.size() && ready; ++p)
        if (precedence_(p, j) && state_[p].phase != Phase::kDone) ready = false;
      if (ready) state_[j].phase = Phase::kReady;
    }
    for (RobotSim& r : robots_) {
      if (r.mode == Mode::kBusy && r.free_at <= t + kMerge) r.mode = Mode::kFree;
      if (r.mode == Mode::kPreMoving && r.arrival_pending && r.arrive <= t + kMerge) {
        r.arrival_pending = false;
      }
    }
  }

  void complete(std::size_t j) {
    state_[j].phase = Phase::kDone;
    for (RobotSim& r : robots_) {
      if (r.mode == Mode::kCommitted && r.target == j) {
        r.mode = Mode::kFree;
        r.origin = r.dest = tasks_[j].position;
        r.free_at = state_[j].finish;
        r.target = kNone;
      }
    }
  }

  void announce(const TaskAnnouncement& a) {
    if (!instance_.team_capabilities().covers(a.task.required)) {
      throw InvalidInput("announced task cannot be covered by the robot team");
    }
    const std::size_t m = tasks_.size();
    Matrix<std::uint8_t> grown(m + 1, m + 1, 0);
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = 0; q < m; ++q) grown(p, q) = precedence_(p, q);
    for (std::size_t p : a.predecessors) {
      if (p >= m) throw InvalidInput("announced task references unknown predecessor");
      grown(p, m) = 1;
    }
    precedence_ = std::move(grown);
    TaskSpec spec = a.task;
    spec.status = TaskStatus{};
    tasks_.push_back(spec);
    state_.push_back(TaskSim{Phase::kWaiting, 0.0, 0.0});
    announced_ = true;
  }

  bool all_done() const {
    return std::all_of(state_.begin(), state_.end(),
                       [](const TaskSim& s) { return s.phase == Phase::kDone; });
  }
  bool any_available() const {
    return std::any_of(robots_.begin(), robots_.end(), [](const RobotSim& r) {
      return r.mode == Mode::kFree || r.mode == Mode::kPreMoving;
    });
  }
  bool any_running() const {
    return std::any_of(state_.begin(), state_.end(),
                       [](const TaskSim& s) { return s.phase == Phase::kAssigned; }) ||
           std::any_of(robots_.begin(), robots_.end(),
                       [](const RobotSim& r) { return r.mode == Mode::kBusy; });
  }

  double next_event() const {
    double next = std::numeric_limits<double>::infinity();
    for (const TaskSim& s : state_)
      if (s.phase == Phase::kAssigned) next = std::min(next, s.finish);
    for (const RobotSim& r : robots_) {
      if (r.mode == Mode::kBusy) next = std::min(next, r.free_at);
      if (r.mode == Mode::kPreMoving && r.arrival_pending) next = std::min(next, r.arrive);
    }
    if (next_announcement_ < announcements_.size())
      next = std::min(next, announcements_[next_announcement_].time);
    return next;
  }

  WorldState snapshot(double t) const {
    WorldState w;
    w.time = t;
    w.decision_index = result_.decisions;
    w.instance = &instance_;
    w.precedence = &precedence_;
    w.speed = instance_.speed();
    w.robots.resize(robots_.size());
    for (std::size_t i = 0; i < robots_.size(); ++i) {
      const RobotSim& r = robots_[i];
      RobotState& s = w.robots[i];
      s.capabilities = instance_.robot(i).capabilities;
      s.position = position_at(r, t);
      s.available = r.mode == Mode::kFree || r.mode == Mode::kPreMoving;
      if (r.mode == Mode::kBusy) s.remaining_duration = r.free_at - t;
      if (r.mode == Mode::kCommitted) s.remaining_duration = state_[r.target].finish - t;
    }
    w.tasks = tasks_;
    for (std::size_t j = 0; j < tasks_.size(); ++j) {
      const Phase p = state_[j].phase;
      w.tasks[j].status.incomplete = p != Phase::kDone;
      w.tasks[j].status.ready = p == Phase::kReady || p == Phase::kAssigned;
      w.tasks[j].status.assigned = p == Phase::kAssigned;
    }
    return w;
  }

  void commit(std::size_t j, const std::vector<std::size_t>& members, double t) {
    double start = t;
    std::vector<Point> from(members.size());
    std::vector<double> leave(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) {
      const RobotSim& r = robots_[members[k]];
      from[k] = position_at(r, t);
      leave[k] = std::max(t, r.free_at);
      start = std::max(start, leave[k] + instance_.travel(from[k], tasks_[j].position));
    }
    const double finish = start + tasks_[j].duration;
    for (std::size_t k = 0; k < members.size(); ++k) {
      RobotSim& r = robots_[members[k]];
      r.mode = Mode::kCommitted;
      r.origin = from[k];
      r.dest = tasks_[j].position;
      r.depart = leave[k];
      r.arrive = leave[k] + instance_.travel(from[k], r.dest);
      r.arrival_pending = false;
      r.target = j;
      result_.schedule.entries.push_back(ScheduleEntry{members[k], j, start, finish});
    }
    state_[j] = TaskSim{Phase::kAssigned, start, finish};
  }

  void stop(std::size_t i, double t) {
    RobotSim& r = robots_[i];
    if (r.mode != Mode::kPreMoving) return;
    r.origin = r.dest = position_at(r, t);
    r.mode = Mode::kFree;
    r.arrival_pending = false;
    r.target = kNone;
    r.free_at = std::max(r.free_at, t);
  }

  void premove(std::size_t i, std::size_t j, double t) {
    RobotSim& r = robots_[i];
    if (r.mode == Mode::kPreMoving && r.target == j) return;
    const Point here = position_at(r, t);
    r.mode = Mode::kPreMoving;
    r.target = j;
    r.origin = here;
    r.dest = tasks_[j].position;
    r.depart = std::max(t, r.free_at);
    r.arrive = r.depart + instance_.travel(here, r.dest);
    r.arrival_pending = r.arrive > t + kMerge;
  }

  // Returns true if at least one task was committed.
  bool decide(double t, bool forced) {
    const auto t0 = Clock::now();
    const WorldState w = snapshot(t);
    const std::size_t n = robots_.size();
    const std::size_t m = tasks_.size();
    AssignmentMatrix a;
    RewardMatrix rewards;
    if (policy_.flavor() == PolicyFlavor::kReward) {
      rewards = policy_.rewards(w);
      MatchOptions mo;
      if (forced) {
        // Shift every reward above zero and forbid idling so that some task starts.
        double lo = 0.0;
        for (double v : rewards.values()) lo = std::min(lo, v);
        for (double& v : rewards.values()) v = v - lo + 1.0;
        mo.allow_idle = false;
      }
      a = match(rewards, w.robots, w.tasks, mo);
      a = prune_redundant(a, w.robots, w.tasks, instance_.speed());
    } else {
      a = policy_.assign(w);
      if (auto bad = find_assignment_violation(a, w.robots, w.tasks)) {
        throw SimulationError("policy " + policy_.name() + " returned an infeasible assignment: " +
                              *bad);
      }
    }

    bool committed = false;
    std::vector<std::size_t> column(n, kNone);
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if (a(i, j)) members.push_back(i);
      if (members.empty()) continue;
      commit(j, members, t);
      committed = true;
      for (std::size_t i : members) column[i] = j;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!w.robots[i].available || column[i] != kNone) continue;
      const bool idle = a(i, m) != 0;
      if (!idle || policy_.flavor() != PolicyFlavor::kReward) {
        stop(i, t);
        continue;
      }
      RewardMatrix row(1, m + 1, -std::numeric_limits<double>::infinity());
      for (std::size_t j = 0; j < m; ++j) {
        const Phase p = state_[j].phase;
        if (p != Phase::kDone && p != Phase::kAssigned) row(0, j) = rewards(i, j);
      }
      bool any = false;
      for (std::size_t j = 0; j < m; ++j) any = any || std::isfinite(row(0, j));
      if (!any) {
        stop(i, t);
        continue;
      }
      premove(i, premove_target(row, 0), t);
    }
    ++result_.decisions;
    result_.decision_ms.push_back(ms_since(t0));
    return committed;
  }

  ProblemInstance final_instance() const {
    if (!announced_) return instance_;
    std::vector<TaskSpec> tasks = tasks_;
    for (auto& tk : tasks) tk.status = TaskStatus{};
    for (std::size_t j = 0; j < tasks.size(); ++j) {
      for (std::size_t p = 0; p < tasks.size(); ++p) {
        if (precedence_(p, j)) {
          tasks[j].status.ready = false;
          break;
        }
      }
    }
    return ProblemInstance(instance_.robots(), std::move(tasks), precedence_,
                           instance_.start_positions(), instance_.end_positions(),
                           instance_.speed(), instance_.skill_count(), instance_.robot_graph());
  }

  const ProblemInstance& instance_;
  const Policy& policy_;
  const SimulationOptions& options_;
  std::vector<TaskSpec> tasks_;
  Matrix<std::uint8_t> precedence_;
  std::vector<RobotSim> robots_;
  std::vector<TaskSim> state_;
  std::vector<TaskAnnouncement> announcements_;
  std::size_t next_announcement_ = 0;
  bool announced_ = false;
  SimulationResult result_;
};

}  // namespace

SimulationResult simulate(const ProblemInstance& instance, const Policy& policy,
                          const SimulationOptions& options) {
  Simulation sim(instance, policy, options);
  return sim.run();
}

RolloutResult sampled_rollouts(const ProblemInstance& instance, const Policy& base_policy,
                               const RolloutConfig& config, Execution execution,
                               const SimulationOptions& options) {
  config.validate();
  if (base_policy.flavor() != PolicyFlavor::kReward) {
    throw InvalidInput("sampled rollouts need a reward-based policy, got " + base_policy.name());
  }
  const auto t0 = Clock::now();
  std::vector<SimulationResult> runs(config.n_rollouts);
  for_each_index(config.n_rollouts, execution, [&](std::size_t r) {
    NoisyRewardPolicy noisy(base_policy, config.sigma, config.seed, r);
    runs[r] = simulate(instance, noisy, options);
  });
  RolloutResult out;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out.makespans.push_back(runs[r].schedule.makespan);
    if (runs[r].schedule.makespan < runs[out.best_rollout].schedule.makespan) out.best_rollout = r;
  }
  out.best = std::move(runs[out.best_rollout]);
  out.total_ms = ms_since(t0);
  return out;
}

}  // namespace mrta
