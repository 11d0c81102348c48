#include "mrta/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mrta/policies.hpp"
#include "mrta/simulator.hpp"

namespace mrta {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InvalidInput("discount factor must lie in (0, 1]");
  }
}

Matrix<std::uint8_t> feasibility_mask(const std::vector<RobotState>& robots,
                                      const std::vector<TaskStatus>& tasks) {
  const std::size_t m = tasks.size();
  Matrix<std::uint8_t> x(robots.size(), m + 1, 0);
  for (std::size_t i = 0; i < robots.size(); ++i) {
    if (!robots[i].available) continue;
    for (std::size_t j = 0; j < m; ++j) x(i, j) = tasks[j].schedulable() ? 1 : 0;
    x(i, m) = 1;
  }
  return x;
}

ExpertTimeline::ExpertTimeline(const Schedule& schedule, const ProblemInstance& instance)
    : instance_(&instance) {
  const auto report = validate_schedule(schedule, instance);
  if (!report.empty()) {
    throw InvalidSchedule("expert schedule is infeasible: " + report.front().message);
  }
  const std::size_t n = instance.num_robots();
  const std::size_t m = instance.num_tasks();
  start_.assign(m, 0.0);
  finish_.assign(m, 0.0);
  commit_.assign(m, 0.0);
  coalition_.assign(m, {});
  sequence_.assign(n, {});
  for (const auto& e : schedule.entries) {
    if (e.is_idle()) continue;
    start_[e.task] = e.start;
    finish_[e.task] = e.end;
    coalition_[e.task].push_back(e.robot);
    sequence_[e.robot].push_back(e.task);
  }
  for (auto& c : coalition_) std::sort(c.begin(), c.end());
  for (auto& seq : sequence_) {
    std::sort(seq.begin(), seq.end(), [this](std::size_t a, std::size_t b) {
      return start_[a] != start_[b] ? start_[a] < start_[b] : a < b;
    });
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < sequence_[r].size(); ++k) {
      const std::size_t j = sequence_[r][k];
      commit_[j] = std::max(commit_[j], previous_finish(r, k));
    }
  }
  for (std::size_t j = 0; j < m; ++j)
    for (auto p : instance.predecessors(j)) commit_[j] = std::max(commit_[j], finish_[p]);
}

double ExpertTimeline::previous_finish(std::size_t robot, std::size_t index) const {
  return index == 0 ? instance_->robot(robot).remaining_duration
                    : finish_[sequence_[robot][index - 1]];
}

Point ExpertTimeline::previous_position(std::size_t robot, std::size_t index) const {
  return index == 0 ? instance_->start_positions()[robot]
                    : instance_->task(sequence_[robot][index - 1]).position;
}

std::size_t ExpertTimeline::next_index(std::size_t robot, double time) const {
  const auto& seq = sequence_[robot];
  std::size_t k = 0;
  while (k < seq.size() && start_[seq[k]] < time - kTimeTolerance) ++k;
  return k;
}

std::vector<double> ExpertTimeline::decision_times() const {
  std::vector<double> times{0.0};
  times.insert(times.end(), finish_.begin(), finish_.end());
  std::sort(times.begin(), times.end());
  std::vector<double> out;
  for (double t : times)
    if (out.empty() || t > out.back() + kTimeTolerance) out.push_back(t);
  return out;
}

DecisionPoint ExpertTimeline::snapshot(double time) const {
  const auto& inst = *instance_;
  const std::size_t n = inst.num_robots();
  const std::size_t m = inst.num_tasks();
  const double tol = kTimeTolerance;

  DecisionPoint dp;
  dp.time = time;
  std::vector<bool> done(m);
  for (std::size_t j = 0; j < m; ++j) done[j] = finish_[j] <= time + tol;
  dp.tasks.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    bool preds_done = true;
    for (auto p : inst.predecessors(j)) preds_done = preds_done && done[p];
    dp.tasks[j].incomplete = !done[j];
    dp.tasks[j].ready = !done[j] && preds_done;
    dp.tasks[j].assigned = !done[j] && commit_[j] < time - tol;
  }

  // Robots head for their next task as soon as the previous one ends.
  auto on_route = [&](std::size_t r, std::size_t k) {
    const Point from = previous_position(r, k);
    const Point to = inst.task(sequence_[r][k]).position;
    const double leg = inst.travel(from, to);
    const double elapsed = time - previous_finish(r, k);
    const double frac = leg > 0.0 ? std::clamp(elapsed / leg, 0.0, 1.0) : 1.0;
    return Point{from.x + frac * (to.x - from.x), from.y + frac * (to.y - from.y)};
  };

  dp.robots.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    RobotState& rs = dp.robots[r];
    rs.capabilities = inst.robot(r).capabilities;
    const auto& seq = sequence_[r];
    const double release = inst.robot(r).remaining_duration;
    if (time < release - tol) {
      rs.available = false;
      rs.remaining_duration = release - time;
      rs.position = inst.start_positions()[r];
      continue;
    }
    bool busy = false;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const std::size_t j = seq[k];
      if (commit_[j] < time - tol && time < finish_[j] - tol) {
        busy = true;
        rs.available = false;
        rs.remaining_duration = finish_[j] - time;
        rs.position = on_route(r, k);
        break;
      }
    }
    if (busy) continue;
    rs.available = true;
    rs.remaining_duration = 0.0;
    const std::size_t k = next_index(r, time);
    rs.position = k < seq.size() ? on_route(r, k) : previous_position(r, seq.size());
  }

  dp.mask = feasibility_mask(dp.robots, dp.tasks);
  return dp;
}

Matrix<double> ExpertTimeline::reward(double time, double gamma) const {
  check_gamma(gamma);
  const auto& inst = *instance_;
  const std::size_t n = inst.num_robots();
  const std::size_t m = inst.num_tasks();
  const double tol = kTimeTolerance;
  Matrix<double> out(n, m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (time > start_[j] + tol) continue;
    const double value = std::pow(gamma, finish_[j] - time);
    for (auto r : coalition_[j]) out(r, j) = value;
  }
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t k = next_index(r, time);
    if (k == sequence_[r].size()) continue;
    const double until = commit_[sequence_[r][k]];
    if (previous_finish(r, k) <= time + tol && time < until - tol) {
      out(r, m) = std::pow(gamma, until - time);
    }
  }
  return out;
}

std::vector<DecisionPoint> extract_decision_points(const Schedule& schedule,
                                                   const ProblemInstance& instance) {
  ExpertTimeline timeline(schedule, instance);
  std::vector<DecisionPoint> out;
  for (double t : timeline.decision_times()) out.push_back(timeline.snapshot(t));
  return out;
}

Matrix<double> optimal_reward(const Schedule& schedule, const ProblemInstance& instance,
                              const DecisionPoint& point, double gamma) {
  check_gamma(gamma);
  ExpertTimeline timeline(schedule, instance);
  Matrix<double> out = timeline.reward(point.time, gamma);
  if (point.mask.rows() != out.rows() || point.mask.cols() != out.cols()) {
    throw InvalidInput("decision point mask shape does not match the instance");
  }
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      if (!point.mask(i, j)) out(i, j) = 0.0;
  return out;
}

std::vector<DecisionPoint> build_decision_tensors(const Schedule& schedule,
                                                  const ProblemInstance& instance,
                                                  double gamma) {
  check_gamma(gamma);
  ExpertTimeline timeline(schedule, instance);
  std::vector<DecisionPoint> out;
  for (double t : timeline.decision_times()) {
    DecisionPoint dp = timeline.snapshot(t);
    dp.target = timeline.reward(t, gamma);
    for (std::size_t i = 0; i < dp.target.rows(); ++i)
      for (std::size_t j = 0; j < dp.target.cols(); ++j)
        if (!dp.mask(i, j)) dp.target(i, j) = 0.0;
    out.push_back(std::move(dp));
  }
  return out;
}

ReplayReport replay_schedule(const Schedule& schedule, const ProblemInstance& instance,
                             double gamma) {
  check_gamma(gamma);
  ReplayReport report;
  report.expert_makespan = schedule.makespan;
  ExpertReplayPolicy policy(schedule, instance, gamma);
  const SimulationResult sim = simulate(instance, policy);
  report.replay_makespan = sim.schedule.makespan;
  report.decisions = sim.decisions;
  report.forced_decisions = sim.forced_decisions;
  report.reproduced =
      std::abs(report.replay_makespan - report.expert_makespan) <= kTimeTolerance;
  if (!report.reproduced) {
    std::ostringstream os;
    os.precision(12);
    os << "replay makespan " << report.replay_makespan << " vs expert "
       << report.expert_makespan << "; first diverging task:";
    ExpertTimeline expert(schedule, instance);
    ExpertTimeline replay(sim.schedule, instance);
    bool found = false;
    for (std::size_t j = 0; j < instance.num_tasks() && !found; ++j) {
      if (std::abs(expert.start(j) - replay.start(j)) > kTimeTolerance ||
          expert.coalition(j) != replay.coalition(j)) {
        os << " task " << j << " expert start " << expert.start(j) << " replay start "
           << replay.start(j);
        found = true;
      }
    }
    if (!found) os << " none (tie in coalition timing)";
    report.diagnostic = os.str();
  }
  return report;
}

bool replay_check(const Schedule& schedule, const ProblemInstance& instance, double gamma) {
  return replay_schedule(schedule, instance, gamma).reproduced;
}

}  // namespace mrta
