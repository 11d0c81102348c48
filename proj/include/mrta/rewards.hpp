#pragma once

// Discounted "ground-truth" rewards extracted from an expert schedule.
//
// For a decision at time T, robot i and task j of the expert schedule:
//   O[i][j] = gamma^(finish_j - T)  if i is in the coalition of j and T <= start_j
// The idle column rewards a robot that must wait before its next expert task n
// can be committed. The commit time of n is the first instant its whole
// coalition is free and its predecessors are done:
//   commit_n = max(previous finish of every member, finish of every predecessor)
//   O[i][idle] = gamma^(commit_n - T)  if prev_finish_i <= T < commit_n
// Rewards used as training targets are additionally masked with X (available
// robot x schedulable task).

#include <cstdint>
#include <string>
#include <vector>

#include "mrta/core.hpp"

namespace mrta {

inline constexpr double kDefaultGamma = 0.99;

struct DecisionPoint {
  double time = 0.0;
  std::vector<RobotState> robots;
  std::vector<TaskStatus> tasks;
  Matrix<std::uint8_t> mask;  // N x (M+1)
  Matrix<double> target;      // N x (M+1); empty until rewards are attached

  friend bool operator==(const DecisionPoint&, const DecisionPoint&) = default;
};

void check_gamma(double gamma);

// Feasibility mask: available robot x schedulable task, idle column = available.
Matrix<std::uint8_t> feasibility_mask(const std::vector<RobotState>& robots,
                                      const std::vector<TaskStatus>& tasks);

// Indexed view of a feasible expert schedule.
class ExpertTimeline {
 public:
  // Throws InvalidSchedule if the schedule does not validate.
  ExpertTimeline(const Schedule& schedule, const ProblemInstance& instance);

  const ProblemInstance& instance() const noexcept { return *instance_; }
  double start(std::size_t task) const { return start_.at(task); }
  double finish(std::size_t task) const { return finish_.at(task); }
  double commit(std::size_t task) const { return commit_.at(task); }
  const std::vector<std::size_t>& coalition(std::size_t task) const {
    return coalition_.at(task);
  }
  // Task sequence of a robot, by start time.
  const std::vector<std::size_t>& sequence(std::size_t robot) const {
    return sequence_.at(robot);
  }

  // Time 0 plus every distinct task finish time, ascending.
  std::vector<double> decision_times() const;

  // World snapshot just before assignments are made at `time`.
  DecisionPoint snapshot(double time) const;

  // Unmasked discounted reward at `time` (see file comment).
  Matrix<double> reward(double time, double gamma) const;

 private:
  // Index into sequence_[robot] of the first task not yet started at `time`.
  std::size_t next_index(std::size_t robot, double time) const;
  double previous_finish(std::size_t robot, std::size_t index) const;
  Point previous_position(std::size_t robot, std::size_t index) const;

  const ProblemInstance* instance_;
  std::vector<double> start_;
  std::vector<double> finish_;
  std::vector<double> commit_;
  std::vector<std::vector<std::size_t>> coalition_;
  std::vector<std::vector<std::size_t>> sequence_;
};

// One decision point at t = 0 and one per distinct task finish time; targets
// are left empty.
std::vector<DecisionPoint> extract_decision_points(const Schedule& schedule,
                                                   const ProblemInstance& instance);

// Masked reward O_k for a decision point of `schedule`.
Matrix<double> optimal_reward(const Schedule& schedule, const ProblemInstance& instance,
                              const DecisionPoint& point, double gamma);

// extract_decision_points with every target filled in.
std::vector<DecisionPoint> build_decision_tensors(const Schedule& schedule,
                                                  const ProblemInstance& instance,
                                                  double gamma);

struct ReplayReport {
  bool reproduced = false;
  double expert_makespan = 0.0;
  double replay_makespan = 0.0;
  std::size_t decisions = 0;
  std::size_t forced_decisions = 0;
  std::string diagnostic;
};

// Replays the expert rewards through match + simulate and compares makespans.
ReplayReport replay_schedule(const Schedule& schedule, const ProblemInstance& instance,
                             double gamma);
bool replay_check(const Schedule& schedule, const ProblemInstance& instance, double gamma);

}  // namespace mrta
