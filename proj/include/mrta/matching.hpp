#pragma once

// Constrained assignment layer. Given a reward matrix R (N x (M+1), last
// column = idle) choose a binary A maximizing sum(A .* R) such that
//   * every robot takes at most one column,
//   * every task with at least one robot is covered by the union of their skills,
//   * only available robots and schedulable tasks are used.
// Several robots may share a task; redundant members are removed afterwards by
// prune_redundant.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrta/core.hpp"

namespace mrta {

using RewardMatrix = Matrix<double>;
using AssignmentMatrix = Matrix<std::uint8_t>;

struct MatchOptions {
  // When false the idle column is never selected.
  bool allow_idle = true;
};

struct MatchStats {
  std::uint64_t nodes = 0;
  double objective = 0.0;
  double root_bound = 0.0;
};

// Exact maximizer. Among maximizers (compared with a relative tolerance of
// 1e-12 of the largest reward magnitude) the one minimizing
// sum over selected (i, j) of (i * (M+1) + j + 1) is returned; remaining ties
// go to the assignment whose per-robot choices, read in robot order, are
// lexicographically smallest (no choice < task 0 < ... < idle). The result is
// fully deterministic and never contains a zero-reward robot that could be
// left out. Throws InvalidInput on shape mismatch or non-finite rewards in
// rows of available robots.
AssignmentMatrix match(const RewardMatrix& reward, const std::vector<RobotState>& robots,
                       const std::vector<TaskSpec>& tasks, const MatchOptions& options = {},
                       MatchStats* stats = nullptr);

double assignment_value(const AssignmentMatrix& assignment, const RewardMatrix& reward);

// First violated assignment constraint, described in words, or nullopt.
std::optional<std::string> find_assignment_violation(const AssignmentMatrix& assignment,
                                                     const std::vector<RobotState>& robots,
                                                     const std::vector<TaskSpec>& tasks);

// For each task, repeatedly drops the member farthest from the task (higher
// robot index first on equal travel time) whose removal keeps the task covered.
AssignmentMatrix prune_redundant(const AssignmentMatrix& assignment,
                                 const std::vector<RobotState>& robots,
                                 const std::vector<TaskSpec>& tasks, double speed);

// Task column with the highest reward for `robot`, idle column excluded, ties
// to the lowest index. Non-finite entries are skipped; throws InvalidInput if
// no task entry is finite.
std::size_t premove_target(const RewardMatrix& reward, std::size_t robot);

}  // namespace mrta
