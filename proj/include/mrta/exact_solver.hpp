#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrta/core.hpp"

namespace mrta {

enum class SolverStatus { kOptimal, kFeasibleTimeout, kInfeasible };

std::string to_string(SolverStatus status);
SolverStatus solver_status_from_string(const std::string& text);

struct IncumbentUpdate {
  std::uint64_t node = 0;
  double makespan = 0.0;
};

struct SolverResult {
  Schedule schedule;
  SolverStatus status = SolverStatus::kInfeasible;
  std::uint64_t explored_nodes = 0;
  double wall_time = 0.0;
  // Every improvement of the incumbent, in discovery order.
  std::vector<IncumbentUpdate> incumbents;
};

// Robot subsets (bit masks) that cover the task and lose coverage when any
// member is dropped, ordered lexicographically by their sorted member lists.
std::vector<std::uint32_t> minimal_covering_coalitions(const ProblemInstance& instance,
                                                       std::size_t task);

// Makespan-optimal schedule by depth-first branch-and-bound over
// chronologically ordered task starts. Each branch picks the next task to
// start and a minimal covering coalition for it; the task starts as soon as
// every member has arrived and all predecessors have finished. Intended for
// N <= 4 robots and M <= 10 tasks. Among equal-makespan schedules the first
// in (task index, coalition) branching order is returned.
SolverResult solve_optimal(const ProblemInstance& instance, double time_limit_seconds);

// Exhaustive reference: every precedence-consistent task order combined with
// every covering coalition per task, each robot starting its tasks as early
// as possible. Refuses instances with more than 3 robots or 4 tasks.
Schedule brute_force_oracle(const ProblemInstance& instance);

inline constexpr std::size_t kOracleMaxRobots = 3;
inline constexpr std::size_t kOracleMaxTasks = 4;

}  // namespace mrta
