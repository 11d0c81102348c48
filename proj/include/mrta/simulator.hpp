#pragma once

// Discrete-event execution of an instance under an assignment policy.
//
// A decision step happens at t = 0 and at every later event: a task finishing,
// a pre-moving robot arriving, a busy robot being released or a task being
// announced. The policy sees every available robot (free or pre-moving) and
// every task status. Rewards from a reward policy are matched, pruned and used
// for pre-moving; a direct policy hands back the assignment itself. A
// committed coalition travels to the task, starts once the last member is
// there and stays locked until the task finishes.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mrta/batch.hpp"
#include "mrta/core.hpp"
#include "mrta/matching.hpp"

namespace mrta {

class SimulationError : public Error {
 public:
  using Error::Error;
};

enum class PolicyFlavor { kReward, kDirect };

// What a policy sees at a decision step.
struct WorldState {
  double time = 0.0;
  std::size_t decision_index = 0;
  const ProblemInstance* instance = nullptr;   // the scenario as given
  std::vector<RobotState> robots;
  std::vector<TaskSpec> tasks;                 // includes announced tasks
  const Matrix<std::uint8_t>* precedence = nullptr;  // tasks.size() squared
  double speed = 1.0;
};

// Policies are immutable; any randomness is a pure function of the state, so
// one policy object can serve concurrent rollouts.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyFlavor flavor() const = 0;
  virtual std::string name() const = 0;
  // N x (M+1) rewards (reward flavor).
  virtual RewardMatrix rewards(const WorldState& state) const;
  // N x (M+1) assignment (direct flavor).
  virtual AssignmentMatrix assign(const WorldState& state) const;
};

struct TaskAnnouncement {
  double time = 0.0;
  TaskSpec task;
  // Indices of existing (or earlier announced) tasks that must finish first.
  std::vector<std::size_t> predecessors;
};

struct SimulationOptions {
  // Decisions in a row that neither commit nor see any task running before
  // the stall handling kicks in.
  std::size_t stall_limit = 64;
  std::vector<TaskAnnouncement> announcements;
};

struct SimulationResult {
  Schedule schedule;
  // Scenario the schedule refers to: the input plus announced tasks.
  ProblemInstance instance;
  std::size_t decisions = 0;
  // Stalls of a reward policy resolved by matching without the idle option.
  std::size_t forced_decisions = 0;
  std::vector<double> decision_ms;
  double total_ms = 0.0;
};

// Runs until every task has finished. Throws SimulationError when a direct
// policy returns an infeasible assignment or cannot make progress.
SimulationResult simulate(const ProblemInstance& instance, const Policy& policy,
                          const SimulationOptions& options = {});

struct RolloutConfig {
  // Noise standard deviation as a fraction of the reward spread (max - min)
  // of each decision's matrix.
  double sigma = 0.05;
  std::size_t n_rollouts = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RolloutResult {
  SimulationResult best;
  std::size_t best_rollout = 0;
  std::vector<double> makespans;
  double total_ms = 0.0;
};

// Best of n_rollouts simulations, rollout r perturbing every reward matrix
// with the noise stream of index r (rollout 0 is noise free). Ties go to the
// lowest rollout index.
RolloutResult sampled_rollouts(const ProblemInstance& instance, const Policy& base_policy,
                               const RolloutConfig& config,
                               Execution execution = Execution::kSerial,
                               const SimulationOptions& options = {});

}  // namespace mrta
