#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mrta/rewards.hpp"
#include "mrta/simulator.hpp"

namespace mrta {

// Direct baseline. Repeatedly takes the (available robot, schedulable task)
// pair whose robot removes the most still-uncovered skills of the task,
// breaking ties by shorter travel time, then lower robot index, then lower
// task index. The chosen task is then filled the same way until covered; if
// it cannot be covered its partial coalition is released and the task is
// skipped for this decision.
class GreedyPolicy final : public Policy {
 public:
  PolicyFlavor flavor() const override { return PolicyFlavor::kDirect; }
  std::string name() const override { return "greedy"; }
  AssignmentMatrix assign(const WorldState& state) const override;
};

// Unmasked discounted rewards of an expert schedule, evaluated at the current
// simulation time. Keeps its own copy of the scenario.
class ExpertReplayPolicy final : public Policy {
 public:
  ExpertReplayPolicy(const Schedule& schedule, const ProblemInstance& instance,
                     double gamma = kDefaultGamma);
  PolicyFlavor flavor() const override { return PolicyFlavor::kReward; }
  std::string name() const override { return "expert-replay"; }
  RewardMatrix rewards(const WorldState& state) const override;

 private:
  std::shared_ptr<const ProblemInstance> instance_;
  ExpertTimeline timeline_;
  double gamma_;
};

// Independent uniform [0, 1) entries; the stream depends on (seed, decision index).
class RandomRewardPolicy final : public Policy {
 public:
  explicit RandomRewardPolicy(std::uint64_t seed) : seed_(seed) {}
  PolicyFlavor flavor() const override { return PolicyFlavor::kReward; }
  std::string name() const override { return "random"; }
  RewardMatrix rewards(const WorldState& state) const override;

 private:
  std::uint64_t seed_;
};

class ZeroRewardPolicy final : public Policy {
 public:
  PolicyFlavor flavor() const override { return PolicyFlavor::kReward; }
  std::string name() const override { return "zero"; }
  RewardMatrix rewards(const WorldState& state) const override;
};

// Precomputed matrices, one per decision step. Steps beyond the list reuse
// the last matrix.
class FileRewardPolicy final : public Policy {
 public:
  explicit FileRewardPolicy(std::vector<RewardMatrix> matrices);
  PolicyFlavor flavor() const override { return PolicyFlavor::kReward; }
  std::string name() const override { return "file"; }
  RewardMatrix rewards(const WorldState& state) const override;

 private:
  std::vector<RewardMatrix> matrices_;
};

// Adds N(0, (sigma * (max R - min R))^2) noise to every entry of the base
// policy's matrix. The noise stream depends on (seed, rollout, decision index);
// rollout 0 returns the base matrix unchanged.
class NoisyRewardPolicy final : public Policy {
 public:
  NoisyRewardPolicy(const Policy& base, double sigma, std::uint64_t seed, std::size_t rollout);
  PolicyFlavor flavor() const override { return PolicyFlavor::kReward; }
  std::string name() const override { return base_->name() + "+noise"; }
  RewardMatrix rewards(const WorldState& state) const override;

 private:
  const Policy* base_;
  double sigma_;
  std::uint64_t seed_;
  std::size_t rollout_;
};

}  // namespace mrta
