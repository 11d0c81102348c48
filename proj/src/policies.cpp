#include "mrta/policies.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "mrta/rng.hpp"

namespace mrta {

AssignmentMatrix GreedyPolicy::assign(const WorldState& state) const {
  const std::size_t n = state.robots.size();
  const std::size_t m = state.tasks.size();
  AssignmentMatrix out(n, m + 1, 0);
  std::vector<bool> taken(n, false);
  std::vector<bool> closed(m, false);
  for (std::size_t j = 0; j < m; ++j) closed[j] = !state.tasks[j].status.schedulable();

  auto travel = [&](std::size_t i, std::size_t j) {
    return travel_time(state.robots[i].position, state.tasks[j].position, state.speed);
  };
  auto gain = [&](std::size_t i, std::uint32_t uncovered) {
    return std::popcount(state.robots[i].capabilities.bits() & uncovered);
  };
  struct Pick {
    int gain = 0;
    double travel = std::numeric_limits<double>::infinity();
    std::size_t robot = 0;
    std::size_t task = 0;
  };
  // More skills covered, then shorter travel, lower robot index, lower task index.
  auto prefer = [](const Pick& c, const Pick& best) {
    if (c.gain != best.gain) return c.gain > best.gain;
    if (c.travel != best.travel) return c.travel < best.travel;
    if (c.robot != best.robot) return c.robot < best.robot;
    return c.task < best.task;
  };

  for (;;) {
    Pick best;
    for (std::size_t j = 0; j < m; ++j) {
      if (closed[j]) continue;
      const std::uint32_t need = state.tasks[j].required.bits();
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || !state.robots[i].available) continue;
        const Pick c{gain(i, need), travel(i, j), i, j};
        if (c.gain > 0 && prefer(c, best)) best = c;
      }
    }
    if (best.gain == 0) break;

    const std::size_t j = best.task;
    std::vector<std::size_t> coalition{best.robot};
    taken[best.robot] = true;
    std::uint32_t uncovered =
        state.tasks[j].required.bits() & ~state.robots[best.robot].capabilities.bits();
    while (uncovered != 0) {
      Pick next;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || !state.robots[i].available) continue;
        const Pick c{gain(i, uncovered), travel(i, j), i, j};
        if (c.gain > 0 && prefer(c, next)) next = c;
      }
      if (next.gain == 0) break;
      coalition.push_back(next.robot);
      taken[next.robot] = true;
      uncovered &= ~state.robots[next.robot].capabilities.bits();
    }
    closed[j] = true;
    if (uncovered != 0) {
      for (std::size_t i : coalition) taken[i] = false;
      continue;
    }
    for (std::size_t i : coalition) out(i, j) = 1;
  }
  return out;
}

ExpertReplayPolicy::ExpertReplayPolicy(const Schedule& schedule, const ProblemInstance& instance,
                                       double gamma)
    : instance_(std::make_shared<const ProblemInstance>(instance)),
      timeline_(schedule, *instance_),
      gamma_(gamma) {
  check_gamma(gamma);
}

RewardMatrix ExpertReplayPolicy::rewards(const WorldState& state) const {
  if (state.tasks.size() != instance_->num_tasks() ||
      state.robots.size() != instance_->num_robots()) {
    throw InvalidInput("expert replay cannot follow a scenario with a different task set");
  }
  return timeline_.reward(state.time, gamma_);
}

RewardMatrix RandomRewardPolicy::rewards(const WorldState& state) const {
  RandomStream rng(seed_, state.decision_index);
  RewardMatrix r(state.robots.size(), state.tasks.size() + 1);
  for (double& v : r.values()) v = rng.uniform();
  return r;
}

RewardMatrix ZeroRewardPolicy::rewards(const WorldState& state) const {
  return RewardMatrix(state.robots.size(), state.tasks.size() + 1, 0.0);
}

FileRewardPolicy::FileRewardPolicy(std::vector<RewardMatrix> matrices)
    : matrices_(std::move(matrices)) {
  if (matrices_.empty()) throw InvalidInput("file reward policy needs at least one matrix");
}

RewardMatrix FileRewardPolicy::rewards(const WorldState& state) const {
  return matrices_[std::min(state.decision_index, matrices_.size() - 1)];
}

NoisyRewardPolicy::NoisyRewardPolicy(const Policy& base, double sigma, std::uint64_t seed,
                                     std::size_t rollout)
    : base_(&base), sigma_(sigma), seed_(seed), rollout_(rollout) {
  if (base.flavor() != PolicyFlavor::kReward) {
    throw InvalidInput("noise can only be added to a reward-based policy");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidInput("sigma must be >= 0");
}

RewardMatrix NoisyRewardPolicy::rewards(const WorldState& state) const {
  RewardMatrix r = base_->rewards(state);
  if (rollout_ == 0 || sigma_ == 0.0 || r.empty()) return r;
  const auto [lo, hi] = std::minmax_element(r.values().begin(), r.values().end());
  const double scale = sigma_ * (*hi - *lo);
  RandomStream rng(splitmix64(seed_ ^ splitmix64(rollout_)), state.decision_index);
  for (double& v : r.values()) v += scale * rng.normal();
  return r;
}

}  // namespace mrta
