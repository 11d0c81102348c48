#include "mrta/generator.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mrta/rng.hpp"

namespace mrta {

namespace {

constexpr std::size_t kCoverageRetries = 1000;

RandomStream stream(std::uint64_t seed, GeneratorStream id) {
  return RandomStream(seed, static_cast<std::uint64_t>(id));
}

SkillSet draw_skills(RandomStream& rng, std::size_t width, std::size_t lo, std::size_t hi) {
  lo = std::min(lo, width);
  hi = std::min(hi, width);
  const auto k = static_cast<std::size_t>(rng.between(lo, hi));
  std::vector<std::size_t> pool(width);
  std::iota(pool.begin(), pool.end(), 0);
  SkillSet s(width);
  for (std::size_t i = 0; i < k; ++i) {
    const auto pick = i + static_cast<std::size_t>(rng.below(width - i));
    std::swap(pool[i], pool[pick]);
    s.set(pool[i]);
  }
  return s;
}

}  // namespace

void GeneratorConfig::validate() const {
  if (n_robots == 0) throw InvalidInput("generator needs at least one robot");
  if (n_skills == 0 || n_skills > SkillSet::kMaxSkills)
    throw InvalidInput("n_skills must be in [1, 32]");
  if (!(area_max > area_min)) throw InvalidInput("area range is empty");
  if (!(duration_min > 0.0) || duration_max < duration_min)
    throw InvalidInput("duration range must be positive and non-empty");
  if (robot_skills_min == 0 || robot_skills_max < robot_skills_min)
    throw InvalidInput("robot skill count range is empty");
  if (task_skills_min == 0 || task_skills_max < task_skills_min)
    throw InvalidInput("task skill count range is empty");
  if (robot_skills_max > n_skills || task_skills_max > n_skills)
    throw InvalidInput("skill counts per robot or task cannot exceed n_skills");
  if (!(speed > 0.0)) throw InvalidInput("speed must be > 0");
}

std::size_t GeneratorConfig::achievable_precedence() const noexcept {
  const std::size_t max_edges = n_tasks < 2 ? 0 : n_tasks * (n_tasks - 1) / 2;
  return std::min(n_precedence, max_edges);
}

ProblemInstance generate_instance(const GeneratorConfig& config, std::uint64_t seed) {
  config.validate();
  const std::size_t n = config.n_robots;
  const std::size_t m = config.n_tasks;
  const std::size_t width = config.n_skills;

  auto pos_rng = stream(seed, GeneratorStream::kTaskPositions);
  auto depot_rng = stream(seed, GeneratorStream::kDepots);
  auto dur_rng = stream(seed, GeneratorStream::kDurations);
  auto rskill_rng = stream(seed, GeneratorStream::kRobotSkills);
  auto tskill_rng = stream(seed, GeneratorStream::kTaskSkills);
  auto prec_rng = stream(seed, GeneratorStream::kPrecedence);

  auto point = [&](RandomStream& rng) {
    const double x = rng.uniform(config.area_min, config.area_max);
    const double y = rng.uniform(config.area_min, config.area_max);
    return Point{x, y};
  };

  std::vector<Point> starts(n), ends(n);
  std::vector<RobotState> robots(n);
  SkillSet team(width);
  for (std::size_t i = 0; i < n; ++i) {
    starts[i] = point(depot_rng);
    ends[i] = point(depot_rng);
    robots[i].position = starts[i];
    robots[i].capabilities =
        draw_skills(rskill_rng, width, config.robot_skills_min, config.robot_skills_max);
    team = team | robots[i].capabilities;
  }

  std::vector<TaskSpec> tasks(m);
  for (std::size_t j = 0; j < m; ++j) {
    tasks[j].position = point(pos_rng);
    tasks[j].duration = dur_rng.uniform(config.duration_min, config.duration_max);
    std::size_t tries = 0;
    do {
      if (tries++ == kCoverageRetries) {
        throw GenerationError("task " + std::to_string(j) +
                              ": no coverable skill requirement after " +
                              std::to_string(kCoverageRetries) + " draws");
      }
      tasks[j].required =
          draw_skills(tskill_rng, width, config.task_skills_min, config.task_skills_max);
    } while (!team.covers(tasks[j].required));
  }

  // Edges only go forward in a random permutation, so the graph stays acyclic.
  Matrix<std::uint8_t> precedence(m, m, 0);
  const std::size_t target = config.achievable_precedence();
  if (target > 0) {
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = m - 1; i > 0; --i) {
      std::swap(perm[i], perm[static_cast<std::size_t>(prec_rng.below(i + 1))]);
    }
    std::size_t placed = 0;
    while (placed < target) {
      auto a = static_cast<std::size_t>(prec_rng.below(m));
      auto b = static_cast<std::size_t>(prec_rng.below(m));
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      auto& cell = precedence(perm[a], perm[b]);
      if (cell) continue;
      cell = 1;
      ++placed;
    }
  }

  // Tasks without predecessors start out ready.
  for (std::size_t j = 0; j < m; ++j) {
    bool has_pred = false;
    for (std::size_t i = 0; i < m; ++i) has_pred = has_pred || precedence(i, j);
    tasks[j].status = TaskStatus{!has_pred, false, true};
  }

  return ProblemInstance(std::move(robots), std::move(tasks), std::move(precedence),
                         std::move(starts), std::move(ends), config.speed, width);
}

}  // namespace mrta
