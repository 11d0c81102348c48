#pragma once

#include <cstddef>
#include <cstdint>

#include "mrta/core.hpp"

namespace mrta {

class GenerationError : public Error {
 public:
  using Error::Error;
};

// Randomized scenario parameters. Defaults reproduce the small training
// distribution: 3 robots, 8 tasks, 3 skills, [0,100]^2, durations in [50,100].
struct GeneratorConfig {
  std::size_t n_robots = 3;
  std::size_t n_tasks = 8;
  std::size_t n_skills = 3;
  std::size_t n_precedence = 3;
  double area_min = 0.0;
  double area_max = 100.0;
  double duration_min = 50.0;
  double duration_max = 100.0;
  std::size_t robot_skills_min = 1;
  std::size_t robot_skills_max = 3;
  std::size_t task_skills_min = 1;
  std::size_t task_skills_max = 3;
  double speed = 1.0;

  // Throws InvalidInput on empty ranges or zero counts.
  void validate() const;
  // Edges actually produced: n_precedence capped at M(M-1)/2.
  std::size_t achievable_precedence() const noexcept;

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

// Independent random streams, one per sampled field.
enum class GeneratorStream : std::uint64_t {
  kTaskPositions = 1,
  kDepots = 2,
  kDurations = 3,
  kRobotSkills = 4,
  kTaskSkills = 5,
  kPrecedence = 6,
};

// Pure function of (config, seed): identical inputs give bit-identical output.
ProblemInstance generate_instance(const GeneratorConfig& config, std::uint64_t seed);

}  // namespace mrta
