#pragma once

// Domain model for heterogeneous multi-robot task allocation with coalitions
// and precedence constraints. All times are continuous (double), distances are
// Euclidean, and feasibility comparisons use kTimeTolerance.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrta/matrix.hpp"

namespace mrta {

inline constexpr double kTimeTolerance = 1e-6;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InvalidInput : public Error {
 public:
  using Error::Error;
};
class InvalidSchedule : public Error {
 public:
  using Error::Error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Fixed-width bit vector over the global skill alphabet.
class SkillSet {
 public:
  static constexpr std::size_t kMaxSkills = 32;

  SkillSet() = default;
  explicit SkillSet(std::size_t width, std::uint32_t bits = 0);
  static SkillSet of(std::size_t width, std::initializer_list<std::size_t> skills);

  std::size_t width() const noexcept { return width_; }
  std::uint32_t bits() const noexcept { return bits_; }
  bool has(std::size_t skill) const noexcept { return (bits_ >> skill) & 1u; }
  void set(std::size_t skill);
  std::size_t count() const noexcept;
  bool empty() const noexcept { return bits_ == 0; }

  // Element-wise >= on the binary capability vectors.
  bool covers(const SkillSet& required) const noexcept {
    return (required.bits_ & ~bits_) == 0;
  }

  SkillSet operator|(const SkillSet& o) const { return SkillSet(width_, bits_ | o.bits_); }
  SkillSet operator&(const SkillSet& o) const { return SkillSet(width_, bits_ & o.bits_); }
  SkillSet without(const SkillSet& o) const { return SkillSet(width_, bits_ & ~o.bits_); }

  friend bool operator==(const SkillSet&, const SkillSet&) = default;

 private:
  std::size_t width_ = 0;
  std::uint32_t bits_ = 0;
};

struct RobotState {
  Point position;
  double remaining_duration = 0.0;
  bool available = true;
  SkillSet capabilities;
  friend bool operator==(const RobotState&, const RobotState&) = default;
};

// [ready, assigned, incomplete] status triple.
struct TaskStatus {
  bool ready = true;
  bool assigned = false;
  bool incomplete = true;

  bool schedulable() const noexcept { return ready && !assigned && incomplete; }
  friend bool operator==(const TaskStatus&, const TaskStatus&) = default;
};

struct TaskSpec {
  Point position;
  double duration = 0.0;
  SkillSet required;
  TaskStatus status;
  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

double travel_time(Point a, Point b, double speed);

// Immutable scenario. The idle pseudo-task is never stored here; matrices
// reserve column num_tasks() for it.
class ProblemInstance {
 public:
  ProblemInstance() = default;
  // Throws InvalidInput on any broken invariant: shape mismatch, cyclic
  // precedence, an uncoverable task, non-positive speed or durations.
  ProblemInstance(std::vector<RobotState> robots, std::vector<TaskSpec> tasks,
                  Matrix<std::uint8_t> precedence, std::vector<Point> start_positions,
                  std::vector<Point> end_positions, double speed, std::size_t skill_count,
                  std::optional<Matrix<std::uint8_t>> robot_graph = std::nullopt);

  std::size_t num_robots() const noexcept { return robots_.size(); }
  std::size_t num_tasks() const noexcept { return tasks_.size(); }
  std::size_t idle_column() const noexcept { return tasks_.size(); }
  std::size_t skill_count() const noexcept { return skill_count_; }
  double speed() const noexcept { return speed_; }

  const std::vector<RobotState>& robots() const noexcept { return robots_; }
  const std::vector<TaskSpec>& tasks() const noexcept { return tasks_; }
  const RobotState& robot(std::size_t i) const { return robots_.at(i); }
  const TaskSpec& task(std::size_t j) const { return tasks_.at(j); }
  const Matrix<std::uint8_t>& precedence() const noexcept { return precedence_; }
  // Reserved: carried for completeness, unused by the scheduling algorithms.
  const Matrix<std::uint8_t>& robot_graph() const noexcept { return robot_graph_; }
  const std::vector<Point>& start_positions() const noexcept { return start_; }
  const std::vector<Point>& end_positions() const noexcept { return end_; }

  const std::vector<std::size_t>& predecessors(std::size_t task) const {
    return preds_.at(task);
  }
  const std::vector<std::size_t>& successors(std::size_t task) const {
    return succs_.at(task);
  }
  const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }
  std::size_t precedence_edge_count() const noexcept;

  SkillSet team_capabilities() const;

  double travel(Point a, Point b) const { return travel_time(a, b, speed_); }

  friend bool operator==(const ProblemInstance& a, const ProblemInstance& b) {
    return a.robots_ == b.robots_ && a.tasks_ == b.tasks_ &&
           a.precedence_ == b.precedence_ && a.robot_graph_ == b.robot_graph_ &&
           a.start_ == b.start_ && a.end_ == b.end_ && a.speed_ == b.speed_ &&
           a.skill_count_ == b.skill_count_;
  }

 private:
  std::vector<RobotState> robots_;
  std::vector<TaskSpec> tasks_;
  Matrix<std::uint8_t> precedence_;
  Matrix<std::uint8_t> robot_graph_;
  std::vector<Point> start_;
  std::vector<Point> end_;
  double speed_ = 1.0;
  std::size_t skill_count_ = 0;

  std::vector<std::vector<std::size_t>> preds_;
  std::vector<std::vector<std::size_t>> succs_;
  std::vector<std::size_t> topo_;
};

// Topological order of a square adjacency matrix, or nullopt if it has a cycle.
std::optional<std::vector<std::size_t>> topological_sort(const Matrix<std::uint8_t>& adj);

inline constexpr std::size_t kIdleTask = std::numeric_limits<std::size_t>::max();

struct ScheduleEntry {
  std::size_t robot = 0;
  std::size_t task = kIdleTask;
  double start = 0.0;
  double end = 0.0;

  bool is_idle() const noexcept { return task == kIdleTask; }
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct Schedule {
  std::vector<ScheduleEntry> entries;
  double makespan = 0.0;
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Latest arrival of any robot at its end depot. Throws InvalidSchedule on
// entries that reference unknown robots or tasks.
double makespan(const Schedule& schedule, const ProblemInstance& instance);

// Canonical entry order: by start, then task, then robot.
void sort_entries(Schedule& schedule);

struct Violation {
  enum class Kind {
    kStructure,
    kDuration,
    kMissingTask,
    kCoverage,
    kSynchronization,
    kPrecedence,
    kOverlap,
    kTravel,
    kMakespan,
  };
  Kind kind;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate_schedule(const Schedule& schedule, const ProblemInstance& instance);

bool has_violation(const ValidationReport& report, Violation::Kind kind);
std::string to_string(Violation::Kind kind);

}  // namespace mrta
