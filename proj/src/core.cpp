#include "mrta/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace mrta {

SkillSet::SkillSet(std::size_t width, std::uint32_t bits) : width_(width), bits_(bits) {
  if (width > kMaxSkills) {
    throw InvalidInput("skill alphabet wider than " + std::to_string(kMaxSkills));
  }
  if (width < kMaxSkills && (bits >> width) != 0) {
    throw InvalidInput("skill bits outside alphabet width");
  }
}

SkillSet SkillSet::of(std::size_t width, std::initializer_list<std::size_t> skills) {
  SkillSet s(width);
  for (auto k : skills) s.set(k);
  return s;
}

void SkillSet::set(std::size_t skill) {
  if (skill >= width_) throw InvalidInput("skill index out of range");
  bits_ |= (1u << skill);
}

std::size_t SkillSet::count() const noexcept {
  return static_cast<std::size_t>(std::popcount(bits_));
}

double travel_time(Point a, Point b, double speed) {
  if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(b.x) ||
      !std::isfinite(b.y)) {
    throw InvalidInput("non-finite coordinate in travel_time");
  }
  if (!(speed > 0.0) || !std::isfinite(speed)) {
    throw InvalidInput("travel speed must be positive and finite");
  }
  return std::hypot(a.x - b.x, a.y - b.y) / speed;
}

std::optional<std::vector<std::size_t>> topological_sort(const Matrix<std::uint8_t>& adj) {
  const std::size_t n = adj.rows();
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (adj(i, j)) ++indeg[j];
  // Kahn's algorithm with smallest-index-first for a canonical order.
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && indeg[v] == 0) {
        pick = v;
        break;
      }
    }
    if (pick == n) return std::nullopt;
    done[pick] = true;
    order.push_back(pick);
    for (std::size_t j = 0; j < n; ++j)
      if (adj(pick, j)) --indeg[j];
  }
  return order;
}

ProblemInstance::ProblemInstance(std::vector<RobotState> robots, std::vector<TaskSpec> tasks,
                                 Matrix<std::uint8_t> precedence,
                                 std::vector<Point> start_positions,
                                 std::vector<Point> end_positions, double speed,
                                 std::size_t skill_count,
                                 std::optional<Matrix<std::uint8_t>> robot_graph)
    : robots_(std::move(robots)),
      tasks_(std::move(tasks)),
      precedence_(std::move(precedence)),
      start_(std::move(start_positions)),
      end_(std::move(end_positions)),
      speed_(speed),
      skill_count_(skill_count) {
  const std::size_t n = robots_.size();
  const std::size_t m = tasks_.size();
  if (!(speed_ > 0.0) || !std::isfinite(speed_)) throw InvalidInput("speed must be > 0");
  if (skill_count_ == 0 || skill_count_ > SkillSet::kMaxSkills)
    throw InvalidInput("skill_count must be in [1, 32]");
  if (start_.size() != n || end_.size() != n)
    throw InvalidInput("start/end depot count must equal robot count");
  if (precedence_.rows() != m || precedence_.cols() != m)
    throw InvalidInput("precedence matrix must be M x M");
  if (robot_graph) {
    if (robot_graph->rows() != n || robot_graph->cols() != n)
      throw InvalidInput("robot graph must be N x N");
    robot_graph_ = std::move(*robot_graph);
  } else {
    robot_graph_ = Matrix<std::uint8_t>(n, n, 1);
  }

  auto finite = [](Point p) { return std::isfinite(p.x) && std::isfinite(p.y); };
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = robots_[i];
    if (r.capabilities.width() != skill_count_)
      throw InvalidInput("robot " + std::to_string(i) + " skill width mismatch");
    if (!finite(r.position) || !finite(start_[i]) || !finite(end_[i]))
      throw InvalidInput("robot " + std::to_string(i) + " has non-finite position");
    if (!(r.remaining_duration >= 0.0) || !std::isfinite(r.remaining_duration))
      throw InvalidInput("robot " + std::to_string(i) + " remaining duration must be >= 0");
    if (r.available && r.remaining_duration != 0.0)
      throw InvalidInput("robot " + std::to_string(i) +
                         " is available but has remaining duration");
    if (r.position != start_[i])
      throw InvalidInput("robot " + std::to_string(i) + " position must equal its start depot");
  }
  for (std::size_t j = 0; j < m; ++j) {
    const auto& t = tasks_[j];
    if (t.required.width() != skill_count_)
      throw InvalidInput("task " + std::to_string(j) + " skill width mismatch");
    if (t.required.empty())
      throw InvalidInput("task " + std::to_string(j) + " requires no skills");
    if (!(t.duration > 0.0) || !std::isfinite(t.duration))
      throw InvalidInput("task " + std::to_string(j) + " duration must be > 0");
    if (!finite(t.position))
      throw InvalidInput("task " + std::to_string(j) + " has non-finite position");
    if (!t.status.incomplete && t.status.ready)
      throw InvalidInput("task " + std::to_string(j) + " is complete but marked ready");
    if (precedence_(j, j)) throw InvalidInput("task " + std::to_string(j) + " precedes itself");
  }

  auto order = topological_sort(precedence_);
  if (!order) throw InvalidInput("precedence graph contains a cycle");
  topo_ = std::move(*order);

  const SkillSet team = team_capabilities();
  for (std::size_t j = 0; j < m; ++j) {
    if (!team.covers(tasks_[j].required))
      throw InvalidInput("task " + std::to_string(j) + " cannot be covered by the team");
  }

  preds_.assign(m, {});
  succs_.assign(m, {});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (precedence_(i, j)) {
        preds_[j].push_back(i);
        succs_[i].push_back(j);
      }
}

std::size_t ProblemInstance::precedence_edge_count() const noexcept {
  std::size_t c = 0;
  for (auto v : precedence_.values()) c += v ? 1 : 0;
  return c;
}

SkillSet ProblemInstance::team_capabilities() const {
  SkillSet team(skill_count_);
  for (const auto& r : robots_) team = team | r.capabilities;
  return team;
}

namespace {

struct RobotFinish {
  double time;
  Point position;
};

// Last task entry (by end time) of every robot, idle entries only extend time.
std::vector<RobotFinish> robot_finishes(const Schedule& schedule,
                                        const ProblemInstance& instance) {
  const std::size_t n = instance.num_robots();
  std::vector<RobotFinish> fin(n);
  std::vector<double> last_task_end(n, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    fin[i] = {instance.robot(i).remaining_duration, instance.start_positions()[i]};
  }
  for (const auto& e : schedule.entries) {
    if (e.robot >= n) {
      throw InvalidSchedule("entry references unknown robot " + std::to_string(e.robot));
    }
    if (!e.is_idle() && e.task >= instance.num_tasks()) {
      throw InvalidSchedule("entry references unknown task " + std::to_string(e.task));
    }
    fin[e.robot].time = std::max(fin[e.robot].time, e.end);
    if (!e.is_idle() && e.end >= last_task_end[e.robot]) {
      last_task_end[e.robot] = e.end;
      fin[e.robot].position = instance.task(e.task).position;
    }
  }
  return fin;
}

std::string fmt_time(double t) {
  std::ostringstream os;
  os.precision(10);
  os << t;
  return os.str();
}

}  // namespace

double makespan(const Schedule& schedule, const ProblemInstance& instance) {
  const auto fin = robot_finishes(schedule, instance);
  double best = 0.0;
  for (std::size_t i = 0; i < fin.size(); ++i) {
    best = std::max(best, fin[i].time + instance.travel(fin[i].position,
                                                       instance.end_positions()[i]));
  }
  return best;
}

void sort_entries(Schedule& schedule) {
  std::sort(schedule.entries.begin(), schedule.entries.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              if (a.start != b.start) return a.start < b.start;
              if (a.task != b.task) return a.task < b.task;
              return a.robot < b.robot;
            });
}

bool has_violation(const ValidationReport& report, Violation::Kind kind) {
  return std::any_of(report.begin(), report.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    using enum Violation::Kind;
    case kStructure: return "structure";
    case kDuration: return "duration";
    case kMissingTask: return "missing-task";
    case kCoverage: return "coverage";
    case kSynchronization: return "synchronization";
    case kPrecedence: return "precedence";
    case kOverlap: return "overlap";
    case kTravel: return "travel";
    case kMakespan: return "makespan";
  }
  return "unknown";
}

ValidationReport validate_schedule(const Schedule& schedule, const ProblemInstance& instance) {
  using K = Violation::Kind;
  ValidationReport report;
  const std::size_t n = instance.num_robots();
  const std::size_t m = instance.num_tasks();
  const double tol = kTimeTolerance;
  auto add = [&report](K kind, std::string msg) { report.push_back({kind, std::move(msg)}); };

  bool structural = true;
  for (std::size_t k = 0; k < schedule.entries.size(); ++k) {
    const auto& e = schedule.entries[k];
    const std::string tag = "entry " + std::to_string(k);
    if (e.robot >= n) {
      add(K::kStructure, tag + " references unknown robot " + std::to_string(e.robot));
      structural = false;
    }
    if (!e.is_idle() && e.task >= m) {
      add(K::kStructure, tag + " references unknown task " + std::to_string(e.task));
      structural = false;
    }
    if (!std::isfinite(e.start) || !std::isfinite(e.end)) {
      add(K::kStructure, tag + " has non-finite times");
      structural = false;
      continue;
    }
    if (e.end < e.start - tol) add(K::kStructure, tag + " ends before it starts");
    if (!e.is_idle() && e.task < m &&
        std::abs((e.end - e.start) - instance.task(e.task).duration) > tol) {
      add(K::kDuration, tag + " duration differs from task " + std::to_string(e.task));
    }
  }
  if (!structural) return report;

  // Coalitions.
  std::vector<std::vector<const ScheduleEntry*>> by_task(m);
  for (const auto& e : schedule.entries)
    if (!e.is_idle()) by_task[e.task].push_back(&e);

  std::vector<double> start(m, 0.0), finish(m, 0.0);
  std::vector<bool> present(m, false);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& members = by_task[j];
    if (members.empty()) {
      add(K::kMissingTask, "task " + std::to_string(j) + " is never executed");
      continue;
    }
    present[j] = true;
    start[j] = members.front()->start;
    finish[j] = members.front()->end;
    SkillSet team(instance.skill_count());
    std::vector<bool> seen(n, false);
    for (const auto* e : members) {
      if (seen[e->robot]) {
        add(K::kStructure, "robot " + std::to_string(e->robot) + " listed twice on task " +
                               std::to_string(j));
      }
      seen[e->robot] = true;
      team = team | instance.robot(e->robot).capabilities;
      if (std::abs(e->start - start[j]) > tol || std::abs(e->end - finish[j]) > tol) {
        add(K::kSynchronization, "coalition members of task " + std::to_string(j) +
                                     " have different start or end times");
      }
    }
    if (!team.covers(instance.task(j).required)) {
      add(K::kCoverage, "coalition of task " + std::to_string(j) + " lacks required skills");
    }
  }

  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (instance.precedence()(i, j) && present[i] && present[j] &&
          finish[i] > start[j] + tol) {
        add(K::kPrecedence, "task " + std::to_string(j) + " starts at " +
                                fmt_time(start[j]) + " before predecessor " +
                                std::to_string(i) + " ends at " + fmt_time(finish[i]));
      }

  // Per-robot timelines.
  std::vector<std::vector<const ScheduleEntry*>> by_robot(n);
  for (const auto& e : schedule.entries) by_robot[e.robot].push_back(&e);
  for (std::size_t r = 0; r < n; ++r) {
    auto& line = by_robot[r];
    std::stable_sort(line.begin(), line.end(),
                     [](const ScheduleEntry* a, const ScheduleEntry* b) {
                       return a->start < b->start;
                     });
    double free_at = instance.robot(r).remaining_duration;
    Point at = instance.start_positions()[r];
    double busy_until = free_at;
    for (const auto* e : line) {
      if (e->start < busy_until - tol) {
        add(K::kOverlap, "robot " + std::to_string(r) + " has overlapping entries at " +
                             fmt_time(e->start));
      }
      busy_until = std::max(busy_until, e->end);
      if (e->is_idle()) continue;
      const Point dest = instance.task(e->task).position;
      const double earliest = free_at + instance.travel(at, dest);
      if (e->start < earliest - tol) {
        add(K::kTravel, "robot " + std::to_string(r) + " cannot reach task " +
                            std::to_string(e->task) + " by " + fmt_time(e->start) +
                            " (earliest " + fmt_time(earliest) + ")");
      }
      free_at = e->end;
      at = dest;
    }
  }

  const double recomputed = makespan(schedule, instance);
  if (std::abs(recomputed - schedule.makespan) > tol) {
    add(K::kMakespan, "stored makespan " + fmt_time(schedule.makespan) +
                          " differs from recomputed " + fmt_time(recomputed));
  }
  return report;
}

}  // namespace mrta
