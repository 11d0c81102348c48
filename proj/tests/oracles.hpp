#pragma once

// Reference computations used by the tests. They avoid the library's own
// helpers (SkillSet::covers, travel_time and friends) in favour of plain std
// containers and formulas.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mrta/core.hpp"
#include "mrta/matching.hpp"

namespace oracle {

inline double dist(mrta::Point a, mrta::Point b, double speed) {
  return std::hypot(a.x - b.x, a.y - b.y) / speed;
}

inline std::set<std::size_t> skills(const mrta::SkillSet& s) {
  std::set<std::size_t> out;
  for (std::size_t k = 0; k < 32; ++k)
    if ((s.bits() >> k) & 1u) out.insert(k);
  return out;
}

inline bool includes_all(const std::set<std::size_t>& have, const std::set<std::size_t>& need) {
  return std::includes(have.begin(), have.end(), need.begin(), need.end());
}

// Makespan straight from the definition: per robot, the entry with the latest
// end time, plus the trip from that task to the end depot.
inline double makespan(const mrta::Schedule& s, const mrta::ProblemInstance& inst) {
  double worst = 0.0;
  for (std::size_t r = 0; r < inst.num_robots(); ++r) {
    double t = inst.robot(r).remaining_duration;
    mrta::Point at = inst.start_positions()[r];
    const mrta::ScheduleEntry* last = nullptr;
    for (const auto& e : s.entries)
      if (e.robot == r && !e.is_idle() && (!last || e.end > last->end)) last = &e;
    if (last) {
      t = last->end;
      at = inst.task(last->task).position;
    }
    worst = std::max(worst, t + dist(at, inst.end_positions()[r], inst.speed()));
  }
  return worst;
}

// True iff the schedule satisfies every schedule constraint.
inline bool feasible(const mrta::Schedule& s, const mrta::ProblemInstance& inst,
                     std::string* why = nullptr) {
  const double tol = 1e-6;
  auto no = [&](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  const std::size_t n = inst.num_robots(), m = inst.num_tasks();
  std::map<std::size_t, std::vector<mrta::ScheduleEntry>> per_task;
  std::map<std::size_t, std::vector<mrta::ScheduleEntry>> per_robot;
  for (const auto& e : s.entries) {
    if (e.robot >= n) return no("bad robot");
    if (!std::isfinite(e.start) || !std::isfinite(e.end) || e.end < e.start - tol)
      return no("bad times");
    if (e.is_idle()) {
      per_robot[e.robot].push_back(e);
      continue;
    }
    if (e.task >= m) return no("bad task");
    if (std::fabs(e.end - e.start - inst.task(e.task).duration) > tol) return no("duration");
    per_task[e.task].push_back(e);
    per_robot[e.robot].push_back(e);
  }
  std::vector<double> st(m), fin(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto it = per_task.find(j);
    if (it == per_task.end()) return no("task missing");
    std::set<std::size_t> robots, have;
    for (const auto& e : it->second) {
      if (!robots.insert(e.robot).second) return no("duplicate member");
      for (auto k : skills(inst.robot(e.robot).capabilities)) have.insert(k);
      if (std::fabs(e.start - it->second[0].start) > tol ||
          std::fabs(e.end - it->second[0].end) > tol)
        return no("sync");
    }
    if (!includes_all(have, skills(inst.task(j).required))) return no("coverage");
    st[j] = it->second[0].start;
    fin[j] = it->second[0].end;
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (inst.precedence()(a, b) && fin[a] > st[b] + tol) return no("precedence");
  for (auto& [r, line] : per_robot) {
    std::sort(line.begin(), line.end(),
              [](const auto& x, const auto& y) { return x.start < y.start; });
    double t = inst.robot(r).remaining_duration;
    double busy = t;
    mrta::Point at = inst.start_positions()[r];
    for (const auto& e : line) {
      if (e.start < busy - tol) return no("overlap");
      busy = std::max(busy, e.end);
      if (e.is_idle()) continue;
      const mrta::Point to = inst.task(e.task).position;
      if (e.start < t + dist(at, to, inst.speed()) - tol) return no("travel");
      t = e.end;
      at = to;
    }
  }
  if (std::fabs(oracle::makespan(s, inst) - s.makespan) > tol) return no("makespan");
  return true;
}

struct MatchOptimum {
  double value = -std::numeric_limits<double>::infinity();
  std::uint64_t penalty = std::numeric_limits<std::uint64_t>::max();
  mrta::AssignmentMatrix best;
};

// Exhaustive search over every robot choosing nothing, idle, or one task
// (tasks of any status, checked afterwards), so (M+2)^N assignments.
inline MatchOptimum brute_force_match(const mrta::RewardMatrix& r,
                                      const std::vector<mrta::RobotState>& robots,
                                      const std::vector<mrta::TaskSpec>& tasks,
                                      bool allow_idle = true) {
  const std::size_t n = robots.size(), m = tasks.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (robots[i].available)
      for (std::size_t j = 0; j <= m; ++j) scale = std::max(scale, std::fabs(r(i, j)));
  const double tol = 1e-12 * scale;
  MatchOptimum opt;
  std::vector<std::size_t> pick(n, 0);  // 0 = nothing, 1..m = task, m+1 = idle
  for (;;) {
    bool ok = true;
    std::map<std::size_t, std::set<std::size_t>> have;
    double value = 0.0;
    std::uint64_t pen = 0;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (pick[i] == 0) continue;
      if (!robots[i].available) ok = false;
      const std::size_t col = pick[i] == m + 1 ? m : pick[i] - 1;
      if (col == m && !allow_idle) ok = false;
      if (col < m) {
        const auto& st = tasks[col].status;
        if (!(st.ready && !st.assigned && st.incomplete)) ok = false;
        for (auto k : skills(robots[i].capabilities)) have[col].insert(k);
        have[col];
      }
      value += r(i, col);
      pen += i * (m + 1) + col + 1;
    }
    for (auto& [j, h] : have)
      if (!includes_all(h, skills(tasks[j].required))) ok = false;
    // pick[] is enumerated with robot 0 varying fastest, so on a full tie the
    // later candidate wins only if its choices compare smaller in robot order.
    bool lex_smaller = false;
    if (ok && value >= opt.value - tol && value <= opt.value + tol && pen == opt.penalty) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t mine = pick[i] == 0 ? 0 : (pick[i] == m + 1 ? m + 1 : pick[i]);
        std::size_t theirs = 0;
        for (std::size_t j = 0; j <= m; ++j)
          if (opt.best(i, j)) theirs = j + 1;
        if (mine != theirs) {
          lex_smaller = mine < theirs;
          break;
        }
      }
    }
    if (ok && (value > opt.value + tol || (value >= opt.value - tol && pen < opt.penalty) ||
               lex_smaller)) {
      opt.value = value;
      opt.penalty = pen;
      opt.best = mrta::AssignmentMatrix(n, m + 1, 0);
      for (std::size_t i = 0; i < n; ++i)
        if (pick[i]) opt.best(i, pick[i] == m + 1 ? m : pick[i] - 1) = 1;
    }
    std::size_t k = 0;
    while (k < n && ++pick[k] == m + 2) pick[k++] = 0;
    if (k == n) break;
  }
  return opt;
}

inline std::size_t argmax_scan(const mrta::RewardMatrix& r, std::size_t row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j + 1 < r.cols(); ++j)
    if (r(row, j) > r(row, best)) best = j;
  return best;
}

}  // namespace oracle
