#pragma once

#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mrta/core.hpp"

namespace testing_support {

struct RobotDef {
  mrta::Point start;
  mrta::Point end;
  std::vector<std::size_t> skills;
  double remaining = 0.0;
};

struct TaskDef {
  mrta::Point at;
  double duration;
  std::vector<std::size_t> skills;
};

inline mrta::SkillSet skillset(std::size_t width, const std::vector<std::size_t>& s) {
  mrta::SkillSet out(width);
  for (auto k : s) out.set(k);
  return out;
}

inline mrta::ProblemInstance build(const std::vector<RobotDef>& robots,
                                   const std::vector<TaskDef>& tasks,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& edges = {},
                                   std::size_t width = 3, double speed = 1.0) {
  std::vector<mrta::RobotState> rs;
  std::vector<mrta::Point> start, end;
  for (const auto& r : robots) {
    mrta::RobotState s;
    s.position = r.start;
    s.remaining_duration = r.remaining;
    s.available = r.remaining == 0.0;
    s.capabilities = skillset(width, r.skills);
    rs.push_back(s);
    start.push_back(r.start);
    end.push_back(r.end);
  }
  std::vector<mrta::TaskSpec> ts;
  mrta::Matrix<std::uint8_t> prec(tasks.size(), tasks.size(), 0);
  for (auto [a, b] : edges) prec(a, b) = 1;
  for (std::size_t j = 0; j < tasks.size(); ++j) {
    mrta::TaskSpec t;
    t.position = tasks[j].at;
    t.duration = tasks[j].duration;
    t.required = skillset(width, tasks[j].skills);
    bool has_pred = false;
    for (auto [a, b] : edges) has_pred = has_pred || b == j;
    t.status.ready = !has_pred;
    ts.push_back(t);
  }
  return mrta::ProblemInstance(rs, ts, prec, start, end, speed, width);
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mrta_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
