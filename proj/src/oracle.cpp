#include <algorithm>
#include <limits>
#include <numeric>

#include "mrta/exact_solver.hpp"

namespace mrta {

Schedule brute_force_oracle(const ProblemInstance& instance) {
  const std::size_t n = instance.num_robots();
  const std::size_t m = instance.num_tasks();
  if (n > kOracleMaxRobots || m > kOracleMaxTasks) {
    throw InvalidInput("brute-force oracle refuses instances beyond 3 robots / 4 tasks");
  }

  // All covering coalitions, redundant ones included.
  std::vector<std::vector<std::vector<std::size_t>>> options(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      SkillSet team(instance.skill_count());
      std::vector<std::size_t> members;
      for (std::size_t r = 0; r < n; ++r) {
        if (mask & (1u << r)) {
          team = team | instance.robot(r).capabilities;
          members.push_back(r);
        }
      }
      if (team.covers(instance.task(j).required)) options[j].push_back(members);
    }
    if (options[j].empty()) throw InvalidInput("task cannot be covered");
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);

  double best = std::numeric_limits<double>::infinity();
  Schedule best_schedule;
  std::vector<std::size_t> choice(m, 0);

  do {
    std::vector<std::size_t> position(m);
    for (std::size_t k = 0; k < m; ++k) position[order[k]] = k;
    bool consistent = true;
    for (std::size_t a = 0; a < m && consistent; ++a)
      for (std::size_t b = 0; b < m; ++b)
        if (instance.precedence()(a, b) && position[a] > position[b]) consistent = false;
    if (!consistent) continue;

    std::fill(choice.begin(), choice.end(), 0);
    while (true) {
      std::vector<double> free(n);
      std::vector<Point> at(n);
      for (std::size_t r = 0; r < n; ++r) {
        free[r] = instance.robot(r).remaining_duration;
        at[r] = instance.start_positions()[r];
      }
      std::vector<double> start(m), end(m);
      for (auto t : order) {
        double s = 0.0;
        for (std::size_t p = 0; p < m; ++p)
          if (instance.precedence()(p, t)) s = std::max(s, end[p]);
        for (auto r : options[t][choice[t]])
          s = std::max(s, free[r] + instance.travel(at[r], instance.task(t).position));
        start[t] = s;
        end[t] = s + instance.task(t).duration;
        for (auto r : options[t][choice[t]]) {
          free[r] = end[t];
          at[r] = instance.task(t).position;
        }
      }
      double ms = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        ms = std::max(ms, free[r] + instance.travel(at[r], instance.end_positions()[r]));
      if (ms < best) {
        best = ms;
        best_schedule.entries.clear();
        for (std::size_t t = 0; t < m; ++t)
          for (auto r : options[t][choice[t]])
            best_schedule.entries.push_back({r, t, start[t], end[t]});
        best_schedule.makespan = ms;
      }

      std::size_t k = 0;
      while (k < m && ++choice[k] == options[k].size()) choice[k++] = 0;
      if (k == m) break;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  sort_entries(best_schedule);
  return best_schedule;
}

}  // namespace mrta
