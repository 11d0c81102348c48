#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "mrta/matching.hpp"
#include "oracles.hpp"

using namespace mrta;
using testing_support::skillset;

namespace {

RobotState robot(std::vector<std::size_t> skills, Point at = {}, bool available = true) {
  RobotState r;
  r.position = at;
  r.available = available;
  r.capabilities = skillset(3, skills);
  return r;
}

TaskSpec task(std::vector<std::size_t> skills, Point at = {}, TaskStatus st = {}) {
  TaskSpec t;
  t.position = at;
  t.duration = 10.0;
  t.required = skillset(3, skills);
  t.status = st;
  return t;
}

struct RandomCase {
  std::vector<RobotState> robots;
  std::vector<TaskSpec> tasks;
  RewardMatrix reward;
};

RandomCase random_case(std::mt19937_64& rng, std::size_t n, std::size_t m, bool integer_rewards) {
  RandomCase c;
  auto nonempty = [&] {
    std::uint32_t bits = 0;
    while (bits == 0) bits = static_cast<std::uint32_t>(rng() % 8);
    return SkillSet(3, bits);
  };
  for (std::size_t i = 0; i < n; ++i) {
    RobotState r;
    r.capabilities = nonempty();
    r.available = rng() % 6 != 0;
    r.position = {static_cast<double>(rng() % 100), static_cast<double>(rng() % 100)};
    c.robots.push_back(r);
  }
  for (std::size_t j = 0; j < m; ++j) {
    TaskSpec t;
    t.required = nonempty();
    t.duration = 1.0;
    t.position = {static_cast<double>(rng() % 100), static_cast<double>(rng() % 100)};
    const auto roll = rng() % 8;
    t.status.ready = roll != 0;
    t.status.assigned = roll == 1;
    t.status.incomplete = roll != 2;
    c.tasks.push_back(t);
  }
  c.reward = RewardMatrix(n, m + 1);
  std::uniform_real_distribution<double> u(-0.3, 1.0);
  for (auto& v : c.reward.values())
    v = integer_rewards ? static_cast<double>(static_cast<int>(rng() % 4) - 1) : u(rng);
  return c;
}

}  // namespace

TEST_SUITE("matching") {
  TEST_CASE("single robot takes its only positive task") {
    RewardMatrix r(1, 2);
    r(0, 0) = 1.0;
    const auto a = match(r, {robot({0})}, {task({0})});
    CHECK(a(0, 0) == 1);
    CHECK(a(0, 1) == 0);
  }

  TEST_CASE("a two-skill task forces the coalition") {
    RewardMatrix r(2, 2);
    r(0, 0) = 0.9;
    r(1, 0) = 0.8;
    const auto a = match(r, {robot({0}), robot({1})}, {task({0, 1})});
    CHECK(a(0, 0) == 1);
    CHECK(a(1, 0) == 1);
  }

  TEST_CASE("unavailable robots and unschedulable tasks stay unused") {
    RewardMatrix r(2, 3, 1.0);
    TaskStatus done{true, false, false};
    const auto a = match(r, {robot({0}), robot({0}, {}, false)}, {task({0}), task({0}, {}, done)});
    CHECK(a(0, 0) + a(0, 2) == 1);
    CHECK(a(0, 1) == 0);
    CHECK(a(1, 0) + a(1, 1) + a(1, 2) == 0);
  }

  TEST_CASE("allow_idle = false never selects the idle column") {
    RewardMatrix r(2, 2);
    r(0, 1) = 5.0;
    r(1, 1) = 5.0;
    r(0, 0) = 0.1;
    r(1, 0) = 0.1;
    const auto a = match(r, {robot({0}), robot({0})}, {task({0})}, MatchOptions{false});
    CHECK(a(0, 1) == 0);
    CHECK(a(1, 1) == 0);
    CHECK(a(0, 0) + a(1, 0) >= 1);
  }

  TEST_CASE("non-finite rewards of available robots are rejected") {
    RewardMatrix r(1, 2);
    r(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(match(r, {robot({0})}, {task({0})}), InvalidInput);
    CHECK_THROWS_AS(match(RewardMatrix(1, 3), {robot({0})}, {task({0})}), InvalidInput);
  }

  TEST_CASE("objective and tie-broken argmax equal exhaustive enumeration") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 1000; ++k) {
      const std::size_t n = 1 + rng() % 4, m = 1 + rng() % 5;
      const bool integer = k % 3 == 0;
      const auto c = random_case(rng, n, m, integer);
      const bool idle = k % 5 != 0;
      MatchStats stats;
      const auto a = match(c.reward, c.robots, c.tasks, MatchOptions{idle}, &stats);
      const auto best = oracle::brute_force_match(c.reward, c.robots, c.tasks, idle);
      CHECK_MESSAGE(assignment_value(a, c.reward) == doctest::Approx(best.value).epsilon(1e-12),
                    "case " << k);
      CHECK_MESSAGE(a == best.best, "case " << k);
      CHECK_FALSE(find_assignment_violation(a, c.robots, c.tasks).has_value());
    }
  }

  TEST_CASE("scaling the rewards leaves the assignment unchanged") {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 300; ++k) {
      const auto c = random_case(rng, 1 + rng() % 4, 1 + rng() % 5, false);
      const auto base = match(c.reward, c.robots, c.tasks);
      for (double scale : {0.001, 3.0, 1e6}) {
        RewardMatrix r = c.reward;
        for (auto& v : r.values()) v *= scale;
        CHECK(match(r, c.robots, c.tasks) == base);
      }
    }
  }

  TEST_CASE("larger random inputs always give feasible assignments") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 200; ++k) {
      const auto c = random_case(rng, 5 + rng() % 8, 5 + rng() % 20, k % 2 == 0);
      const auto a = match(c.reward, c.robots, c.tasks);
      const auto why = find_assignment_violation(a, c.robots, c.tasks);
      CHECK_MESSAGE(!why.has_value(), *why);
    }
  }

  TEST_CASE("violations are detected") {
    AssignmentMatrix a(2, 2);
    a(0, 0) = 1;
    CHECK(find_assignment_violation(a, {robot({0}), robot({1})}, {task({0, 1})}).has_value());
    a(1, 0) = 1;
    CHECK_FALSE(find_assignment_violation(a, {robot({0}), robot({1})}, {task({0, 1})}).has_value());
    a(0, 1) = 1;
    CHECK(find_assignment_violation(a, {robot({0}), robot({1})}, {task({0, 1})}).has_value());
  }

  TEST_CASE("prune drops the farther robot without a unique skill") {
    const std::vector<RobotState> rs{robot({0}, {50, 0}), robot({0, 1}, {1, 0})};
    const std::vector<TaskSpec> ts{task({0, 1})};
    AssignmentMatrix a(2, 2);
    a(0, 0) = a(1, 0) = 1;
    const auto p = prune_redundant(a, rs, ts, 1.0);
    CHECK(p(0, 0) == 0);
    CHECK(p(1, 0) == 1);
  }

  TEST_CASE("prune keeps minimal coalitions and idle rows") {
    const std::vector<RobotState> rs{robot({0}), robot({1}), robot({2})};
    const std::vector<TaskSpec> ts{task({0, 1})};
    AssignmentMatrix a(3, 2);
    a(0, 0) = a(1, 0) = 1;
    a(2, 1) = 1;
    CHECK(prune_redundant(a, rs, ts, 1.0) == a);
  }

  TEST_CASE("pruned coalitions are minimal and still cover") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 500; ++k) {
      const auto c = random_case(rng, 2 + rng() % 6, 1 + rng() % 4, false);
      auto robots = c.robots;
      for (auto& r : robots) r.available = true;
      auto tasks = c.tasks;
      for (auto& t : tasks) t.status = {};
      RewardMatrix r = c.reward;
      for (auto& v : r.values()) v = std::fabs(v) + 0.5;  // everyone wants to join
      const auto a = match(r, robots, tasks);
      const auto p = prune_redundant(a, robots, tasks, 1.0);
      CHECK_FALSE(find_assignment_violation(p, robots, tasks).has_value());
      for (std::size_t j = 0; j < tasks.size(); ++j) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < robots.size(); ++i)
          if (p(i, j)) members.push_back(i);
        for (std::size_t drop : members) {
          std::set<std::size_t> have;
          for (std::size_t i : members)
            if (i != drop)
              for (auto s : oracle::skills(robots[i].capabilities)) have.insert(s);
          CHECK_FALSE(oracle::includes_all(have, oracle::skills(tasks[j].required)));
        }
        for (std::size_t i = 0; i < robots.size(); ++i)
          if (p(i, j)) CHECK(a(i, j) == 1);
      }
    }
  }

  TEST_CASE("premove target examples") {
    RewardMatrix r(2, 3);
    r(0, 0) = 0.2;
    r(0, 1) = 0.9;
    r(0, 2) = 0.5;
    r(1, 0) = 0.4;
    r(1, 1) = 0.4;
    r(1, 2) = 0.9;
    CHECK(premove_target(r, 0) == 1);
    CHECK(premove_target(r, 1) == 0);
    r(1, 0) = -std::numeric_limits<double>::infinity();
    CHECK(premove_target(r, 1) == 1);
    r(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(premove_target(r, 1), InvalidInput);
  }

  TEST_CASE("premove target agrees with a linear scan") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 2000; ++k) {
      const std::size_t m = 1 + rng() % 12;
      RewardMatrix r(1, m + 1);
      for (auto& v : r.values()) v = static_cast<double>(rng() % 7);  // frequent ties
      CHECK(premove_target(r, 0) == oracle::argmax_scan(r, 0));
    }
  }
}
