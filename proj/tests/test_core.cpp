#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mrta/core.hpp"
#include "mrta/exact_solver.hpp"
#include "mrta/generator.hpp"
#include "oracles.hpp"

using namespace mrta;
using testing_support::build;

TEST_SUITE("core") {
  TEST_CASE("travel_time examples") {
    CHECK(travel_time({0, 0}, {3, 4}, 1.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(travel_time({7, 7}, {7, 7}, 1.0) == 0.0);
    CHECK(travel_time({0, 0}, {1, 1}, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK_THROWS_AS(travel_time({NAN, 0}, {1, 1}, 1.0), InvalidInput);
    CHECK_THROWS_AS(travel_time({0, 0}, {1, 1}, 0.0), InvalidInput);
  }

  TEST_CASE("travel_time is a metric for fixed speed") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int k = 0; k < 2000; ++k) {
      Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
      const double speed = 0.5 + (k % 5);
      CHECK(travel_time(a, b, speed) == travel_time(b, a, speed));
      CHECK(travel_time(a, c, speed) <= travel_time(a, b, speed) + travel_time(b, c, speed) + 1e-12);
      CHECK(travel_time(a, b, speed) >= 0.0);
    }
  }

  TEST_CASE("SkillSet coverage is element-wise") {
    const auto a = SkillSet::of(3, {0, 2});
    CHECK(a.covers(SkillSet::of(3, {0})));
    CHECK(a.covers(SkillSet::of(3, {0, 2})));
    CHECK_FALSE(a.covers(SkillSet::of(3, {1})));
    CHECK(a.count() == 2);
    CHECK((a | SkillSet::of(3, {1})).covers(SkillSet::of(3, {0, 1, 2})));
    CHECK_THROWS_AS(SkillSet::of(3, {3}), InvalidInput);
  }

  TEST_CASE("instance construction rejects broken invariants") {
    using testing_support::RobotDef;
    using testing_support::TaskDef;
    CHECK_THROWS_AS(build({{{0, 0}, {0, 0}, {0}}}, {{{1, 1}, 10, {1}}}), InvalidInput);
    CHECK_THROWS_AS(build({{{0, 0}, {0, 0}, {0}}},
                          {{{1, 1}, 10, {0}}, {{2, 2}, 10, {0}}}, {{0, 1}, {1, 0}}),
                    InvalidInput);
    CHECK_THROWS_AS(build({{{0, 0}, {0, 0}, {0}}}, {{{1, 1}, 0.0, {0}}}), InvalidInput);
    const auto ok = build({{{0, 0}, {0, 0}, {0}}}, {{{1, 1}, 10, {0}}});
    CHECK(ok.robot_graph().rows() == 1);
    CHECK(ok.robot_graph()(0, 0) == 1);
  }

  TEST_CASE("makespan closed forms") {
    const auto inst = build({{{0, 0}, {3, 4}, {0}}}, {{{3, 4}, 50, {0}}});
    Schedule s{{{0, 0, 5.0, 55.0}}, 0.0};
    CHECK(makespan(s, inst) == doctest::Approx(55.0));

    const auto empty = build({{{1, 1}, {1, 1}, {0}}, {{2, 2}, {2, 2}, {1}}}, {});
    CHECK(makespan(Schedule{}, empty) == 0.0);

    const auto apart = build({{{0, 0}, {6, 8}, {0}}}, {});
    CHECK(makespan(Schedule{}, apart) == doctest::Approx(10.0));

    Schedule bad{{{0, 5, 0.0, 1.0}}, 0.0};
    CHECK_THROWS_AS(makespan(bad, inst), InvalidSchedule);
  }

  TEST_CASE("makespan of solver output equals the exhaustive optimum on 2x2 instances") {
    GeneratorConfig c;
    c.n_robots = 2;
    c.n_tasks = 2;
    c.n_precedence = 1;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto inst = generate_instance(c, seed);
      const auto exact = solve_optimal(inst, 10.0);
      const auto brute = brute_force_oracle(inst);
      CHECK(makespan(exact.schedule, inst) == doctest::Approx(brute.makespan).epsilon(1e-12));
      CHECK(oracle::makespan(exact.schedule, inst) ==
            doctest::Approx(exact.schedule.makespan).epsilon(1e-12));
    }
  }

  TEST_CASE("validate_schedule reports constructed violations") {
    // Robot 0 has skill 0, robot 1 skill 1; task 0 needs both, task 1 follows task 0.
    const auto inst = build({{{0, 0}, {0, 0}, {0}}, {{0, 0}, {0, 0}, {1}}},
                            {{{3, 4}, 10, {0, 1}}, {{3, 4}, 10, {0}}}, {{0, 1}});
    const auto good = solve_optimal(inst, 5.0).schedule;
    CHECK(validate_schedule(good, inst).empty());

    Schedule early = good;
    for (auto& e : early.entries)
      if (e.task == 1) {
        e.start -= 5.0;
        e.end -= 5.0;
      }
    early.makespan = makespan(early, inst);
    CHECK(has_violation(validate_schedule(early, inst), Violation::Kind::kPrecedence));

    Schedule thin = good;
    std::erase_if(thin.entries, [](const ScheduleEntry& e) { return e.task == 0 && e.robot == 1; });
    thin.makespan = makespan(thin, inst);
    CHECK(has_violation(validate_schedule(thin, inst), Violation::Kind::kCoverage));

    Schedule wrong = good;
    wrong.makespan += 1.0;
    CHECK(has_violation(validate_schedule(wrong, inst), Violation::Kind::kMakespan));

    Schedule teleport = good;
    for (auto& e : teleport.entries) {
      e.start -= 4.0;
      e.end -= 4.0;
    }
    teleport.makespan = makespan(teleport, inst);
    CHECK(has_violation(validate_schedule(teleport, inst), Violation::Kind::kTravel));
  }

  TEST_CASE("validate_schedule agrees with an independent checker on mutated schedules") {
    GeneratorConfig c;
    c.n_robots = 3;
    c.n_tasks = 5;
    c.n_precedence = 2;
    std::mt19937_64 rng(5);
    std::size_t accepted = 0, rejected = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const auto inst = generate_instance(c, seed);
      const auto base = solve_optimal(inst, 5.0).schedule;
      for (int trial = 0; trial < 12; ++trial) {
        Schedule s = base;
        const int kind = static_cast<int>(rng() % 6);
        auto& e = s.entries[rng() % s.entries.size()];
        const double shift = (static_cast<double>(rng() % 2001) - 1000.0) / 100.0;
        switch (kind) {
          case 0: break;
          case 1: e.start += shift; e.end += shift; break;
          case 2: e.robot = rng() % inst.num_robots(); break;
          case 3: s.entries.erase(s.entries.begin() + static_cast<long>(rng() % s.entries.size())); break;
          case 4: e.end += 1.0; break;
          case 5:
            for (auto& x : s.entries)
              if (x.task == e.task) { x.start += shift; x.end += shift; }
            break;
        }
        if (trial % 2 == 0) s.makespan = oracle::makespan(s, inst);
        const bool library = validate_schedule(s, inst).empty();
        std::string why;
        const bool independent = oracle::feasible(s, inst, &why);
        CHECK_MESSAGE(library == independent, "seed " << seed << " kind " << kind << " oracle: " << why);
        (library ? accepted : rejected)++;
      }
    }
    CHECK(accepted > 50);
    CHECK(rejected > 50);
  }
}
