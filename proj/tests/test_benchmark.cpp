#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mrta/benchmark.hpp"
#include "mrta/pipeline.hpp"

using namespace mrta;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

TEST_SUITE("benchmark") {
  TEST_CASE("percentile interpolates linearly") {
    CHECK(percentile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
    CHECK(percentile({5}, 0.9) == 5.0);
    CHECK(percentile({3, 1, 2}, 0.0) == 1.0);
    CHECK(percentile({3, 1, 2}, 1.0) == 3.0);
    CHECK(percentile({0, 10}, 0.1) == doctest::Approx(1.0));
    CHECK_THROWS(percentile({}, 0.5));
  }

  TEST_CASE("one row per case and policy, gap of the expert to itself is zero") {
    for (std::size_t m = 6; m <= 10; m += 2) {
      GeneratorConfig c;
      c.n_tasks = m;
      const auto cases = generate_cases(c, 10, 3, true, 60.0, Execution::kSerial);
      const std::vector<std::string> policies{"optimal", "greedy", "expert-replay", "random"};
      BenchmarkOptions opt;
      const auto rows = run_benchmark(cases, policies, opt);
      REQUIRE(rows.size() == cases.size() * policies.size());
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        CHECK(r.instance_id == cases[k / policies.size()].instance_id);
        CHECK(r.policy == policies[k % policies.size()]);
        CHECK(r.violations == 0);
        REQUIRE(r.gap.has_value());
        CHECK(*r.gap >= -1e-9);
        if (r.policy == "optimal" || r.policy == "expert-replay") CHECK(std::fabs(*r.gap) <= 1e-9);
      }
    }
  }

  TEST_CASE("cases without an expert have an empty gap") {
    GeneratorConfig c;
    const auto cases = generate_cases(c, 1, 2, false, 1.0, Execution::kSerial);
    const auto rows = run_benchmark(cases, {"greedy", "random", "sampled-random"}, {});
    for (const auto& r : rows) CHECK_FALSE(r.gap.has_value());
    CHECK_THROWS_AS(run_benchmark(cases, {"expert-replay"}, {}), InvalidInput);
    CHECK_THROWS_AS(run_benchmark(cases, {"nonsense"}, {}), InvalidInput);

    std::ostringstream csv;
    write_benchmark_csv(csv, rows);
    const auto lines = lines_of(csv.str());
    REQUIRE(lines.size() == rows.size() + 1);
    const auto header = fields_of(lines[0]);
    const auto gap_col = std::find(header.begin(), header.end(), "gap") - header.begin();
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const auto f = fields_of(lines[k]);
      REQUIRE(f.size() == header.size());
      CHECK(f[gap_col].empty());
    }
  }

  TEST_CASE("csv without timing is reproducible") {
    GeneratorConfig c;
    c.n_tasks = 6;
    const auto cases = generate_cases(c, 3, 4, true, 30.0, Execution::kParallel);
    BenchmarkOptions opt;
    opt.rollouts.n_rollouts = 4;
    const std::vector<std::string> policies{"greedy", "expert-replay", "sampled", "sampled-random"};
    std::ostringstream a, b;
    write_benchmark_csv(a, run_benchmark(cases, policies, opt), false);
    opt.execution = Execution::kParallel;
    write_benchmark_csv(b, run_benchmark(cases, policies, opt), false);
    CHECK(a.str() == b.str());
  }

  TEST_CASE("summary groups by policy and size") {
    std::vector<BenchmarkRow> rows;
    for (int k = 0; k < 4; ++k) {
      BenchmarkRow r;
      r.policy = k % 2 ? "b" : "a";
      r.n_robots = 3;
      r.n_tasks = 8;
      r.makespan = 100.0 + k;
      r.gap = 0.1 * k;
      r.t_per_decision_ms = 1.0 + k;
      r.t_full_ms = 10.0;
      rows.push_back(r);
    }
    const auto s = summarize(rows);
    REQUIRE(s.size() == 2);
    CHECK(s[0].policy == "a");
    CHECK(s[0].count == 2);
    CHECK(s[0].makespan_mean == doctest::Approx(101.0));
    CHECK(*s[0].gap_mean == doctest::Approx(0.1));
    CHECK(*s[1].decision_ms_max == doctest::Approx(4.0));
    std::ostringstream out;
    write_summary_csv(out, s);
    CHECK(lines_of(out.str()).size() == 3);
  }
}
