#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrta/batch.hpp"
#include "mrta/rewards.hpp"
#include "mrta/simulator.hpp"

namespace mrta {

struct BenchmarkCase {
  std::string instance_id;
  ProblemInstance instance;
  std::uint64_t seed = 0;
  // Optimal schedule, when known. Needed by expert-based policies and for gaps.
  std::optional<Schedule> expert;
  double expert_wall_ms = 0.0;
};

// Policy names understood by the benchmark:
//   greedy          direct greedy baseline
//   expert-replay   extracted expert rewards through match + simulate
//   sampled         best of RolloutConfig rollouts around expert-replay
//   random          uniform random rewards through match + simulate
//   sampled-random  best of rollouts around random rewards
//   optimal         the expert schedule itself
const std::vector<std::string>& known_policies();
bool policy_needs_expert(const std::string& policy);

struct BenchmarkOptions {
  double gamma = kDefaultGamma;
  RolloutConfig rollouts;
  Execution execution = Execution::kSerial;
  int max_threads = 0;
};

struct BenchmarkRow {
  std::string instance_id;
  std::string policy;
  double makespan = 0.0;
  std::optional<double> gap;               // (makespan - optimal) / optimal
  std::optional<double> t_per_decision_ms;
  double t_full_ms = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_robots = 0;
  std::size_t n_tasks = 0;
  std::size_t decisions = 0;
  std::size_t violations = 0;
  std::size_t forced_decisions = 0;
};

// One row per (case, policy), case-major. Throws InvalidInput for unknown
// policies or for expert-based policies on cases without an expert schedule.
std::vector<BenchmarkRow> run_benchmark(const std::vector<BenchmarkCase>& cases,
                                        const std::vector<std::string>& policies,
                                        const BenchmarkOptions& options);

// Columns: instance_id, policy, makespan, gap, t_per_decision_ms, t_full_ms,
// seed, n_robots, n_tasks, decisions, violations, forced_decisions. Timing
// columns are left empty when include_timing is false.
void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows,
                         bool include_timing = true);

struct SummaryRow {
  std::string policy;
  std::size_t n_robots = 0;
  std::size_t n_tasks = 0;
  std::size_t count = 0;
  double makespan_mean = 0.0;
  double makespan_median = 0.0;
  double makespan_p10 = 0.0;
  double makespan_p90 = 0.0;
  std::optional<double> gap_mean;
  std::optional<double> gap_median;
  std::optional<double> gap_p10;
  std::optional<double> gap_p90;
  std::optional<double> decision_ms_mean;
  std::optional<double> decision_ms_max;
  double full_ms_mean = 0.0;
  std::size_t violations = 0;
};

// Linear-interpolation percentile, q in [0, 1]. Throws on empty input.
double percentile(std::vector<double> values, double q);

// Grouped by (policy, n_robots, n_tasks), in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<BenchmarkRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows,
                       bool include_timing = true);

}  // namespace mrta
