#include "mrta/benchmark.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mrta/policies.hpp"

namespace mrta {

const std::vector<std::string>& known_policies() {
  static const std::vector<std::string> names{"greedy", "expert-replay", "sampled",
                                              "random", "sampled-random", "optimal"};
  return names;
}

bool policy_needs_expert(const std::string& policy) {
  return policy == "expert-replay" || policy == "sampled" || policy == "optimal";
}

namespace {

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void fill_from_simulation(BenchmarkRow& row, const SimulationResult& sim, std::size_t rollouts) {
  row.makespan = sim.schedule.makespan;
  row.decisions = sim.decisions;
  row.forced_decisions = sim.forced_decisions;
  row.violations = validate_schedule(sim.schedule, sim.instance).size();
  if (!sim.decision_ms.empty()) {
    row.t_per_decision_ms = mean_of(sim.decision_ms) * static_cast<double>(rollouts);
  }
}

BenchmarkRow run_one(const BenchmarkCase& c, const std::string& policy,
                     const BenchmarkOptions& options) {
  BenchmarkRow row;
  row.instance_id = c.instance_id;
  row.policy = policy;
  row.seed = c.seed;
  row.n_robots = c.instance.num_robots();
  row.n_tasks = c.instance.num_tasks();

  if (policy == "optimal") {
    row.makespan = c.expert->makespan;
    row.t_full_ms = c.expert_wall_ms;
    row.violations = validate_schedule(*c.expert, c.instance).size();
  } else if (policy == "greedy") {
    const SimulationResult sim = simulate(c.instance, GreedyPolicy{});
    fill_from_simulation(row, sim, 1);
    row.t_full_ms = sim.total_ms;
  } else if (policy == "expert-replay") {
    const ExpertReplayPolicy base(*c.expert, c.instance, options.gamma);
    const SimulationResult sim = simulate(c.instance, base);
    fill_from_simulation(row, sim, 1);
    row.t_full_ms = sim.total_ms;
  } else if (policy == "random") {
    const RandomRewardPolicy base(c.seed);
    const SimulationResult sim = simulate(c.instance, base);
    fill_from_simulation(row, sim, 1);
    row.t_full_ms = sim.total_ms;
  } else if (policy == "sampled" || policy == "sampled-random") {
    RolloutConfig cfg = options.rollouts;
    cfg.seed ^= c.seed;
    RolloutResult rr;
    if (policy == "sampled") {
      const ExpertReplayPolicy base(*c.expert, c.instance, options.gamma);
      rr = sampled_rollouts(c.instance, base, cfg);
    } else {
      const RandomRewardPolicy base(c.seed);
      rr = sampled_rollouts(c.instance, base, cfg);
    }
    fill_from_simulation(row, rr.best, cfg.n_rollouts);
    row.t_full_ms = rr.total_ms;
  }
  if (c.expert && c.expert->makespan > 0.0) {
    row.gap = (row.makespan - c.expert->makespan) / c.expert->makespan;
  }
  return row;
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

}  // namespace

std::vector<BenchmarkRow> run_benchmark(const std::vector<BenchmarkCase>& cases,
                                        const std::vector<std::string>& policies,
                                        const BenchmarkOptions& options) {
  options.rollouts.validate();
  for (const auto& p : policies) {
    if (std::find(known_policies().begin(), known_policies().end(), p) == known_policies().end()) {
      throw InvalidInput("unknown policy '" + p + "'");
    }
    if (policy_needs_expert(p)) {
      for (const auto& c : cases) {
        if (!c.expert) {
          throw InvalidInput("policy '" + p + "' needs an expert schedule for " + c.instance_id);
        }
      }
    }
  }
  std::vector<BenchmarkRow> rows(cases.size() * policies.size());
  for_each_index(
      rows.size(), options.execution,
      [&](std::size_t k) {
        rows[k] = run_one(cases[k / policies.size()], policies[k % policies.size()], options);
      },
      options.max_threads);
  return rows;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows,
                         bool include_timing) {
  out << "instance_id,policy,makespan,gap,t_per_decision_ms,t_full_ms,seed,n_robots,n_tasks,"
         "decisions,violations,forced_decisions\n";
  for (const auto& r : rows) {
    out << r.instance_id << ',' << r.policy << ',' << number(r.makespan) << ',' << number(r.gap)
        << ',' << (include_timing ? number(r.t_per_decision_ms) : "") << ','
        << (include_timing ? number(r.t_full_ms) : "") << ',' << r.seed << ',' << r.n_robots
        << ',' << r.n_tasks << ',' << r.decisions << ',' << r.violations << ','
        << r.forced_decisions << '\n';
  }
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidInput("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<BenchmarkRow>& rows) {
  struct Group {
    SummaryRow head;
    std::vector<double> makespans, gaps, decision_ms, full_ms;
  };
  std::vector<Group> groups;
  for (const auto& r : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.head.policy == r.policy && g.head.n_robots == r.n_robots &&
             g.head.n_tasks == r.n_tasks;
    });
    if (it == groups.end()) {
      groups.push_back(Group{});
      it = std::prev(groups.end());
      it->head.policy = r.policy;
      it->head.n_robots = r.n_robots;
      it->head.n_tasks = r.n_tasks;
    }
    it->makespans.push_back(r.makespan);
    if (r.gap) it->gaps.push_back(*r.gap);
    if (r.t_per_decision_ms) it->decision_ms.push_back(*r.t_per_decision_ms);
    it->full_ms.push_back(r.t_full_ms);
    it->head.violations += r.violations;
  }
  std::vector<SummaryRow> out;
  for (auto& g : groups) {
    SummaryRow s = g.head;
    s.count = g.makespans.size();
    s.makespan_mean = mean_of(g.makespans);
    s.makespan_median = percentile(g.makespans, 0.5);
    s.makespan_p10 = percentile(g.makespans, 0.1);
    s.makespan_p90 = percentile(g.makespans, 0.9);
    if (!g.gaps.empty()) {
      s.gap_mean = mean_of(g.gaps);
      s.gap_median = percentile(g.gaps, 0.5);
      s.gap_p10 = percentile(g.gaps, 0.1);
      s.gap_p90 = percentile(g.gaps, 0.9);
    }
    if (!g.decision_ms.empty()) {
      s.decision_ms_mean = mean_of(g.decision_ms);
      s.decision_ms_max = *std::max_element(g.decision_ms.begin(), g.decision_ms.end());
    }
    s.full_ms_mean = mean_of(g.full_ms);
    out.push_back(s);
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows,
                       bool include_timing) {
  out << "policy,n_robots,n_tasks,count,makespan_mean,makespan_median,makespan_p10,"
         "makespan_p90,gap_mean,gap_median,gap_p10,gap_p90,decision_ms_mean,decision_ms_max,"
         "full_ms_mean,violations\n";
  for (const auto& s : rows) {
    out << s.policy << ',' << s.n_robots << ',' << s.n_tasks << ',' << s.count << ','
        << number(s.makespan_mean) << ',' << number(s.makespan_median) << ','
        << number(s.makespan_p10) << ',' << number(s.makespan_p90) << ',' << number(s.gap_mean)
        << ',' << number(s.gap_median) << ',' << number(s.gap_p10) << ',' << number(s.gap_p90)
        << ',' << (include_timing ? number(s.decision_ms_mean) : "") << ','
        << (include_timing ? number(s.decision_ms_max) : "") << ','
        << (include_timing ? number(s.full_ms_mean) : "") << ',' << s.violations << '\n';
  }
}

}  // namespace mrta
