// Acceptance run: prints one PASS/FAIL line per headline criterion and exits
// non-zero if any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "mrta/benchmark.hpp"
#include "mrta/dataset_io.hpp"
#include "mrta/pipeline.hpp"
#include "mrta/policies.hpp"
#include "oracles.hpp"

using namespace mrta;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  %-26s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), s);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Default-distribution instances with optimal expert schedules, solved once
// and shared by several criteria.
struct Expert {
  ProblemInstance instance;
  Schedule schedule;
};

std::vector<Expert> solve_defaults(std::uint64_t first_seed, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  std::iota(seeds.begin(), seeds.end(), first_seed);
  auto instances = generate_batch(GeneratorConfig{}, seeds, Execution::kParallel);
  auto solved = solve_batch(instances, 120.0, Execution::kParallel);
  std::vector<Expert> out;
  for (std::size_t k = 0; k < count; ++k) {
    if (solved[k].status != SolverStatus::kOptimal) {
      throw std::runtime_error("seed " + std::to_string(seeds[k]) + " not solved to optimality");
    }
    out.push_back({std::move(instances[k]), std::move(solved[k].schedule)});
  }
  return out;
}

std::map<std::string, std::string> snapshot_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir).generic_string();
    if (rel == "timing.json") continue;
    files[rel] = read_text(e.path());
  }
  return files;
}

}  // namespace

int main() {
  std::vector<Expert> experts;  // 500 default instances, seeds 0..499

  criterion("oracle-optimality", [] {
    std::size_t agree = 0, total = 0;
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 100; ++k) {
      GeneratorConfig c;
      c.n_robots = 2 + k % 2;
      c.n_tasks = 3 + (k / 2) % 2;
      c.n_precedence = (k / 4) % 2;
      const auto inst = generate_instance(c, 10'000 + k);
      const auto exact = solve_optimal(inst, 60.0);
      const auto brute = brute_force_oracle(inst);
      const double diff = std::fabs(exact.schedule.makespan - brute.makespan);
      worst = std::max(worst, diff);
      ++total;
      if (exact.status == SolverStatus::kOptimal && diff <= 1e-6 && oracle::feasible(brute, inst))
        ++agree;
    }
    return Outcome{agree == total, fmt("%zu/%zu equal, max |diff| %.3g", agree, total, worst)};
  });

  criterion("replay-fidelity", [&] {
    experts = solve_defaults(0, 500);
    std::vector<ReplayReport> reports(100);
    for_each_index(100, Execution::kParallel,
                   [&](std::size_t k) { reports[k] = replay_schedule(experts[k].schedule, experts[k].instance, 0.99); });
    std::size_t ok = 0;
    std::string misses;
    for (std::size_t k = 0; k < reports.size(); ++k) {
      if (reports[k].reproduced) {
        ++ok;
      } else {
        misses += " | seed " + std::to_string(k) + ": " + reports[k].diagnostic;
      }
    }
    return Outcome{ok >= 99, fmt("%zu/100 reproduced", ok) + misses};
  });

  criterion("feasibility-suite", [&] {
    const std::size_t n = experts.size();
    std::vector<int> valid(3 * n, 0), aborted(3 * n, 0);
    for_each_index(3 * n, Execution::kParallel, [&](std::size_t idx) {
      const auto& e = experts[idx / 3];
      try {
        SimulationResult sim;
        switch (idx % 3) {
          case 0: sim = simulate(e.instance, GreedyPolicy{}); break;
          case 1: sim = simulate(e.instance, ExpertReplayPolicy(e.schedule, e.instance)); break;
          default: {
            const ExpertReplayPolicy base(e.schedule, e.instance);
            sim = sampled_rollouts(e.instance, base, RolloutConfig{0.05, 10, idx / 3}).best;
          }
        }
        valid[idx] = validate_schedule(sim.schedule, e.instance).empty() &&
                     oracle::feasible(sim.schedule, e.instance);
      } catch (const SimulationError&) {
        aborted[idx] = 1;
      }
    });
    const auto ok = std::accumulate(valid.begin(), valid.end(), std::size_t{0});
    const auto ab = std::accumulate(aborted.begin(), aborted.end(), std::size_t{0});
    return Outcome{ok == 3 * n && ab == 0,
                   fmt("%zu/%zu valid schedules, %zu livelock aborts", ok, 3 * n, ab)};
  });

  criterion("greedy-gap", [&] {
    std::vector<double> ratio(100);
    for_each_index(100, Execution::kParallel, [&](std::size_t k) {
      ratio[k] = simulate(experts[k].instance, GreedyPolicy{}).schedule.makespan /
                 experts[k].schedule.makespan;
    });
    const double mean = std::accumulate(ratio.begin(), ratio.end(), 0.0) / 100.0;
    return Outcome{mean >= 1.05 && mean <= 1.40, fmt("mean greedy/optimal ratio %.4f", mean)};
  });

  criterion("best-of-n-dominance", [&] {
    // Base policies: expert replay and uniform random rewards.
    std::vector<double> det(200), best(200);
    for_each_index(200, Execution::kParallel, [&](std::size_t idx) {
      const auto& e = experts[idx % 100];
      const ExpertReplayPolicy expert(e.schedule, e.instance);
      const RandomRewardPolicy random(idx % 100);
      const Policy& base = idx < 100 ? static_cast<const Policy&>(expert) : random;
      det[idx] = simulate(e.instance, base).schedule.makespan;
      best[idx] = sampled_rollouts(e.instance, base, RolloutConfig{0.05, 10, 7}).best.schedule.makespan;
    });
    std::size_t dominated = 0, improved = 0;
    double gain = 0.0;
    for (std::size_t k = 0; k < 200; ++k) {
      if (best[k] <= det[k] + 1e-9) ++dominated;
      if (best[k] < det[k] - 1e-9) {
        ++improved;
        gain += det[k] - best[k];
      }
    }
    const double mean_gain = improved ? gain / static_cast<double>(improved) : 0.0;
    return Outcome{dominated == 200 && (improved == 0 || mean_gain > 0.0),
                   fmt("%zu/200 best-of-10 <= deterministic (100 expert-replay, 100 random); "
                       "%zu improved, mean gain %.3f",
                       dominated, improved, mean_gain)};
  });

  criterion("scaling-smoke", [] {
    GeneratorConfig c;
    c.n_robots = 20;
    c.n_tasks = 250;
    c.n_skills = 3;
    c.n_precedence = 50;
    double greedy_max = 0.0, match_max = 0.0;
    std::size_t greedy_decisions = 0, match_decisions = 0;
    bool feasible = true;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto inst = generate_instance(c, seed);
      const auto g = simulate(inst, GreedyPolicy{});
      const auto r = simulate(inst, RandomRewardPolicy(seed));
      feasible = feasible && validate_schedule(g.schedule, inst).empty() &&
                 validate_schedule(r.schedule, inst).empty();
      greedy_max = std::max(greedy_max, *std::max_element(g.decision_ms.begin(), g.decision_ms.end()));
      match_max = std::max(match_max, *std::max_element(r.decision_ms.begin(), r.decision_ms.end()));
      greedy_decisions += g.decisions;
      match_decisions += r.decisions;
    }
    return Outcome{feasible && greedy_max < 100.0 && match_max < 1000.0,
                   fmt("20x250: greedy max %.2f ms over %zu decisions, random-reward matching "
                       "max %.2f ms over %zu decisions",
                       greedy_max, greedy_decisions, match_max, match_decisions)};
  });

  criterion("determinism", [&] {
    std::vector<std::string> problems;
    const auto root = testing_support::scratch_dir("acceptance_determinism");
    DatasetRequest req;
    req.count = 40;
    req.seed = 123;
    req.execution = Execution::kParallel;
    build_dataset(req, root / "a");
    req.execution = Execution::kSerial;
    build_dataset(req, root / "b");
    const auto a = snapshot_tree(root / "a");
    const auto b = snapshot_tree(root / "b");
    if (a != b) problems.push_back("dataset files differ");

    const auto cases = load_dataset_cases(root / "a");
    BenchmarkOptions opt;
    opt.rollouts.n_rollouts = 5;
    const std::vector<std::string> policies{"greedy", "expert-replay", "sampled", "random",
                                            "sampled-random", "optimal"};
    std::ostringstream c1, c2;
    opt.execution = Execution::kParallel;
    write_benchmark_csv(c1, run_benchmark(cases, policies, opt), false);
    opt.execution = Execution::kSerial;
    write_benchmark_csv(c2, run_benchmark(cases, policies, opt), false);
    if (c1.str() != c2.str()) problems.push_back("benchmark csv differs");

    GeneratorConfig mid;
    mid.n_robots = 6;
    mid.n_tasks = 40;
    mid.n_precedence = 8;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto inst = generate_instance(mid, seed);
      const RandomRewardPolicy base(seed);
      const RolloutConfig cfg{0.05, 8, seed};
      const auto s = sampled_rollouts(inst, base, cfg, Execution::kSerial);
      const auto p = sampled_rollouts(inst, base, cfg, Execution::kParallel);
      if (schedule_to_text(s.best.schedule) != schedule_to_text(p.best.schedule) ||
          s.makespans != p.makespans)
        problems.push_back("rollouts differ for seed " + std::to_string(seed));
      if (instance_to_text(inst) != instance_to_text(generate_instance(mid, seed)))
        problems.push_back("generator differs for seed " + std::to_string(seed));
    }
    std::string detail = fmt("%zu dataset files, %zu csv bytes compared", a.size(), c1.str().size());
    for (const auto& p : problems) detail += " | " + p;
    return Outcome{problems.empty(), detail};
  });

  std::printf("%s\n", failures == 0 ? "ALL PASS" : "SOME CRITERIA FAILED");
  return failures == 0 ? 0 : 1;
}
