// mrta: command-line front end over the library.
//
// Exit codes: 0 success, 1 usage error, 2 data or model error,
// 3 solver stopped at its time limit, 4 replay check below threshold.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "mrta/benchmark.hpp"
#include "mrta/dataset_io.hpp"
#include "mrta/pipeline.hpp"
#include "mrta/policies.hpp"

namespace fs = std::filesystem;
using namespace mrta;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitReplay = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  int threads = 0;
  bool serial = false;
  Execution execution() const { return serial ? Execution::kSerial : Execution::kParallel; }
};

struct GenArgs {
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string out = "dataset";
  std::string size;
  std::string generator_file;
  double gamma = kDefaultGamma;
  double time_limit = 60.0;
};

struct SolveArgs {
  std::string instance;
  std::string out;
  double time_limit = 60.0;
};

struct ExtractArgs {
  std::string instance;
  std::string schedule;
  std::string out;
  std::string id;
  double gamma = kDefaultGamma;
};

struct SimArgs {
  std::string instance;
  std::string policy = "greedy";
  std::string schedule;
  std::string rewards;
  std::string out;
  std::uint64_t seed = 0;
  double gamma = kDefaultGamma;
  std::size_t rollouts = 1;
  double sigma = 0.05;
};

struct BenchArgs {
  std::vector<std::string> policies{"greedy", "expert-replay"};
  std::vector<std::string> sizes{"3x8"};
  std::size_t count = 20;
  std::uint64_t seed = 0;
  std::string dataset;
  std::string out = "benchmark";
  std::string expert = "auto";
  double time_limit = 60.0;
  double gamma = kDefaultGamma;
  std::size_t rollouts = 10;
  double sigma = 0.05;
  bool no_timing = false;
};

struct ReplayArgs {
  std::string dataset = "dataset";
  double min_fidelity = 0.99;
};

void print_status(const std::string& what) { std::cerr << "mrta: " << what << '\n'; }

int cmd_gen_dataset(const GenArgs& a, const Common& c) {
  DatasetRequest req;
  if (!a.generator_file.empty()) {
    if (!a.size.empty()) throw UsageError("--size and --generator are mutually exclusive");
    req.generator = generator_config_from_text(read_text(a.generator_file), a.generator_file);
  } else if (!a.size.empty()) {
    req.generator = parse_size(a.size);
  }
  req.seed = a.seed;
  req.count = a.n;
  req.gamma = a.gamma;
  req.time_limit = a.time_limit;
  req.execution = c.execution();
  req.max_threads = c.threads;
  const auto report = build_dataset(req, a.out);
  std::cout << "instances: " << a.n << "\noptimal: " << report.optimal
            << "\ntimed_out: " << report.timed_out << "\nmanifest: "
            << (fs::path(a.out) / "manifest.json").string() << '\n';
  return 0;
}

int cmd_solve(const SolveArgs& a) {
  const ProblemInstance inst = read_instance(a.instance);
  const SolverResult r = solve_optimal(inst, a.time_limit);
  std::cout << std::setprecision(17) << "status: " << to_string(r.status)
            << "\nexplored_nodes: " << r.explored_nodes << "\nwall_time: " << r.wall_time << '\n';
  if (r.status == SolverStatus::kInfeasible) {
    print_status("no feasible schedule found within the time limit");
    return kExitTimeout;
  }
  std::cout << "makespan: " << r.schedule.makespan << '\n';
  if (!a.out.empty()) write_schedule(a.out, r.schedule);
  return r.status == SolverStatus::kOptimal ? 0 : kExitTimeout;
}

int cmd_extract(const ExtractArgs& a) {
  const ProblemInstance inst = read_instance(a.instance);
  const Schedule schedule = read_schedule(a.schedule);
  DecisionTensorSet set;
  set.instance_id = a.id.empty() ? fs::path(a.instance).stem().string() : a.id;
  set.gamma = a.gamma;
  set.n_robots = inst.num_robots();
  set.n_tasks = inst.num_tasks();
  set.points = build_decision_tensors(schedule, inst, a.gamma);
  write_decision_tensors(a.out, set);
  std::cout << "decision_points: " << set.points.size() << '\n';
  return 0;
}

std::vector<RewardMatrix> load_reward_dir(const fs::path& dir, const ProblemInstance& inst) {
  std::vector<RewardMatrixFile> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(read_reward_matrix(e.path(), &inst));
  }
  if (files.empty()) throw DataError(dir.string() + ": no reward matrix files");
  std::sort(files.begin(), files.end(), [](const auto& x, const auto& y) {
    return x.decision_index < y.decision_index;
  });
  std::vector<RewardMatrix> out;
  for (std::size_t k = 0; k < files.size(); ++k) {
    if (files[k].decision_index != k) {
      throw DataError(dir.string() + ": decision indices must be 0.." +
                      std::to_string(files.size() - 1) + " without gaps");
    }
    out.push_back(std::move(files[k].rewards));
  }
  return out;
}

int cmd_simulate(const SimArgs& a, const Common& c) {
  const ProblemInstance inst = read_instance(a.instance);
  std::unique_ptr<Policy> policy;
  if (a.policy == "greedy") {
    policy = std::make_unique<GreedyPolicy>();
  } else if (a.policy == "random") {
    policy = std::make_unique<RandomRewardPolicy>(a.seed);
  } else if (a.policy == "zero") {
    policy = std::make_unique<ZeroRewardPolicy>();
  } else if (a.policy == "expert-replay") {
    if (a.schedule.empty()) throw UsageError("--policy expert-replay needs --schedule");
    policy = std::make_unique<ExpertReplayPolicy>(read_schedule(a.schedule), inst, a.gamma);
  } else if (a.policy == "file") {
    if (a.rewards.empty()) throw UsageError("--policy file needs --rewards DIR");
    policy = std::make_unique<FileRewardPolicy>(load_reward_dir(a.rewards, inst));
  } else {
    throw UsageError("unknown policy '" + a.policy + "'");
  }
  if (a.rollouts > 1 && policy->flavor() != PolicyFlavor::kReward) {
    throw UsageError("--rollouts needs a reward-based policy, not '" + a.policy + "'");
  }

  SimulationResult sim;
  if (a.rollouts > 1) {
    RolloutResult rr = sampled_rollouts(inst, *policy, RolloutConfig{a.sigma, a.rollouts, a.seed},
                                        c.execution());
    std::cout << "best_rollout: " << rr.best_rollout << '\n';
    sim = std::move(rr.best);
  } else {
    sim = simulate(inst, *policy);
  }
  const auto violations = validate_schedule(sim.schedule, inst);
  std::cout << std::setprecision(17) << "makespan: " << sim.schedule.makespan
            << "\ndecisions: " << sim.decisions << "\nforced_decisions: " << sim.forced_decisions
            << "\nviolations: " << violations.size() << '\n';
  for (const auto& v : violations) print_status(to_string(v.kind) + ": " + v.message);
  if (!a.out.empty()) write_schedule(a.out, sim.schedule);
  return violations.empty() ? 0 : kExitData;
}

int cmd_benchmark(const BenchArgs& a, const Common& c) {
  if (a.expert != "auto" && a.expert != "always" && a.expert != "never") {
    throw UsageError("--expert must be auto, always or never");
  }
  const bool needs_expert = std::any_of(a.policies.begin(), a.policies.end(), policy_needs_expert);
  const bool rollout_policy = std::any_of(a.policies.begin(), a.policies.end(), [](const auto& p) {
    return p == "sampled" || p == "sampled-random";
  });
  if (a.rollouts != 10 && !rollout_policy) {
    throw UsageError("--rollouts only applies to the sampled and sampled-random policies");
  }
  if (needs_expert && a.expert == "never") {
    throw UsageError("the requested policies need expert schedules but --expert never was given");
  }

  std::vector<BenchmarkCase> cases;
  if (!a.dataset.empty()) {
    cases = load_dataset_cases(a.dataset);
  } else {
    for (const auto& size : a.sizes) {
      const GeneratorConfig g = parse_size(size);
      const bool small = g.n_robots <= 4 && g.n_tasks <= 10;
      const bool solve = a.expert == "always" || (a.expert == "auto" && (needs_expert || small));
      auto batch = generate_cases(g, a.seed, a.count, solve, a.time_limit, c.execution(), c.threads);
      std::move(batch.begin(), batch.end(), std::back_inserter(cases));
    }
  }

  BenchmarkOptions opt;
  opt.gamma = a.gamma;
  opt.rollouts = RolloutConfig{a.sigma, a.rollouts, a.seed};
  opt.execution = c.execution();
  opt.max_threads = c.threads;
  const auto rows = run_benchmark(cases, a.policies, opt);

  fs::create_directories(a.out);
  std::ostringstream csv, summary;
  write_benchmark_csv(csv, rows, !a.no_timing);
  write_summary_csv(summary, summarize(rows), !a.no_timing);
  write_text_atomic(fs::path(a.out) / "benchmark.csv", csv.str());
  write_text_atomic(fs::path(a.out) / "summary.csv", summary.str());
  std::cout << summary.str();
  std::size_t violations = 0;
  for (const auto& r : rows) violations += r.violations;
  return violations == 0 ? 0 : kExitData;
}

int cmd_replay(const ReplayArgs& a, const Common& c) {
  const auto s = replay_dataset(a.dataset, c.execution(), c.threads);
  for (const auto& [id, report] : s.failures) std::cout << "miss " << id << ": " << report.diagnostic << '\n';
  std::cout << "replayed: " << s.reproduced << "/" << s.checked << "\nfidelity: " << std::fixed
            << std::setprecision(1) << 100.0 * s.fidelity() << "%\n";
  return s.fidelity() + 1e-12 >= a.min_fidelity ? 0 : kExitReplay;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-robot task allocation: datasets, solver, simulator, benchmarks"};
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--threads", common.threads, "OpenMP threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--serial", common.serial, "Run batch work on a single thread");

  GenArgs gen;
  auto* g = app.add_subcommand("gen-dataset", "Generate instances, expert schedules and reward tensors");
  g->add_option("--n", gen.n, "Number of instances")->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Seed of the first instance; instance k uses seed + k");
  g->add_option("--out", gen.out, "Output directory");
  g->add_option("--size", gen.size, "NxM or NxMxP (robots x tasks x precedence edges)");
  g->add_option("--generator", gen.generator_file, "Generator config JSON file")->check(CLI::ExistingFile);
  g->add_option("--gamma", gen.gamma, "Reward discount in (0, 1]");
  g->add_option("--time-limit", gen.time_limit, "Solver time limit per instance (s)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve one instance to optimality");
  s->add_option("--instance", solve.instance)->required()->check(CLI::ExistingFile);
  s->add_option("--out", solve.out, "Schedule output file");
  s->add_option("--time-limit", solve.time_limit, "Seconds");

  ExtractArgs ext;
  auto* e = app.add_subcommand("extract-rewards", "Build decision tensors from an expert schedule");
  e->add_option("--instance", ext.instance)->required()->check(CLI::ExistingFile);
  e->add_option("--schedule", ext.schedule)->required()->check(CLI::ExistingFile);
  e->add_option("--out", ext.out, "Tensor output file")->required();
  e->add_option("--id", ext.id, "Instance id stored in the file (default: instance file stem)");
  e->add_option("--gamma", ext.gamma);

  SimArgs sim;
  auto* m = app.add_subcommand("simulate", "Execute an instance under a policy");
  m->add_option("--instance", sim.instance)->required()->check(CLI::ExistingFile);
  m->add_option("--policy", sim.policy, "greedy | random | zero | expert-replay | file");
  m->add_option("--schedule", sim.schedule, "Expert schedule (expert-replay)")->check(CLI::ExistingFile);
  m->add_option("--rewards", sim.rewards, "Directory of reward matrix files (file)")
      ->check(CLI::ExistingDirectory);
  m->add_option("--out", sim.out, "Schedule output file");
  m->add_option("--seed", sim.seed);
  m->add_option("--gamma", sim.gamma);
  m->add_option("--rollouts", sim.rollouts, "Best of this many noisy rollouts")->check(CLI::PositiveNumber);
  m->add_option("--sigma", sim.sigma, "Noise scale relative to the reward spread");

  BenchArgs bench;
  auto* b = app.add_subcommand("benchmark", "Compare policies and write CSV tables");
  b->add_option("--policies", bench.policies)->delimiter(',');
  b->add_option("--sizes", bench.sizes, "Comma-separated NxM[xP]")->delimiter(',');
  b->add_option("--count", bench.count, "Instances per size")->check(CLI::PositiveNumber);
  b->add_option("--seed", bench.seed);
  b->add_option("--dataset", bench.dataset, "Use an existing dataset instead of --sizes")
      ->check(CLI::ExistingDirectory);
  b->add_option("--out", bench.out, "Output directory for benchmark.csv and summary.csv");
  b->add_option("--expert", bench.expert, "Solve for expert schedules: auto | always | never");
  b->add_option("--time-limit", bench.time_limit);
  b->add_option("--gamma", bench.gamma);
  b->add_option("--rollouts", bench.rollouts)->check(CLI::PositiveNumber);
  b->add_option("--sigma", bench.sigma);
  b->add_flag("--no-timing", bench.no_timing, "Leave timing columns empty (reproducible output)");

  ReplayArgs replay;
  auto* r = app.add_subcommand("replay-check", "Replay expert rewards of a dataset");
  r->add_option("--dataset", replay.dataset)->check(CLI::ExistingDirectory);
  r->add_option("--min-fidelity", replay.min_fidelity, "Exit 4 below this fraction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*g) return cmd_gen_dataset(gen, common);
    if (*s) return cmd_solve(solve);
    if (*e) return cmd_extract(ext);
    if (*m) return cmd_simulate(sim, common);
    if (*b) return cmd_benchmark(bench, common);
    if (*r) return cmd_replay(replay, common);
  } catch (const UsageError& err) {
    print_status(err.what());
    return kExitUsage;
  } catch (const std::exception& err) {
    print_status(err.what());
    return kExitData;
  }
  return kExitUsage;
}
