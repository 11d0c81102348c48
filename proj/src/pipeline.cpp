#include "mrta/pipeline.hpp"

#include <cstdio>
#include <regex>

#include "json.hpp"

namespace mrta {
namespace {

std::string record_id(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "inst_%06zu", k);
  return buf;
}

}  // namespace

DatasetBuildReport build_dataset(const DatasetRequest& request, const std::filesystem::path& dir) {
  request.generator.validate();
  check_gamma(request.gamma);
  std::vector<std::uint64_t> seeds(request.count);
  for (std::size_t k = 0; k < request.count; ++k) seeds[k] = request.seed + k;
  const auto instances =
      generate_batch(request.generator, seeds, request.execution, request.max_threads);

  DatasetBuildReport report;
  DatasetManifest& manifest = report.manifest;
  manifest.generator = request.generator;
  manifest.seed_start = request.seed;
  manifest.count = request.count;
  manifest.gamma = request.gamma;
  manifest.time_limit = request.time_limit;
  manifest.records.resize(request.count);
  std::vector<double> wall(request.count, 0.0);

  for_each_index(
      request.count, request.execution,
      [&](std::size_t k) {
        const std::string id = record_id(k);
        ManifestRecord& rec = manifest.records[k];
        rec.id = id;
        rec.seed = seeds[k];
        rec.instance_file = "instances/" + id + ".json";
        write_instance(dir / rec.instance_file, instances[k]);
        const SolverResult solved = solve_optimal(instances[k], request.time_limit);
        wall[k] = solved.wall_time;
        rec.status = solved.status;
        rec.explored_nodes = solved.explored_nodes;
        if (solved.status == SolverStatus::kInfeasible) return;
        rec.makespan = solved.schedule.makespan;
        rec.schedule_file = "schedules/" + id + ".json";
        write_schedule(dir / rec.schedule_file, solved.schedule);
        if (solved.status != SolverStatus::kOptimal) return;
        DecisionTensorSet set;
        set.instance_id = id;
        set.gamma = request.gamma;
        set.n_robots = instances[k].num_robots();
        set.n_tasks = instances[k].num_tasks();
        set.points = build_decision_tensors(solved.schedule, instances[k], request.gamma);
        rec.decision_points = set.points.size();
        rec.tensor_file = "tensors/" + id + ".json";
        write_decision_tensors(dir / rec.tensor_file, set);
        rec.included = true;
      },
      request.max_threads);

  for (const auto& rec : manifest.records) {
    if (rec.status == SolverStatus::kOptimal) ++report.optimal;
    if (rec.status == SolverStatus::kFeasibleTimeout) ++report.timed_out;
  }
  write_manifest(dir / "manifest.json", manifest);

  nlohmann::json timing = nlohmann::json::object();
  timing["note"] = "solver wall times in seconds; not reproducible across runs";
  nlohmann::json per = nlohmann::json::object();
  for (std::size_t k = 0; k < request.count; ++k) per[manifest.records[k].id] = wall[k];
  timing["wall_time"] = std::move(per);
  write_text_atomic(dir / "timing.json", timing.dump(1) + "\n");
  return report;
}

DatasetReplaySummary replay_dataset(const std::filesystem::path& dir, Execution execution,
                                    int max_threads) {
  const DatasetManifest manifest = read_manifest(dir / "manifest.json");
  std::vector<const ManifestRecord*> included;
  for (const auto& rec : manifest.records)
    if (rec.included) included.push_back(&rec);
  std::vector<ReplayReport> reports(included.size());
  for_each_index(
      included.size(), execution,
      [&](std::size_t k) {
        const ProblemInstance inst = read_instance(dir / included[k]->instance_file);
        const Schedule schedule = read_schedule(dir / included[k]->schedule_file);
        reports[k] = replay_schedule(schedule, inst, manifest.gamma);
      },
      max_threads);
  DatasetReplaySummary summary;
  for (std::size_t k = 0; k < included.size(); ++k) {
    ++summary.checked;
    if (reports[k].reproduced) {
      ++summary.reproduced;
    } else {
      summary.failures.emplace_back(included[k]->id, reports[k]);
    }
  }
  return summary;
}

std::vector<BenchmarkCase> load_dataset_cases(const std::filesystem::path& dir) {
  const DatasetManifest manifest = read_manifest(dir / "manifest.json");
  std::vector<BenchmarkCase> cases;
  for (const auto& rec : manifest.records) {
    if (!rec.included) continue;
    BenchmarkCase c;
    c.instance_id = rec.id;
    c.seed = rec.seed;
    c.instance = read_instance(dir / rec.instance_file);
    c.expert = read_schedule(dir / rec.schedule_file);
    cases.push_back(std::move(c));
  }
  return cases;
}

GeneratorConfig parse_size(const std::string& text) {
  static const std::regex pattern(R"((\d+)x(\d+)(?:x(\d+))?)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw InvalidInput("size '" + text + "' is not of the form NxM or NxMxP");
  }
  GeneratorConfig c;
  c.n_robots = std::stoul(m[1].str());
  c.n_tasks = std::stoul(m[2].str());
  c.n_precedence = m[3].matched ? std::stoul(m[3].str()) : (c.n_tasks <= 10 ? 3 : c.n_tasks / 5);
  c.validate();
  return c;
}

std::vector<BenchmarkCase> generate_cases(const GeneratorConfig& config, std::uint64_t seed,
                                          std::size_t count, bool with_expert,
                                          double time_limit, Execution execution,
                                          int max_threads) {
  std::vector<BenchmarkCase> cases(count);
  for_each_index(
      count, execution,
      [&](std::size_t k) {
        BenchmarkCase& c = cases[k];
        c.seed = seed + k;
        c.instance_id = std::to_string(config.n_robots) + "x" + std::to_string(config.n_tasks) +
                        "x" + std::to_string(config.n_precedence) + "-" + std::to_string(k);
        c.instance = generate_instance(config, c.seed);
        if (with_expert) {
          const SolverResult solved = solve_optimal(c.instance, time_limit);
          if (solved.status == SolverStatus::kOptimal) {
            c.expert = solved.schedule;
            c.expert_wall_ms = solved.wall_time * 1000.0;
          }
        }
      },
      max_threads);
  return cases;
}

}  // namespace mrta
