#pragma once

// Multi-step workflows composed from the module operations, such as building
// an expert dataset or preparing benchmark cases.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mrta/batch.hpp"
#include "mrta/benchmark.hpp"
#include "mrta/dataset_io.hpp"

namespace mrta {

struct DatasetRequest {
  GeneratorConfig generator;
  std::uint64_t seed = 0;       // instance k uses seed + k
  std::size_t count = 1000;
  double gamma = kDefaultGamma;
  double time_limit = 60.0;     // seconds per instance
  Execution execution = Execution::kParallel;
  int max_threads = 0;
};

struct DatasetBuildReport {
  DatasetManifest manifest;
  std::size_t optimal = 0;
  std::size_t timed_out = 0;
};

// Layout under `dir`: manifest.json, instances/, schedules/, tensors/ and
// timing.json. Everything except timing.json is a pure function of the request.
DatasetBuildReport build_dataset(const DatasetRequest& request, const std::filesystem::path& dir);

struct DatasetReplaySummary {
  std::size_t checked = 0;
  std::size_t reproduced = 0;
  std::vector<std::pair<std::string, ReplayReport>> failures;

  double fidelity() const {
    return checked == 0 ? 1.0 : static_cast<double>(reproduced) / static_cast<double>(checked);
  }
};

// Replays every included record of the dataset in `dir` with the manifest's gamma.
DatasetReplaySummary replay_dataset(const std::filesystem::path& dir,
                                    Execution execution = Execution::kSerial,
                                    int max_threads = 0);

// Included dataset records as benchmark cases, with their expert schedules.
std::vector<BenchmarkCase> load_dataset_cases(const std::filesystem::path& dir);

// Parses "NxM" or "NxMxP" (robots x tasks x precedence edges). Without P the
// edge count is 3 for M <= 10 and M / 5 otherwise.
GeneratorConfig parse_size(const std::string& text);

// Generates `count` instances for `config` (seeds seed, seed+1, ...) and
// optionally solves them to attach expert schedules. Cases whose solve does
// not reach optimality keep no expert.
std::vector<BenchmarkCase> generate_cases(const GeneratorConfig& config, std::uint64_t seed,
                                          std::size_t count, bool with_expert,
                                          double time_limit, Execution execution,
                                          int max_threads = 0);

}  // namespace mrta
