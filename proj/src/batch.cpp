#include "mrta/batch.hpp"

#include <exception>
#include <omp.h>

namespace mrta {

std::string to_string(Execution execution) {
  return execution == Execution::kSerial ? "serial" : "parallel";
}

void for_each_index(std::size_t count, Execution execution,
                    const std::function<void(std::size_t)>& body, int max_threads) {
  std::vector<std::exception_ptr> errors(count);
  if (execution == Execution::kSerial) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    const int threads = max_threads > 0 ? max_threads : omp_get_max_threads();
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<ProblemInstance> generate_batch(const GeneratorConfig& config,
                                            const std::vector<std::uint64_t>& seeds,
                                            Execution execution, int max_threads) {
  std::vector<ProblemInstance> out(seeds.size());
  for_each_index(
      seeds.size(), execution,
      [&](std::size_t i) { out[i] = generate_instance(config, seeds[i]); }, max_threads);
  return out;
}

std::vector<SolverResult> solve_batch(const std::vector<ProblemInstance>& instances,
                                      double time_limit_seconds, Execution execution,
                                      int max_threads) {
  std::vector<SolverResult> out(instances.size());
  for_each_index(
      instances.size(), execution,
      [&](std::size_t i) { out[i] = solve_optimal(instances[i], time_limit_seconds); },
      max_threads);
  return out;
}

}  // namespace mrta
