#pragma once

// Coarse-grained parallel kernels. Work items are independent instances or
// rollouts, so each kernel has a serial reference path and an OpenMP path that
// must produce identical results.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mrta/exact_solver.hpp"
#include "mrta/generator.hpp"

namespace mrta {

enum class Execution { kSerial, kParallel };

std::string to_string(Execution execution);

// Calls body(i) for i in [0, count). With kParallel the calls are spread over
// OpenMP threads (max_threads <= 0 keeps the OpenMP default). If any call
// throws, the exception of the lowest failing index is rethrown after all
// calls finished.
void for_each_index(std::size_t count, Execution execution,
                    const std::function<void(std::size_t)>& body, int max_threads = 0);

std::vector<ProblemInstance> generate_batch(const GeneratorConfig& config,
                                            const std::vector<std::uint64_t>& seeds,
                                            Execution execution, int max_threads = 0);

std::vector<SolverResult> solve_batch(const std::vector<ProblemInstance>& instances,
                                      double time_limit_seconds, Execution execution,
                                      int max_threads = 0);

}  // namespace mrta
