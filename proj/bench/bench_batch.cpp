// Serial reference versus OpenMP batch kernels. One line per kernel with both
// wall times and a check that the two paths produced identical results.
//
// usage: bench_batch [instances] [rollouts] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "mrta/batch.hpp"
#include "mrta/policies.hpp"

using namespace mrta;

namespace {

template <class F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* kernel, double serial, double parallel, bool same) {
  std::printf("%-22s serial %10.1f ms   parallel %10.1f ms   speed-up %5.2fx   %s\n", kernel, serial,
              parallel, serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t count = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 64;
  const std::size_t rollouts = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 32;
  const int threads = argc > 3 ? std::atoi(argv[3]) : 0;
  std::printf("threads available: %d\n", threads > 0 ? threads : omp_get_max_threads());

  GeneratorConfig config;
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t k = 0; k < count; ++k) seeds[k] = k;
  const auto instances = generate_batch(config, seeds, Execution::kSerial);

  std::vector<SolverResult> a, b;
  const double s1 = time_ms([&] { a = solve_batch(instances, 60.0, Execution::kSerial); });
  const double p1 = time_ms([&] { b = solve_batch(instances, 60.0, Execution::kParallel, threads); });
  bool same = a.size() == b.size();
  for (std::size_t k = 0; same && k < a.size(); ++k) same = a[k].schedule == b[k].schedule;
  report("solve_optimal 3x8", s1, p1, same);

  GeneratorConfig large;
  large.n_robots = 20;
  large.n_tasks = 250;
  large.n_precedence = 50;
  std::vector<std::uint64_t> few(std::min<std::size_t>(count, 8));
  for (std::size_t k = 0; k < few.size(); ++k) few[k] = k;
  const auto big = generate_batch(large, few, Execution::kParallel, threads);
  std::vector<double> ms_a(big.size()), ms_b(big.size());
  auto greedy = [&](std::vector<double>& out) {
    return [&](std::size_t k) { out[k] = simulate(big[k], GreedyPolicy{}).schedule.makespan; };
  };
  const double s2 = time_ms([&] { for_each_index(big.size(), Execution::kSerial, greedy(ms_a)); });
  const double p2 =
      time_ms([&] { for_each_index(big.size(), Execution::kParallel, greedy(ms_b), threads); });
  report("greedy 20x250", s2, p2, ms_a == ms_b);

  GeneratorConfig mid;
  mid.n_robots = 6;
  mid.n_tasks = 40;
  mid.n_precedence = 8;
  const auto inst = generate_instance(mid, 1);
  const RandomRewardPolicy base(1);
  const RolloutConfig cfg{0.05, rollouts, 1};
  RolloutResult ra, rb;
  const double s3 = time_ms([&] { ra = sampled_rollouts(inst, base, cfg, Execution::kSerial); });
  const double p3 = time_ms([&] { rb = sampled_rollouts(inst, base, cfg, Execution::kParallel); });
  report("sampled rollouts 6x40", s3, p3, ra.makespans == rb.makespans);
  return 0;
}
