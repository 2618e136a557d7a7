// Times the OpenMP paths against their serial references: the per-pair power
// cost matrix and the Monte Carlo trial runner.

#include <chrono>
#include <cstdio>
#include <vector>

#include "fedalloc/bandwidth.hpp"
#include "fedalloc/latency_freq.hpp"
#include "fedalloc/simharness.hpp"
#include "fedalloc/subcarrier.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fedalloc;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double time_cost_matrix(const Scenario& scenario, bool parallel, int reps) {
  std::vector<double> receive_times;
  for (const auto& sol : optimal_bandwidth_all(scenario)) receive_times.push_back(sol.receive_time);
  std::vector<double> powers(scenario.orgs.size(), scenario.params.sbs_max_power);
  std::vector<int> assignment(scenario.orgs.size());
  for (size_t j = 0; j < assignment.size(); ++j) assignment[j] = static_cast<int>(j);
  const auto lf = solve_latency_freq(scenario, powers, assignment, receive_times,
                                     scenario.params.alpha, scenario.params.rho);

  CostMatrixOptions opts;
  opts.parallel = parallel;
  const auto start = std::chrono::steady_clock::now();
  double checksum = 0;
  for (int r = 0; r < reps; ++r) {
    const auto m = build_cost_matrix(scenario, lf.latency_bound, lf.frequencies, receive_times,
                                     &assignment, &powers, scenario.params.alpha,
                                     scenario.params.rho, opts);
    checksum += m.values[0];
  }
  (void)checksum;
  return seconds_since(start) / reps;
}

double time_sweep(const GeneratorConfig& config, bool parallel, int trials) {
  SweepSpec spec;
  spec.parameter = SweepParameter::Rho;
  spec.values = {config.rho};
  spec.trials = trials;
  spec.schemes = {Scheme::Proposed};
  const auto start = std::chrono::steady_clock::now();
  run_sweep(spec, config, 7, {}, parallel);
  return seconds_since(start);
}

}  // namespace

int main(int argc, char** argv) {
  int orgs = 20;
  int trials = 32;
  if (argc > 1) orgs = std::atoi(argv[1]);
  if (argc > 2) trials = std::atoi(argv[2]);

  GeneratorConfig config;
  config = apply_sweep_value(config, SweepParameter::OrgCount, orgs);

#ifdef _OPENMP
  const int threads = thread_cap() > 0 ? thread_cap() : omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("orgs=%d trials=%d threads=%d\n\n", orgs, trials, threads);

  // heavier uplink payload moves the power optima into the interior, so each
  // matrix entry runs a full line-search descent instead of jumping to the cap
  GeneratorConfig heavy = config;
  heavy.model_size_bits = 1e7;
  heavy.rho = 0.9;
  const Scenario scenario = generate_scenario(heavy, 7);
  const double cm_serial = time_cost_matrix(scenario, false, 20);
  const double cm_parallel = time_cost_matrix(scenario, true, 20);
  std::printf("cost matrix (%dx%d):  serial %.3f ms   parallel %.3f ms   speedup %.2fx\n", orgs,
              orgs, cm_serial * 1e3, cm_parallel * 1e3, cm_serial / cm_parallel);

  const double sw_serial = time_sweep(config, false, trials);
  const double sw_parallel = time_sweep(config, true, trials);
  std::printf("trial runner (%d trials): serial %.3f s    parallel %.3f s    speedup %.2fx\n",
              trials, sw_serial, sw_parallel, sw_serial / sw_parallel);
  return 0;
}
