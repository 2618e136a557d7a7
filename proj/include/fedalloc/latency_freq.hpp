#pragma once

#include <optional>
#include <vector>

#include "fedalloc/model.hpp"

namespace fedalloc {

struct LatencyFreqSolution {
  double latency_bound = 0;         // T* [s]
  std::vector<double> frequencies;  // [org] [cycles/s]; 0 for orgs without data
  double t_min = 0;                 // smallest feasible T [s]
};

struct LatencyOptions {
  // fallback bound for the alpha = 0 case, where the objective keeps
  // improving as T grows; without it that case is an error
  std::optional<double> t_cap{};
  double rel_tol = 1e-13;
  int max_iterations = 200;
};

// Smallest latency bound any frequency assignment can meet: every org runs
// at its maximum frequency.
double compute_t_min(const Scenario& scenario, const std::vector<double>& receive_times,
                     const std::vector<double>& upload_times);

// Reduced single-variable objective in T once each org's frequency is set to
// the minimum meeting the bound.
double latency_objective(double t, const Scenario& scenario,
                         const std::vector<double>& receive_times,
                         const std::vector<double>& upload_times, double alpha, double rho);

// First derivative of the reduced objective; strictly increasing in T.
// Throws std::domain_error at or below any pole.
double g_of_t(double t, const Scenario& scenario, const std::vector<double>& receive_times,
              const std::vector<double>& upload_times, double alpha, double rho);

// Core solver on precomputed upload times.
LatencyFreqSolution solve_latency_freq(const Scenario& scenario,
                                       const std::vector<double>& receive_times,
                                       const std::vector<double>& upload_times, double alpha,
                                       double rho, const LatencyOptions& opts = {});

// Convenience wrapper deriving upload times from powers and the subcarrier
// assignment.
LatencyFreqSolution solve_latency_freq(const Scenario& scenario,
                                       const std::vector<double>& powers,
                                       const std::vector<int>& assignment,
                                       const std::vector<double>& receive_times, double alpha,
                                       double rho, const LatencyOptions& opts = {});

}  // namespace fedalloc
