#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedalloc/model.hpp"
#include "fedalloc/power_sca.hpp"

namespace fedalloc {

enum class Scheme {
  Proposed,           // joint bandwidth / frequency / power / subcarrier optimization
  EqualBandwidth,     // sensors split the SBS bandwidth evenly
  LearningGuaranteed, // optimizes the learning cost alone, then re-weighted
  GreedySubcarrier,   // subcarriers fixed by maximum gain sum
  SystemGuaranteed,   // optimizes with the system weight pushed near 1
  TimeBiased,         // maximum frequency and power, subcarriers only
};

std::string scheme_name(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();

struct SolverOptions {
  // absolute change in the objective that counts as converged; 0 picks
  // 1e-6 of the first iteration's objective
  double outer_tolerance = 0;
  int max_outer_iterations = 50;
  ScaOptions sca{};
  double rho_system_guaranteed = 0.999;
  double penalty = 1e12;
  uint64_t seed = 0;  // reserved; all schemes are deterministic
  std::optional<double> t_cap{};
  bool parallel_cost_matrix = true;
};

// Outer loop: closed-form bandwidths once, then alternate the latency /
// frequency step with the power / subcarrier step until the objective
// settles. The objective trace is non-increasing.
SolveResult joint_solve(const Scenario& scenario, const SolverOptions& opts = {});

// Runs one of the benchmark schemes (or Proposed). Modified-weight schemes
// optimize under their own weights; the returned cost is always evaluated
// under the scenario's true weights, while the trace tracks the objective
// the scheme actually optimized.
SolveResult solve(Scheme scheme, const Scenario& scenario, const SolverOptions& opts = {});

}  // namespace fedalloc
