#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fedalloc/model.hpp"
#include "fedalloc/power_sca.hpp"

namespace fedalloc {

// J x J matrix of per-(org, subcarrier) optimized costs and the powers that
// achieve them. Infeasible pairs carry the penalty value instead.
struct CostMatrix {
  int size = 0;
  std::vector<double> values;    // row-major, [org][subcarrier]
  std::vector<double> powers;    // optimal power per pair; 0 when infeasible
  std::vector<uint8_t> feasible; // 1 when the pair can meet the latency bound

  double value(int j, int n) const { return values[j * size + n]; }
  double power(int j, int n) const { return powers[j * size + n]; }
  bool is_feasible(int j, int n) const { return feasible[j * size + n] != 0; }
};

struct Assignment {
  std::vector<int> mapping;  // org -> subcarrier, a permutation
  double total_cost = 0;
};

struct CostMatrixOptions {
  double penalty = 1e12;  // stands in for infeasible pairs; large but finite
  ScaOptions sca{};
  // force every pair to this power and skip both the latency screen and the
  // SCA solve (fixed-power schemes)
  std::optional<double> fixed_power{};
  bool parallel = true;
};

// Optimizes power for every (org, subcarrier) pair at the given latency
// bound and frequencies. Warm starts: org j's current subcarrier reuses its
// current power as the initial point; all other pairs start from the cap.
CostMatrix build_cost_matrix(const Scenario& scenario, double latency_bound,
                             const std::vector<double>& frequencies,
                             const std::vector<double>& receive_times,
                             const std::vector<int>* warm_assignment,
                             const std::vector<double>* warm_powers, double alpha, double rho,
                             const CostMatrixOptions& opts = {});

// Single-threaded reference; identical output to the parallel build.
CostMatrix build_cost_matrix_serial(const Scenario& scenario, double latency_bound,
                                    const std::vector<double>& frequencies,
                                    const std::vector<double>& receive_times,
                                    const std::vector<int>* warm_assignment,
                                    const std::vector<double>* warm_powers, double alpha,
                                    double rho, CostMatrixOptions opts = {});

// Exact minimum-cost perfect matching on a square matrix (potentials +
// shortest augmenting paths, O(n^3)). Rows are processed in order, so ties
// resolve toward lower org indices. Throws std::invalid_argument on
// non-square or non-finite input.
Assignment hungarian(const std::vector<double>& cost, int n);
Assignment hungarian(const CostMatrix& matrix);

}  // namespace fedalloc
