#include "fedalloc/subcarrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "thread_util.hpp"

namespace fedalloc {

namespace {

struct EntryResult {
  double value;
  double power;
  uint8_t feasible;
};

EntryResult solve_entry(const Scenario& scenario, double latency_bound,
                        const std::vector<double>& frequencies,
                        const std::vector<double>& receive_times,
                        const std::vector<int>* warm_assignment,
                        const std::vector<double>* warm_powers, double alpha, double rho,
                        const CostMatrixOptions& opts, int j, int n) {
  const auto& params = scenario.params;
  const auto& org = scenario.orgs[j];
  const double gain = org.uplink_gains[n];
  const double org_data = org.total_data();

  if (opts.fixed_power) {
    const double p = *opts.fixed_power;
    const auto prob = make_power_problem(params, org_data, gain, p, p, alpha, rho, opts.sca);
    return {objective_h(p, prob), p, 1};
  }

  const double budget =
      upload_budget(latency_bound, receive_times[j], org_data, frequencies[j], params);
  const auto p_required = min_feasible_power(budget, gain, params);
  // the warm pair sits exactly on its own bound; tolerate the rounding
  if (!p_required || *p_required > params.sbs_max_power * (1.0 + 1e-12))
    return {opts.penalty, 0.0, 0};

  const double p_lo = std::min(*p_required, params.sbs_max_power);
  const double p_hi = params.sbs_max_power;
  double p_init = p_hi;
  if (warm_assignment && warm_powers && (*warm_assignment)[j] == n)
    p_init = std::clamp((*warm_powers)[j], p_lo, p_hi);

  const auto prob = make_power_problem(params, org_data, gain, p_lo, p_hi, alpha, rho, opts.sca);
  const auto result = sca_optimize(prob, p_init);
  return {result.objective, result.power, 1};
}

}  // namespace

CostMatrix build_cost_matrix(const Scenario& scenario, double latency_bound,
                             const std::vector<double>& frequencies,
                             const std::vector<double>& receive_times,
                             const std::vector<int>* warm_assignment,
                             const std::vector<double>* warm_powers, double alpha, double rho,
                             const CostMatrixOptions& opts) {
  const int j_count = scenario.params.num_orgs;
  CostMatrix matrix;
  matrix.size = j_count;
  matrix.values.resize(static_cast<size_t>(j_count) * j_count);
  matrix.powers.resize(static_cast<size_t>(j_count) * j_count);
  matrix.feasible.resize(static_cast<size_t>(j_count) * j_count);

  const int total = j_count * j_count;
  if (opts.parallel) {
    const int threads = detail::resolve_threads();
    (void)threads;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int idx = 0; idx < total; ++idx) {
      const int j = idx / j_count;
      const int n = idx % j_count;
      const auto e = solve_entry(scenario, latency_bound, frequencies, receive_times,
                                 warm_assignment, warm_powers, alpha, rho, opts, j, n);
      matrix.values[idx] = e.value;
      matrix.powers[idx] = e.power;
      matrix.feasible[idx] = e.feasible;
    }
  } else {
    for (int idx = 0; idx < total; ++idx) {
      const int j = idx / j_count;
      const int n = idx % j_count;
      const auto e = solve_entry(scenario, latency_bound, frequencies, receive_times,
                                 warm_assignment, warm_powers, alpha, rho, opts, j, n);
      matrix.values[idx] = e.value;
      matrix.powers[idx] = e.power;
      matrix.feasible[idx] = e.feasible;
    }
  }
  return matrix;
}

CostMatrix build_cost_matrix_serial(const Scenario& scenario, double latency_bound,
                                    const std::vector<double>& frequencies,
                                    const std::vector<double>& receive_times,
                                    const std::vector<int>* warm_assignment,
                                    const std::vector<double>* warm_powers, double alpha,
                                    double rho, CostMatrixOptions opts) {
  opts.parallel = false;
  return build_cost_matrix(scenario, latency_bound, frequencies, receive_times, warm_assignment,
                           warm_powers, alpha, rho, opts);
}

Assignment hungarian(const std::vector<double>& cost, int n) {
  if (n <= 0 || cost.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("hungarian: matrix must be square and non-empty");
  for (double c : cost) {
    if (!std::isfinite(c) || c < 0)
      throw std::invalid_argument("hungarian: entries must be finite and nonnegative");
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int virt = n;                    // virtual column that seeds each augmenting path
  std::vector<double> u(n, 0.0);         // row potentials
  std::vector<double> v(n + 1, 0.0);     // column potentials (incl. virtual)
  std::vector<int> matched(n + 1, -1);   // column -> row
  std::vector<double> minv(n + 1);
  std::vector<int> way(n + 1);
  std::vector<char> used(n + 1);

  for (int row = 0; row < n; ++row) {
    matched[virt] = row;
    int j0 = virt;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = matched[j0];
      double delta = kInf;
      int j1 = -1;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 * n + j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[matched[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (matched[j0] != -1);
    // augment back along the alternating path
    do {
      const int j1 = way[j0];
      matched[j0] = matched[j1];
      j0 = j1;
    } while (j0 != virt);
  }

  Assignment out;
  out.mapping.assign(n, -1);
  for (int j = 0; j < n; ++j) out.mapping[matched[j]] = j;
  for (int i = 0; i < n; ++i) out.total_cost += cost[i * n + out.mapping[i]];
  return out;
}

Assignment hungarian(const CostMatrix& matrix) { return hungarian(matrix.values, matrix.size); }

}  // namespace fedalloc
