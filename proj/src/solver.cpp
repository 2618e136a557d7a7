#include "fedalloc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fedalloc/bandwidth.hpp"
#include "fedalloc/latency_freq.hpp"
#include "fedalloc/subcarrier.hpp"

namespace fedalloc {

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Proposed: return "proposed";
    case Scheme::EqualBandwidth: return "equal_bandwidth";
    case Scheme::LearningGuaranteed: return "learning_guaranteed";
    case Scheme::GreedySubcarrier: return "greedy_subcarrier";
    case Scheme::SystemGuaranteed: return "system_guaranteed";
    case Scheme::TimeBiased: return "time_biased";
  }
  throw std::invalid_argument("scheme_name: unknown scheme");
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : all_schemes())
    if (scheme_name(s) == name) return s;
  return std::nullopt;
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> schemes = {
      Scheme::Proposed,         Scheme::EqualBandwidth,   Scheme::LearningGuaranteed,
      Scheme::GreedySubcarrier, Scheme::SystemGuaranteed, Scheme::TimeBiased,
  };
  return schemes;
}

namespace {

struct EngineSetup {
  bool equal_bandwidth = false;
  bool fixed_assignment = false;   // keep the gain-greedy subcarriers
  bool max_power_and_freq = false; // pin F = f_max, P = p_max, assign once
  double rho_internal = 0;
};

// Assignment maximizing the gain sum (the greedy benchmark's rule).
std::vector<int> gain_greedy_assignment(const Scenario& scenario) {
  const int j_count = scenario.params.num_orgs;
  double max_gain = 0;
  for (const auto& org : scenario.orgs)
    for (double g : org.uplink_gains) max_gain = std::max(max_gain, g);
  std::vector<double> cost(static_cast<size_t>(j_count) * j_count);
  for (int j = 0; j < j_count; ++j)
    for (int n = 0; n < j_count; ++n)
      cost[j * j_count + n] = max_gain - scenario.orgs[j].uplink_gains[n];
  return hungarian(cost, j_count).mapping;
}

// One cost-matrix + Hungarian pass at the power cap, no latency screen.
// Initializes the iterative schemes and is the whole of the time-biased one;
// the latency step then adapts T to whatever uploads this produces, so the
// result is always feasible.
std::vector<int> fixed_power_assignment(const Scenario& scenario,
                                        const std::vector<double>& receive_times, double alpha,
                                        double rho_internal, const SolverOptions& opts) {
  CostMatrixOptions cm_opts;
  cm_opts.penalty = opts.penalty;
  cm_opts.sca = opts.sca;
  cm_opts.fixed_power = scenario.params.sbs_max_power;
  cm_opts.parallel = opts.parallel_cost_matrix;
  const std::vector<double> no_freqs(scenario.orgs.size(), 0.0);
  const auto matrix = build_cost_matrix(scenario, 0.0, no_freqs, receive_times, nullptr, nullptr,
                                        alpha, rho_internal, cm_opts);
  return hungarian(matrix).mapping;
}

BandwidthSolution equal_split_bandwidth(const Organization& org, const SystemParams& params) {
  BandwidthSolution sol;
  if (org.sensors.empty()) return sol;
  const double share = params.sbs_bandwidth / static_cast<double>(org.sensors.size());
  sol.bandwidths.assign(org.sensors.size(), share);
  for (const auto& s : org.sensors)
    sol.receive_time = std::max(sol.receive_time, s.data_size / sensor_rate(share, s.channel_gain, params));
  return sol;
}

SolveResult run_engine(const Scenario& scenario, const EngineSetup& setup,
                       const SolverOptions& opts) {
  scenario.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto& params = scenario.params;
  const int j_count = params.num_orgs;
  const double alpha = params.alpha;
  const double rho_int = setup.rho_internal;

  SolveResult res;
  Allocation alloc;
  alloc.sensor_bandwidths.resize(j_count);
  std::vector<double> receive_times(j_count, 0.0);
  for (int j = 0; j < j_count; ++j) {
    const auto sol = setup.equal_bandwidth ? equal_split_bandwidth(scenario.orgs[j], params)
                                           : optimal_bandwidth(scenario.orgs[j], params);
    alloc.sensor_bandwidths[j] = sol.bandwidths;
    receive_times[j] = sol.receive_time;
  }

  std::vector<int> assignment =
      setup.fixed_assignment ? gain_greedy_assignment(scenario)
                             : fixed_power_assignment(scenario, receive_times, alpha, rho_int, opts);
  std::vector<double> powers(j_count, params.sbs_max_power);

  if (setup.max_power_and_freq) {
    alloc.frequencies.assign(j_count, params.sbs_max_freq);
    alloc.powers = powers;
    alloc.assignment = assignment;
    res.cost = evaluate(scenario, alloc);
    alloc.latency_bound = res.cost.t_one;
    res.allocation = alloc;
    res.trace = {combine_cost(res.cost, alpha, rho_int)};
    res.iterations = 1;
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  }

  double tolerance = opts.outer_tolerance;
  bool converged = false;
  int iterations = 0;
  for (int it = 1; it <= opts.max_outer_iterations; ++it) {
    iterations = it;
    const auto lf = solve_latency_freq(scenario, powers, assignment, receive_times, alpha, rho_int,
                                       LatencyOptions{opts.t_cap});

    if (setup.fixed_assignment) {
      for (int j = 0; j < j_count; ++j) {
        const auto& org = scenario.orgs[j];
        const double gain = org.uplink_gains[assignment[j]];
        const double budget = upload_budget(lf.latency_bound, receive_times[j], org.total_data(),
                                            lf.frequencies[j], params);
        const auto p_required = min_feasible_power(budget, gain, params);
        if (!p_required || *p_required > params.sbs_max_power * (1.0 + 1e-12)) {
          res.feasible = false;
          res.diagnostic += "org " + std::to_string(org.id) + ": fixed subcarrier infeasible; ";
          continue;
        }
        const double p_lo = std::min(*p_required, params.sbs_max_power);
        const auto prob = make_power_problem(params, org.total_data(), gain, p_lo,
                                             params.sbs_max_power, alpha, rho_int, opts.sca);
        powers[j] =
            sca_optimize(prob, std::clamp(powers[j], p_lo, params.sbs_max_power)).power;
      }
    } else {
      CostMatrixOptions cm_opts;
      cm_opts.penalty = opts.penalty;
      cm_opts.sca = opts.sca;
      cm_opts.parallel = opts.parallel_cost_matrix;
      const auto matrix = build_cost_matrix(scenario, lf.latency_bound, lf.frequencies,
                                            receive_times, &assignment, &powers, alpha, rho_int,
                                            cm_opts);
      const auto chosen = hungarian(matrix);
      for (int j = 0; j < j_count; ++j) {
        if (matrix.is_feasible(j, chosen.mapping[j])) {
          powers[j] = matrix.power(j, chosen.mapping[j]);
        } else {
          res.feasible = false;
          res.diagnostic +=
              "org " + std::to_string(scenario.orgs[j].id) + ": no feasible subcarrier; ";
        }
      }
      assignment = chosen.mapping;
    }

    alloc.frequencies = lf.frequencies;
    alloc.powers = powers;
    alloc.assignment = assignment;
    alloc.latency_bound = lf.latency_bound;
    const auto breakdown = evaluate(scenario, alloc);
    res.trace.push_back(combine_cost(breakdown, alpha, rho_int));

    if (tolerance <= 0) tolerance = std::max(1e-6 * res.trace.front(), 1e-300);
    const size_t k = res.trace.size();
    if (k >= 2 && std::abs(res.trace[k - 1] - res.trace[k - 2]) < tolerance) {
      converged = true;
      break;
    }
  }

  res.allocation = alloc;
  res.cost = evaluate(scenario, alloc);
  res.iterations = iterations;
  res.converged = converged;
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace

SolveResult joint_solve(const Scenario& scenario, const SolverOptions& opts) {
  EngineSetup setup;
  setup.rho_internal = scenario.params.rho;
  return run_engine(scenario, setup, opts);
}

SolveResult solve(Scheme scheme, const Scenario& scenario, const SolverOptions& opts) {
  EngineSetup setup;
  setup.rho_internal = scenario.params.rho;
  switch (scheme) {
    case Scheme::Proposed:
      break;
    case Scheme::EqualBandwidth:
      setup.equal_bandwidth = true;
      break;
    case Scheme::LearningGuaranteed:
      setup.rho_internal = 0.0;
      break;
    case Scheme::GreedySubcarrier:
      setup.fixed_assignment = true;
      break;
    case Scheme::SystemGuaranteed:
      setup.rho_internal = opts.rho_system_guaranteed;
      break;
    case Scheme::TimeBiased:
      setup.max_power_and_freq = true;
      break;
  }
  return run_engine(scenario, setup, opts);
}

}  // namespace fedalloc
