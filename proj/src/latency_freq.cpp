#include "fedalloc/latency_freq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedalloc {

namespace {

std::vector<double> org_data_sizes(const Scenario& scenario) {
  std::vector<double> d(scenario.orgs.size());
  for (size_t j = 0; j < scenario.orgs.size(); ++j) d[j] = scenario.orgs[j].total_data();
  return d;
}

void check_inputs(const Scenario& scenario, const std::vector<double>& receive_times,
                  const std::vector<double>& upload_times) {
  const size_t j_count = scenario.orgs.size();
  if (receive_times.size() != j_count || upload_times.size() != j_count)
    throw std::invalid_argument("latency_freq: per-org input length mismatch");
  for (size_t j = 0; j < j_count; ++j) {
    if (!std::isfinite(receive_times[j]) || receive_times[j] < 0 ||
        !std::isfinite(upload_times[j]) || upload_times[j] < 0)
      throw std::invalid_argument("latency_freq: times must be finite and nonnegative");
  }
}

}  // namespace

double compute_t_min(const Scenario& scenario, const std::vector<double>& receive_times,
                     const std::vector<double>& upload_times) {
  check_inputs(scenario, receive_times, upload_times);
  const auto& p = scenario.params;
  double t_min = 0;
  for (size_t j = 0; j < scenario.orgs.size(); ++j) {
    const double cmp = p.cycles_per_bit * scenario.orgs[j].total_data() / p.sbs_max_freq;
    t_min = std::max(t_min, receive_times[j] + upload_times[j] + cmp);
  }
  return t_min;
}

double latency_objective(double t, const Scenario& scenario,
                         const std::vector<double>& receive_times,
                         const std::vector<double>& upload_times, double alpha, double rho) {
  check_inputs(scenario, receive_times, upload_times);
  const auto& p = scenario.params;
  const double eps3 = p.cycles_per_bit * p.cycles_per_bit * p.cycles_per_bit;
  double sum = 0;
  for (size_t j = 0; j < scenario.orgs.size(); ++j) {
    const double data = scenario.orgs[j].total_data();
    if (data == 0) continue;
    const double gap = t - receive_times[j] - upload_times[j];
    if (!(gap > 0)) throw std::domain_error("latency_objective: t at or below a pole");
    sum += data * data * data / (gap * gap);
  }
  return rho * alpha * t + rho * (1.0 - alpha) * p.switched_capacitance * eps3 * sum;
}

double g_of_t(double t, const Scenario& scenario, const std::vector<double>& receive_times,
              const std::vector<double>& upload_times, double alpha, double rho) {
  check_inputs(scenario, receive_times, upload_times);
  const auto& p = scenario.params;
  const double eps3 = p.cycles_per_bit * p.cycles_per_bit * p.cycles_per_bit;
  double sum = 0;
  for (size_t j = 0; j < scenario.orgs.size(); ++j) {
    const double data = scenario.orgs[j].total_data();
    if (data == 0) continue;
    const double gap = t - receive_times[j] - upload_times[j];
    if (!(gap > 0)) throw std::domain_error("g_of_t: t at or below a pole");
    sum += data * data * data / (gap * gap * gap);
  }
  return rho * alpha - 2.0 * rho * (1.0 - alpha) * p.switched_capacitance * eps3 * sum;
}

LatencyFreqSolution solve_latency_freq(const Scenario& scenario,
                                       const std::vector<double>& receive_times,
                                       const std::vector<double>& upload_times, double alpha,
                                       double rho, const LatencyOptions& opts) {
  const auto& p = scenario.params;
  const auto data = org_data_sizes(scenario);
  const double t_min = compute_t_min(scenario, receive_times, upload_times);

  auto g = [&](double t) {
    return g_of_t(t, scenario, receive_times, upload_times, alpha, rho);
  };

  double t_star = t_min;
  if (g(t_min) < 0) {
    if (rho * alpha > 0) {
      // double the offset above t_min until the derivative turns positive,
      // then bisect; g tends to rho*alpha > 0 so the bracket always closes
      double offset = t_min * 1e-12;
      int guard = 0;
      while (g(t_min + offset) <= 0) {
        offset *= 2;
        if (++guard > 200)
          throw std::runtime_error("solve_latency_freq: bracketing failed to terminate");
      }
      double lo = t_min;
      double hi = t_min + offset;
      for (int it = 0; it < opts.max_iterations && (hi - lo) > opts.rel_tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0 ? lo : hi) = mid;
      }
      t_star = 0.5 * (lo + hi);
    } else if (opts.t_cap) {
      if (*opts.t_cap < t_min)
        throw InfeasibleError("solve_latency_freq: t_cap below the minimum feasible bound");
      t_star = *opts.t_cap;
    } else {
      throw std::domain_error(
          "solve_latency_freq: no finite minimizer with alpha = 0; supply t_cap");
    }
  }

  LatencyFreqSolution sol;
  sol.latency_bound = t_star;
  sol.t_min = t_min;
  sol.frequencies.resize(data.size(), 0.0);
  for (size_t j = 0; j < data.size(); ++j) {
    if (data[j] == 0) continue;
    const double gap = t_star - receive_times[j] - upload_times[j];
    sol.frequencies[j] = std::min(p.cycles_per_bit * data[j] / gap, p.sbs_max_freq);
  }
  return sol;
}

LatencyFreqSolution solve_latency_freq(const Scenario& scenario,
                                       const std::vector<double>& powers,
                                       const std::vector<int>& assignment,
                                       const std::vector<double>& receive_times, double alpha,
                                       double rho, const LatencyOptions& opts) {
  const auto& p = scenario.params;
  if (powers.size() != scenario.orgs.size() || assignment.size() != scenario.orgs.size())
    throw std::invalid_argument("solve_latency_freq: powers/assignment length mismatch");
  std::vector<double> upload_times(scenario.orgs.size());
  for (size_t j = 0; j < scenario.orgs.size(); ++j) {
    if (powers[j] <= 0)
      throw InfeasibleError("solve_latency_freq: zero power makes upload time infinite");
    const double rate = uplink_rate(powers[j], scenario.orgs[j].uplink_gains[assignment[j]], p);
    upload_times[j] = p.model_size / rate;
  }
  return solve_latency_freq(scenario, receive_times, upload_times, alpha, rho, opts);
}

}  // namespace fedalloc
