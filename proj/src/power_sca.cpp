#include "fedalloc/power_sca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fedalloc {

double upload_budget(double latency_bound, double receive_time, double org_data, double frequency,
                     const SystemParams& params) {
  if (!std::isfinite(latency_bound) || !std::isfinite(receive_time))
    throw std::invalid_argument("upload_budget: non-finite input");
  double compute_time = 0;
  if (org_data > 0) {
    if (!(frequency > 0))
      throw std::invalid_argument("upload_budget: zero frequency with data to train");
    compute_time = params.cycles_per_bit * org_data / frequency;
  }
  return latency_bound - receive_time - compute_time;
}

std::optional<double> min_feasible_power(double budget, double gain, const SystemParams& params) {
  if (!(budget > 0)) return std::nullopt;
  const double band = params.subcarrier_bandwidth();
  const double bits_per_hz = params.model_size / (band * budget);
  // exp2 may overflow to inf for tiny budgets; the caller's cap check treats
  // that as infeasible
  return band * params.noise_psd / gain * (std::exp2(bits_per_hz) - 1.0);
}

std::optional<double> min_power_for_latency(double latency_bound, double receive_time,
                                            double org_data, double frequency, double gain,
                                            const SystemParams& params) {
  const double budget = upload_budget(latency_bound, receive_time, org_data, frequency, params);
  const auto p = min_feasible_power(budget, gain, params);
  if (!p || *p > params.sbs_max_power) return std::nullopt;
  return p;
}

PowerProblem make_power_problem(const SystemParams& params, double org_data, double gain,
                                double p_min, double p_max, double alpha, double rho,
                                const ScaOptions& sca) {
  const double band = params.subcarrier_bandwidth();
  PowerProblem prob;
  prob.energy_coeff = rho * (1.0 - alpha) * params.model_size / band;
  prob.snr_coeff = gain / (band * params.noise_psd);
  prob.learn_coeff = (1.0 - rho) * org_data;
  prob.error_scale = params.waterfall_threshold * band * params.noise_psd / gain;
  prob.p_min = p_min;
  prob.p_max = p_max;
  prob.sca = sca;
  return prob;
}

double objective_h(double p, const PowerProblem& prob) {
  if (!(p > 0)) throw std::domain_error("objective_h: power must be positive");
  const double log_term = std::log2(1.0 + prob.snr_coeff * p);
  const double energy = prob.energy_coeff == 0 ? 0.0 : prob.energy_coeff * p / log_term;
  const double loss = prob.learn_coeff * -std::expm1(-prob.error_scale / p);
  return energy + loss;
}

double objective_h_prime(double p, const PowerProblem& prob) {
  if (!(p > 0)) throw std::domain_error("objective_h_prime: power must be positive");
  const double b = prob.snr_coeff;
  const double log_term = std::log2(1.0 + b * p);
  double d_energy = 0;
  if (prob.energy_coeff != 0) {
    d_energy = prob.energy_coeff *
               (log_term - b * p / ((1.0 + b * p) * std::numbers::ln2)) / (log_term * log_term);
  }
  const double d = prob.error_scale;
  const double d_loss = -(prob.learn_coeff * d / (p * p)) * std::exp(-d / p);
  return d_energy + d_loss;
}

double surrogate_g(double p, double p_prev, const PowerProblem& prob) {
  if (!(prob.sca.tau > 0)) throw std::invalid_argument("surrogate_g: tau must be positive");
  const double h0 = objective_h(p_prev, prob);
  const double h1 = objective_h_prime(p_prev, prob);
  const double step = p - p_prev;
  return h0 + h1 * step + 0.5 * prob.sca.tau * step * step;
}

double surrogate_argmin(double p_prev, const PowerProblem& prob) {
  if (!(prob.sca.tau > 0)) throw std::invalid_argument("surrogate_argmin: tau must be positive");
  const double unconstrained = p_prev - objective_h_prime(p_prev, prob) / prob.sca.tau;
  return std::clamp(unconstrained, prob.p_min, prob.p_max);
}

PowerResult sca_optimize(const PowerProblem& prob, double p_init) {
  if (!(prob.p_min <= prob.p_max) || !(prob.p_max > 0)) {
    return PowerResult{0.0, std::numeric_limits<double>::infinity(), 0, false};
  }
  double cur = std::clamp(p_init, prob.p_min, prob.p_max);
  double h_cur = objective_h(cur, prob);

  int iterations = 0;
  for (int n = 1; n <= prob.sca.max_iterations; ++n) {
    const double cand = surrogate_argmin(cur, prob);
    const double dir = cand - cur;
    if (dir == 0) break;  // stationary over the box

    const double slope = objective_h_prime(cur, prob) * dir;  // <= 0 by construction
    double gamma = 1.0;
    bool accepted = false;
    for (int m = 0; m < 64; ++m) {
      const double trial = cur + gamma * dir;
      const double h_trial = objective_h(trial, prob);
      if (h_trial <= h_cur + prob.sca.sigma * gamma * slope) {
        cur = std::clamp(trial, prob.p_min, prob.p_max);
        h_cur = h_trial;
        accepted = true;
        break;
      }
      gamma *= prob.sca.beta;
    }
    iterations = n;
    if (!accepted) break;  // no admissible step left at this scale
    if (std::abs(gamma * dir) < prob.sca.tolerance) break;
  }
  return PowerResult{cur, h_cur, iterations, true};
}

}  // namespace fedalloc
