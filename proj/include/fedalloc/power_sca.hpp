#pragma once

#include <optional>

#include "fedalloc/model.hpp"

namespace fedalloc {

struct ScaOptions {
  double tau = 1.0;        // surrogate curvature, any positive constant
  double tolerance = 1e-8;  // stop when the accepted step is smaller [W]
  int max_iterations = 200;
  double beta = 0.5;   // Armijo backtracking factor, in (0,1)
  double sigma = 0.1;  // Armijo sufficient-decrease factor, in (0,0.5)
};

// One org's transmit-power problem on one subcarrier: upload energy plus
// error-weighted data loss over a power box.
struct PowerProblem {
  double energy_coeff = 0;  // rho*(1-alpha)*D/B
  double snr_coeff = 0;     // gain/(B*N0)
  double learn_coeff = 0;   // (1-rho)*D_j
  double error_scale = 0;   // m*B*N0/gain
  double p_min = 0;         // [W]
  double p_max = 0;         // [W]
  ScaOptions sca{};
};

struct PowerResult {
  double power = 0;
  double objective = 0;
  int iterations = 0;
  bool feasible = true;
};

// Remaining time for the model upload once receive and compute are paid.
// Requires frequency > 0 whenever the org has data.
double upload_budget(double latency_bound, double receive_time, double org_data, double frequency,
                     const SystemParams& params);

// Smallest power whose upload finishes within the budget. No value when the
// budget is already spent; the result may exceed the power cap (caller
// decides feasibility).
std::optional<double> min_feasible_power(double budget, double gain, const SystemParams& params);

// Full feasibility check: nullopt when the budget is nonpositive or the
// required power exceeds the cap.
std::optional<double> min_power_for_latency(double latency_bound, double receive_time,
                                            double org_data, double frequency, double gain,
                                            const SystemParams& params);

PowerProblem make_power_problem(const SystemParams& params, double org_data, double gain,
                                double p_min, double p_max, double alpha, double rho,
                                const ScaOptions& sca = {});

double objective_h(double p, const PowerProblem& prob);
double objective_h_prime(double p, const PowerProblem& prob);

// Strongly convex quadratic model anchored at p_prev.
double surrogate_g(double p, double p_prev, const PowerProblem& prob);

// Box-constrained minimizer of the surrogate: clamp(p_prev - h'(p_prev)/tau).
double surrogate_argmin(double p_prev, const PowerProblem& prob);

// Iterate surrogate minimization with Armijo backtracking from p_init. Every
// accepted iterate stays in the box and never increases the objective; an
// empty box (p_min > p_max) yields feasible = false with an infinite
// objective.
PowerResult sca_optimize(const PowerProblem& prob, double p_init);

}  // namespace fedalloc
