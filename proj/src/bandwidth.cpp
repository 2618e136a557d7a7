#include "fedalloc/bandwidth.hpp"

#include <cmath>
#include <stdexcept>

namespace fedalloc {

BandwidthSolution optimal_bandwidth(const Organization& org, const SystemParams& params) {
  BandwidthSolution sol;
  if (org.sensors.empty()) return sol;  // degenerate org, receive time 0

  // weight_k = D_k / log2(1 + SNR_k); shares are proportional to the weights
  // and the common finish time is their sum over the budget.
  std::vector<double> weights(org.sensors.size());
  double weight_sum = 0;
  for (size_t k = 0; k < org.sensors.size(); ++k) {
    const auto& s = org.sensors[k];
    const double snr =
        params.sensor_max_power * s.channel_gain / (params.sbs_bandwidth * params.noise_psd);
    if (!(snr > 0) || !std::isfinite(snr))
      throw std::invalid_argument("optimal_bandwidth: sensor SNR must be positive and finite");
    weights[k] = s.data_size / std::log2(1.0 + snr);
    weight_sum += weights[k];
  }

  sol.bandwidths.resize(org.sensors.size());
  for (size_t k = 0; k < org.sensors.size(); ++k)
    sol.bandwidths[k] = params.sbs_bandwidth * weights[k] / weight_sum;
  sol.receive_time = weight_sum / params.sbs_bandwidth;
  return sol;
}

std::vector<BandwidthSolution> optimal_bandwidth_all(const Scenario& scenario) {
  std::vector<BandwidthSolution> out(scenario.orgs.size());
  for (size_t j = 0; j < scenario.orgs.size(); ++j)
    out[j] = optimal_bandwidth(scenario.orgs[j], scenario.params);
  return out;
}

}  // namespace fedalloc
