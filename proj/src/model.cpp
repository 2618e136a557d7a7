#include "fedalloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fedalloc {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void SystemParams::validate() const {
  require(num_orgs > 0, "SystemParams: num_orgs must be positive");
  require(finite(mbs_total_bandwidth) && mbs_total_bandwidth > 0,
          "SystemParams: mbs_total_bandwidth must be positive");
  require(finite(noise_psd) && noise_psd > 0, "SystemParams: noise_psd must be positive");
  require(finite(sensor_max_power) && sensor_max_power > 0,
          "SystemParams: sensor_max_power must be positive");
  require(finite(sbs_max_power) && sbs_max_power > 0,
          "SystemParams: sbs_max_power must be positive");
  require(finite(sbs_bandwidth) && sbs_bandwidth > 0,
          "SystemParams: sbs_bandwidth must be positive");
  require(finite(sbs_max_freq) && sbs_max_freq > 0,
          "SystemParams: sbs_max_freq must be positive");
  require(finite(switched_capacitance) && switched_capacitance > 0,
          "SystemParams: switched_capacitance must be positive");
  require(finite(cycles_per_bit) && cycles_per_bit > 0,
          "SystemParams: cycles_per_bit must be positive");
  require(finite(model_size) && model_size > 0, "SystemParams: model_size must be positive");
  require(finite(waterfall_threshold) && waterfall_threshold >= 0,
          "SystemParams: waterfall_threshold must be nonnegative");
  require(finite(alpha) && alpha >= 0 && alpha <= 1, "SystemParams: alpha must be in [0,1]");
  require(finite(rho) && rho >= 0 && rho <= 1, "SystemParams: rho must be in [0,1]");
}

double Organization::total_data() const {
  double total = 0;
  for (const auto& s : sensors) total += s.data_size;
  return total;
}

void Scenario::validate() const {
  params.validate();
  require(static_cast<int>(orgs.size()) == params.num_orgs,
          "Scenario: orgs count must equal num_orgs");
  for (const auto& org : orgs) {
    require(static_cast<int>(org.uplink_gains.size()) == params.num_orgs,
            "Scenario: uplink_gains length must equal num_orgs");
    for (double g : org.uplink_gains)
      require(finite(g) && g > 0, "Scenario: uplink gains must be positive");
    for (const auto& s : org.sensors) {
      require(finite(s.data_size) && s.data_size > 0, "Scenario: sensor data_size must be positive");
      require(finite(s.channel_gain) && s.channel_gain > 0,
              "Scenario: sensor channel_gain must be positive");
    }
  }
}

double sensor_rate(double bandwidth, double gain, const SystemParams& params) {
  require(finite(bandwidth) && finite(gain), "sensor_rate: non-finite input");
  require(bandwidth >= 0, "sensor_rate: bandwidth must be nonnegative");
  require(gain > 0, "sensor_rate: gain must be positive");
  if (bandwidth == 0) return 0;
  const double snr = params.sensor_max_power * gain / (params.sbs_bandwidth * params.noise_psd);
  return bandwidth * std::log2(1.0 + snr);
}

double uplink_rate(double power, double gain, const SystemParams& params) {
  require(finite(power) && finite(gain), "uplink_rate: non-finite input");
  require(power >= 0, "uplink_rate: power must be nonnegative");
  require(gain > 0, "uplink_rate: gain must be positive");
  const double band = params.subcarrier_bandwidth();
  require(band > 0, "uplink_rate: subcarrier bandwidth must be positive");
  return band * std::log2(1.0 + power * gain / (band * params.noise_psd));
}

double packet_error(double power, double gain, const SystemParams& params) {
  require(finite(power) && finite(gain), "packet_error: non-finite input");
  require(params.waterfall_threshold >= 0, "packet_error: waterfall threshold must be nonnegative");
  require(power >= 0, "packet_error: power must be nonnegative");
  require(gain > 0, "packet_error: gain must be positive");
  if (power == 0) return 1.0;  // limit as power -> 0
  const double x =
      params.waterfall_threshold * params.subcarrier_bandwidth() * params.noise_psd / (power * gain);
  return -std::expm1(-x);
}

void validate_allocation(const Scenario& scenario, const Allocation& alloc) {
  const int j_count = scenario.params.num_orgs;
  require(static_cast<int>(alloc.sensor_bandwidths.size()) == j_count,
          "Allocation: sensor_bandwidths must have one entry per org");
  require(static_cast<int>(alloc.frequencies.size()) == j_count,
          "Allocation: frequencies must have one entry per org");
  require(static_cast<int>(alloc.powers.size()) == j_count,
          "Allocation: powers must have one entry per org");
  require(static_cast<int>(alloc.assignment.size()) == j_count,
          "Allocation: assignment must have one entry per org");

  std::vector<char> used(j_count, 0);
  for (int j = 0; j < j_count; ++j) {
    const auto& org = scenario.orgs[j];
    const auto& bw = alloc.sensor_bandwidths[j];
    require(bw.size() == org.sensors.size(),
            "Allocation: bandwidth vector must match the org's sensor count");
    double total = 0;
    for (double b : bw) {
      require(finite(b) && b >= 0, "Allocation: sensor bandwidths must be nonnegative");
      total += b;
    }
    require(total <= scenario.params.sbs_bandwidth * (1.0 + 1e-9),
            "Allocation: sensor bandwidths exceed the SBS budget");

    require(finite(alloc.powers[j]) && alloc.powers[j] >= 0 &&
                alloc.powers[j] <= scenario.params.sbs_max_power * (1.0 + 1e-9),
            "Allocation: power outside [0, sbs_max_power]");
    require(finite(alloc.frequencies[j]) && alloc.frequencies[j] >= 0 &&
                alloc.frequencies[j] <= scenario.params.sbs_max_freq * (1.0 + 1e-9),
            "Allocation: frequency outside [0, sbs_max_freq]");

    const int n = alloc.assignment[j];
    require(n >= 0 && n < j_count, "Allocation: subcarrier index out of range");
    require(!used[n], "Allocation: subcarrier assigned twice");
    used[n] = 1;
  }
}

CostBreakdown evaluate(const Scenario& scenario, const Allocation& alloc) {
  validate_allocation(scenario, alloc);
  const auto& p = scenario.params;

  CostBreakdown out;
  out.per_org.resize(scenario.orgs.size());

  double t_one = 0;
  double e_one = 0;
  double c_learn = 0;
  for (size_t j = 0; j < scenario.orgs.size(); ++j) {
    const auto& org = scenario.orgs[j];
    const double org_data = org.total_data();
    const double freq = alloc.frequencies[j];
    const double power = alloc.powers[j];
    const double gain = org.uplink_gains[alloc.assignment[j]];

    if (org_data > 0 && freq == 0)
      throw InfeasibleError("evaluate: zero frequency with data to train (org " +
                            std::to_string(org.id) + ")");
    if (power == 0)
      throw InfeasibleError("evaluate: zero transmit power, upload never completes (org " +
                            std::to_string(org.id) + ")");

    OrgCost& oc = out.per_org[j];
    for (size_t k = 0; k < org.sensors.size(); ++k) {
      const auto& s = org.sensors[k];
      const double rate = sensor_rate(alloc.sensor_bandwidths[j][k], s.channel_gain, p);
      if (rate == 0)
        throw InfeasibleError("evaluate: sensor with data but zero bandwidth (org " +
                              std::to_string(org.id) + ")");
      oc.t_r = std::max(oc.t_r, s.data_size / rate);
      // per-sensor transmit energy; independent of the bandwidth split
      const double snr = p.sensor_max_power * s.channel_gain / (p.sbs_bandwidth * p.noise_psd);
      oc.e_sensors += p.sensor_max_power * s.data_size / (p.sbs_bandwidth * std::log2(1.0 + snr));
    }

    oc.t_cmp = org_data > 0 ? p.cycles_per_bit * org_data / freq : 0.0;
    oc.e_cmp = p.switched_capacitance * p.cycles_per_bit * org_data * freq * freq;
    oc.t_up = p.model_size / uplink_rate(power, gain, p);
    oc.e_up = power * oc.t_up;
    oc.error_rate = packet_error(power, gain, p);

    t_one = std::max(t_one, oc.t_r + oc.t_cmp + oc.t_up);
    e_one += oc.e_cmp + oc.e_up;
    c_learn += org_data * oc.error_rate;
  }

  out.t_one = t_one;
  out.e_one = e_one;
  out.c_learn = c_learn;
  out.c_system = p.alpha * t_one + (1.0 - p.alpha) * e_one;
  out.c_total = p.rho * out.c_system + (1.0 - p.rho) * c_learn;
  return out;
}

double combine_cost(const CostBreakdown& cost, double alpha, double rho) {
  return rho * (alpha * cost.t_one + (1.0 - alpha) * cost.e_one) + (1.0 - rho) * cost.c_learn;
}

}  // namespace fedalloc
