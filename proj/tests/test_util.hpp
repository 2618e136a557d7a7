#pragma once

#include <vector>

#include "fedalloc/model.hpp"
#include "fedalloc/rng.hpp"

namespace fedalloc::test {

// plain SI params matching the default simulation setup
inline SystemParams basic_params(int num_orgs = 1) {
  SystemParams p;
  p.num_orgs = num_orgs;
  p.mbs_total_bandwidth = 3.125e6;
  p.noise_psd = 3.9810717055349695e-21;      // -174 dBm/Hz
  p.sensor_max_power = 0.19952623149688797;  // 23 dBm
  p.sbs_max_power = 5.011872336272715;       // 37 dBm
  p.sbs_bandwidth = 1e7;
  p.sbs_max_freq = 5e9;
  p.switched_capacitance = 2e-29;
  p.cycles_per_bit = 30;
  p.model_size = 1e5;
  p.waterfall_threshold = 0.023;
  p.alpha = 0.5;
  p.rho = 0.5;
  return p;
}

// one sensor per org with the given data size; flat unit gains so tests can
// steer latency terms directly
inline Scenario data_only_scenario(const std::vector<double>& org_data,
                                   SystemParams params) {
  params.num_orgs = static_cast<int>(org_data.size());
  Scenario s;
  s.params = params;
  s.orgs.resize(org_data.size());
  for (size_t j = 0; j < org_data.size(); ++j) {
    auto& org = s.orgs[j];
    org.id = static_cast<int>(j);
    if (org_data[j] > 0) org.sensors.push_back({org_data[j], 1.0, {0, 0}});
    org.uplink_gains.assign(org_data.size(), 1.0);
  }
  return s;
}

inline Scenario random_scenario(int num_orgs, Rng& rng, int sensors_min = 1,
                                int sensors_max = 4) {
  Scenario s;
  s.params = basic_params(num_orgs);
  s.orgs.resize(num_orgs);
  for (int j = 0; j < num_orgs; ++j) {
    auto& org = s.orgs[j];
    org.id = j;
    const int count = rng.uniform_int(sensors_min, sensors_max);
    for (int k = 0; k < count; ++k) {
      const double gain = 1e-8 * std::pow(10.0, rng.uniform(-1.5, 1.5));
      org.sensors.push_back({rng.uniform(1e6, 9e6), gain, {0, 0}});
    }
    org.uplink_gains.resize(num_orgs);
    for (int n = 0; n < num_orgs; ++n)
      org.uplink_gains[n] = 1e-12 * std::pow(10.0, rng.uniform(-1.0, 1.0));
  }
  return s;
}

inline Allocation simple_allocation(const Scenario& s, Rng& rng) {
  Allocation a;
  const int j_count = s.params.num_orgs;
  a.sensor_bandwidths.resize(j_count);
  a.frequencies.resize(j_count);
  a.powers.resize(j_count);
  a.assignment.resize(j_count);
  for (int j = 0; j < j_count; ++j) {
    const size_t count = s.orgs[j].sensors.size();
    if (count > 0)
      a.sensor_bandwidths[j].assign(count, s.params.sbs_bandwidth / static_cast<double>(count));
    a.frequencies[j] = s.params.sbs_max_freq * rng.uniform(0.2, 1.0);
    a.powers[j] = s.params.sbs_max_power * rng.uniform(0.1, 1.0);
    a.assignment[j] = j;
  }
  // random permutation of the subcarriers
  for (int j = j_count - 1; j > 0; --j)
    std::swap(a.assignment[j], a.assignment[rng.uniform_int(0, j)]);
  return a;
}

}  // namespace fedalloc::test
