#pragma once

#include <vector>

#include "fedalloc/model.hpp"

namespace fedalloc {

// Closed-form optimal sensor bandwidth split for one organization. All
// sensors finish uploading at the same instant `receive_time`, and the
// bandwidths exhaust the SBS budget exactly.
struct BandwidthSolution {
  std::vector<double> bandwidths;  // [sensor] [Hz]
  double receive_time = 0;         // [s]; 0 for an org without sensors
};

BandwidthSolution optimal_bandwidth(const Organization& org, const SystemParams& params);

// Per-org solutions for a whole scenario; orgs are independent.
std::vector<BandwidthSolution> optimal_bandwidth_all(const Scenario& scenario);

}  // namespace fedalloc
