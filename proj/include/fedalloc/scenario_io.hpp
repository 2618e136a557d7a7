#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fedalloc/model.hpp"
#include "fedalloc/simharness.hpp"
#include "fedalloc/solver.hpp"

namespace fedalloc {

// Scenario files are JSON with a params section and an orgs list; sensor and
// uplink gains are optional and are regenerated from positions, the stored
// generator block, and a seed when absent.
void save_scenario(const Scenario& scenario, const std::string& path,
                   const GeneratorConfig* generator = nullptr);

Scenario load_scenario(const std::string& path, uint64_t fallback_seed = 1);

void save_result(const SolveResult& result, Scheme scheme, const std::string& path);

}  // namespace fedalloc
