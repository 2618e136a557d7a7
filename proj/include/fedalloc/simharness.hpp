#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedalloc/model.hpp"
#include "fedalloc/solver.hpp"

namespace fedalloc {

double dbm_to_watts(double dbm);
double db_to_linear(double db);

// Scenario generator knobs. Geometry in meters, powers in dBm and noise in
// dBm/Hz (converted once at ingestion), everything else in SI.
struct GeneratorConfig {
  int num_orgs = 10;
  double area_radius_m = 500.0;
  double org_ring_min_m = 200.0;
  double org_ring_max_m = 500.0;
  double sbs_radius_m = 50.0;
  int sensors_min = 10;
  int sensors_max = 20;
  double sensor_ring_min_m = 5.0;
  double sensor_ring_max_m = 50.0;
  double sensor_data_bits = 3e6;
  double model_size_bits = 1e5;
  double sensor_power_dbm = 23.0;
  double sbs_power_dbm = 37.0;
  double mec_freq_hz = 5e9;
  double noise_psd_dbm_hz = -174.0;
  double kappa = 2e-29;
  double cycles_per_bit = 30.0;
  double mbs_bandwidth_hz = 3.125e6;  // total over all subcarriers
  double sbs_bandwidth_hz = 1e7;
  double waterfall_m = 0.023;
  double alpha = 0.5;
  double rho = 0.5;
  double path_loss_ref_db = -30.0;  // gain at 1 m
  double path_loss_exponent = 3.5;
  bool fading = true;  // multiplicative unit-mean exponential draw per link

  void validate() const;  // throws std::invalid_argument
};

SystemParams system_params_from(const GeneratorConfig& config);

// Distance-only part of a link gain.
double path_loss_gain(const GeneratorConfig& config, double distance_m);

// Node placement, fixed across channel redraws.
struct Layout {
  struct OrgLayout {
    std::array<double, 2> position{0.0, 0.0};  // relative to the MBS at the origin
    std::vector<std::array<double, 2>> sensor_positions;  // relative to the SBS
  };
  std::vector<OrgLayout> orgs;
};

Layout generate_layout(const GeneratorConfig& config, uint64_t seed);

// Draws one fading realization over a fixed layout: one draw per sensor link
// and one per (org, subcarrier) pair.
Scenario realize_channels(const Layout& layout, const GeneratorConfig& config, uint64_t seed);

// Layout and channels in one call; fully determined by (config, seed).
Scenario generate_scenario(const GeneratorConfig& config, uint64_t seed);

enum class SweepParameter {
  SbsBandwidth,    // Hz
  SbsMaxPower,     // dBm
  SensorDataSize,  // bits
  OrgCount,        // count; per-subcarrier bandwidth held constant
  MbsBandwidth,    // Hz, total
  MecCapacity,     // Hz
  Rho,             // weight
};

std::string sweep_parameter_name(SweepParameter p);
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);

GeneratorConfig apply_sweep_value(GeneratorConfig config, SweepParameter parameter, double value);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Rho;
  std::vector<double> values;
  int trials = 1;
  std::vector<Scheme> schemes;  // empty means all

  void validate() const;
};

struct TrialRecord {
  int trial = 0;
  Scheme scheme = Scheme::Proposed;
  SweepParameter parameter = SweepParameter::Rho;
  double value = 0;
  double c_total = 0;
  double c_system = 0;
  double c_learn = 0;
  double t_one = 0;
  double e_one = 0;
  int iterations = 0;
  double wall_time = 0;
  bool feasible = true;
};

// Runs every (value, trial, scheme) combination. Positions are fixed by the
// base seed; fading is redrawn per trial with derived seeds assigned before
// dispatch, so the record list is identical whatever the thread count.
// FEDALLOC_THREADS caps worker threads when set.
std::vector<TrialRecord> run_sweep(const SweepSpec& spec, const GeneratorConfig& config,
                                   uint64_t base_seed, const SolverOptions& solver_opts = {},
                                   bool parallel = true);

enum class EmitFormat { Csv, Json };

std::string records_to_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> parse_records_csv(const std::string& csv);

// Writes CSV or JSON; byte-stable for identical records.
void emit(const std::vector<TrialRecord>& records, EmitFormat format, const std::string& path);

// Worker-thread cap from FEDALLOC_THREADS; 0 means implementation default.
int thread_cap();

}  // namespace fedalloc
