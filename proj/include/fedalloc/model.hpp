#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedalloc {

// Raised when an allocation cannot be evaluated or a subproblem has no
// feasible point, as opposed to malformed arguments.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Global constants of the network and the cost weights. Strict SI units
// everywhere (W, Hz, bits, s, J); dBm/dB conversions happen at config
// ingestion only.
struct SystemParams {
  int num_orgs = 0;                 // number of organizations J (= subcarriers)
  double mbs_total_bandwidth = 0;   // uplink bandwidth split into J subcarriers [Hz]
  double noise_psd = 0;             // N0 [W/Hz]
  double sensor_max_power = 0;      // sensor transmit power cap, shared [W]
  double sbs_max_power = 0;         // SBS transmit power cap, uniform [W]
  double sbs_bandwidth = 0;         // per-SBS sensor-facing bandwidth [Hz]
  double sbs_max_freq = 0;          // MEC compute capacity [cycles/s]
  double switched_capacitance = 0;  // chip constant [J s^2 / cycle^3]
  double cycles_per_bit = 0;        // processing density [cycles/bit]
  double model_size = 0;            // uplink model payload per org [bits]
  double waterfall_threshold = 0;   // packet-error waterfall constant
  double alpha = 0;                 // latency vs energy weight in [0,1]
  double rho = 0;                   // system vs learning weight in [0,1]

  double subcarrier_bandwidth() const { return mbs_total_bandwidth / num_orgs; }
  void validate() const;  // throws std::invalid_argument
};

struct Sensor {
  double data_size = 0;     // bits uploaded per round
  double channel_gain = 0;  // linear power gain to the serving SBS
  std::array<double, 2> position{0.0, 0.0};  // harness metadata [m]
};

struct Organization {
  int id = 0;
  std::vector<Sensor> sensors;
  std::vector<double> uplink_gains;  // linear gain per subcarrier, length J
  std::array<double, 2> position{0.0, 0.0};

  double total_data() const;  // sum of sensor data sizes [bits]
};

struct Scenario {
  SystemParams params;
  std::vector<Organization> orgs;

  void validate() const;  // throws std::invalid_argument
};

// A complete candidate decision. `assignment[j]` is the subcarrier used by
// org j and must form a permutation of 0..J-1.
struct Allocation {
  std::vector<std::vector<double>> sensor_bandwidths;  // [org][sensor] [Hz]
  std::vector<double> frequencies;                     // [org] [cycles/s]
  std::vector<double> powers;                          // [org] [W]
  std::vector<int> assignment;                         // [org] -> subcarrier
  double latency_bound = 0;                            // T [s], informational
};

struct OrgCost {
  double t_r = 0;         // sensor data receive time [s]
  double t_cmp = 0;       // local training time [s]
  double t_up = 0;        // model upload time [s]
  double e_cmp = 0;       // training energy [J]
  double e_up = 0;        // upload energy [J]
  double e_sensors = 0;   // sensor transmit energy [J]; reported, not in e_one
  double error_rate = 0;  // packet error on the assigned subcarrier
};

struct CostBreakdown {
  double t_one = 0;     // round latency: max over orgs of t_r + t_cmp + t_up
  double e_one = 0;     // round energy: sum of e_cmp + e_up
  double c_learn = 0;   // error-weighted data volume [bits]
  double c_system = 0;  // alpha * t_one + (1 - alpha) * e_one
  double c_total = 0;   // rho * c_system + (1 - rho) * c_learn
  std::vector<OrgCost> per_org;
};

struct SolveResult {
  Allocation allocation;
  CostBreakdown cost;         // under the scenario's true weights
  std::vector<double> trace;  // objective per outer iteration (non-increasing)
  int iterations = 0;
  double wall_time = 0;  // seconds; only field not reproducible bit-for-bit
  bool converged = true;
  bool feasible = true;
  std::string diagnostic;
};

// Achievable rate of a sensor given its allocated bandwidth. The SNR term
// uses the full SBS bandwidth because transmit power scales with the
// allocated share.
double sensor_rate(double bandwidth, double gain, const SystemParams& params);

// Rate of an SBS on one subcarrier.
double uplink_rate(double power, double gain, const SystemParams& params);

// Packet error probability on one subcarrier; returns 1 at zero power
// (limiting value).
double packet_error(double power, double gain, const SystemParams& params);

// Structural checks of an allocation against a scenario: shapes, bandwidth
// budgets, power/frequency boxes, assignment bijectivity. Throws
// std::invalid_argument.
void validate_allocation(const Scenario& scenario, const Allocation& alloc);

// Full cost model for a feasible allocation. Throws InfeasibleError when a
// required time diverges (zero frequency with data to train, zero power,
// zero bandwidth for a sensor with data).
CostBreakdown evaluate(const Scenario& scenario, const Allocation& alloc);

// Re-weighted total from an existing breakdown; used when the optimization
// runs under weights other than the scenario's.
double combine_cost(const CostBreakdown& cost, double alpha, double rho);

}  // namespace fedalloc
