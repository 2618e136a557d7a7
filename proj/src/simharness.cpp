#include "fedalloc/simharness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fedalloc/rng.hpp"
#include "json.hpp"
#include "thread_util.hpp"

namespace fedalloc {

namespace {

constexpr uint64_t kLayoutTag = 0x4c41594f5554ull;   // layout stream
constexpr uint64_t kChannelTag = 0x4348414e4e454cull; // channel stream

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::array<double, 2> sample_annulus(Rng& rng, double r_min, double r_max) {
  // uniform over the annulus area
  const double u = rng.uniform();
  const double r = std::sqrt(r_min * r_min + u * (r_max * r_max - r_min * r_min));
  const double theta = 2.0 * 3.14159265358979323846 * rng.uniform();
  return {r * std::cos(theta), r * std::sin(theta)};
}

double norm2(const std::array<double, 2>& p) { return std::hypot(p[0], p[1]); }

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

int thread_cap() { return detail::env_thread_cap(); }

void GeneratorConfig::validate() const {
  require(num_orgs >= 1, "GeneratorConfig: num_orgs must be at least 1");
  require(area_radius_m > 0, "GeneratorConfig: area radius must be positive");
  require(org_ring_min_m > 0 && org_ring_min_m <= org_ring_max_m,
          "GeneratorConfig: org ring must satisfy 0 < min <= max");
  require(sbs_radius_m > 0, "GeneratorConfig: SBS radius must be positive");
  require(sensors_min >= 0 && sensors_min <= sensors_max,
          "GeneratorConfig: sensor count range must satisfy 0 <= min <= max");
  require(sensor_ring_min_m > 0 && sensor_ring_min_m <= sensor_ring_max_m,
          "GeneratorConfig: sensor ring must satisfy 0 < min <= max");
  require(sensor_data_bits > 0, "GeneratorConfig: sensor data size must be positive");
  require(model_size_bits > 0, "GeneratorConfig: model size must be positive");
  require(mec_freq_hz > 0, "GeneratorConfig: MEC frequency must be positive");
  require(kappa > 0, "GeneratorConfig: kappa must be positive");
  require(cycles_per_bit > 0, "GeneratorConfig: cycles_per_bit must be positive");
  require(mbs_bandwidth_hz > 0, "GeneratorConfig: MBS bandwidth must be positive");
  require(sbs_bandwidth_hz > 0, "GeneratorConfig: SBS bandwidth must be positive");
  require(waterfall_m >= 0, "GeneratorConfig: waterfall threshold must be nonnegative");
  require(alpha >= 0 && alpha <= 1, "GeneratorConfig: alpha must be in [0,1]");
  require(rho >= 0 && rho <= 1, "GeneratorConfig: rho must be in [0,1]");
  require(path_loss_exponent > 0, "GeneratorConfig: path loss exponent must be positive");
}

SystemParams system_params_from(const GeneratorConfig& config) {
  SystemParams p;
  p.num_orgs = config.num_orgs;
  p.mbs_total_bandwidth = config.mbs_bandwidth_hz;
  p.noise_psd = dbm_to_watts(config.noise_psd_dbm_hz);
  p.sensor_max_power = dbm_to_watts(config.sensor_power_dbm);
  p.sbs_max_power = dbm_to_watts(config.sbs_power_dbm);
  p.sbs_bandwidth = config.sbs_bandwidth_hz;
  p.sbs_max_freq = config.mec_freq_hz;
  p.switched_capacitance = config.kappa;
  p.cycles_per_bit = config.cycles_per_bit;
  p.model_size = config.model_size_bits;
  p.waterfall_threshold = config.waterfall_m;
  p.alpha = config.alpha;
  p.rho = config.rho;
  return p;
}

double path_loss_gain(const GeneratorConfig& config, double distance_m) {
  const double d = std::max(distance_m, 1.0);  // reference distance
  return db_to_linear(config.path_loss_ref_db) * std::pow(d, -config.path_loss_exponent);
}

Layout generate_layout(const GeneratorConfig& config, uint64_t seed) {
  config.validate();
  Layout layout;
  layout.orgs.resize(config.num_orgs);
  for (int j = 0; j < config.num_orgs; ++j) {
    Rng rng(mix_seed(seed, kLayoutTag, static_cast<uint64_t>(j)));
    auto& org = layout.orgs[j];
    org.position = sample_annulus(rng, config.org_ring_min_m, config.org_ring_max_m);
    const int count = rng.uniform_int(config.sensors_min, config.sensors_max);
    org.sensor_positions.resize(count);
    for (int k = 0; k < count; ++k)
      org.sensor_positions[k] = sample_annulus(rng, config.sensor_ring_min_m, config.sensor_ring_max_m);
  }
  return layout;
}

Scenario realize_channels(const Layout& layout, const GeneratorConfig& config, uint64_t seed) {
  config.validate();
  require(static_cast<int>(layout.orgs.size()) == config.num_orgs,
          "realize_channels: layout does not match num_orgs");
  Scenario scenario;
  scenario.params = system_params_from(config);
  scenario.orgs.resize(config.num_orgs);
  for (int j = 0; j < config.num_orgs; ++j) {
    Rng rng(mix_seed(seed, kChannelTag, static_cast<uint64_t>(j)));
    const auto& org_layout = layout.orgs[j];
    auto& org = scenario.orgs[j];
    org.id = j;
    org.position = org_layout.position;
    org.sensors.resize(org_layout.sensor_positions.size());
    for (size_t k = 0; k < org.sensors.size(); ++k) {
      auto& s = org.sensors[k];
      s.position = org_layout.sensor_positions[k];
      s.data_size = config.sensor_data_bits;
      const double fade = config.fading ? rng.exponential() : 1.0;
      s.channel_gain = path_loss_gain(config, norm2(s.position)) * fade;
    }
    const double mbs_distance = norm2(org_layout.position);
    org.uplink_gains.resize(config.num_orgs);
    for (int n = 0; n < config.num_orgs; ++n) {
      const double fade = config.fading ? rng.exponential() : 1.0;
      org.uplink_gains[n] = path_loss_gain(config, mbs_distance) * fade;
    }
  }
  return scenario;
}

Scenario generate_scenario(const GeneratorConfig& config, uint64_t seed) {
  return realize_channels(generate_layout(config, seed), config, mix_seed(seed, 1));
}

std::string sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::SbsBandwidth: return "sbs_bandwidth";
    case SweepParameter::SbsMaxPower: return "sbs_max_power";
    case SweepParameter::SensorDataSize: return "sensor_data_size";
    case SweepParameter::OrgCount: return "org_count";
    case SweepParameter::MbsBandwidth: return "mbs_bandwidth";
    case SweepParameter::MecCapacity: return "mec_capacity";
    case SweepParameter::Rho: return "rho";
  }
  throw std::invalid_argument("sweep_parameter_name: unknown parameter");
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
  for (auto p : {SweepParameter::SbsBandwidth, SweepParameter::SbsMaxPower,
                 SweepParameter::SensorDataSize, SweepParameter::OrgCount,
                 SweepParameter::MbsBandwidth, SweepParameter::MecCapacity, SweepParameter::Rho}) {
    if (sweep_parameter_name(p) == name) return p;
  }
  return std::nullopt;
}

GeneratorConfig apply_sweep_value(GeneratorConfig config, SweepParameter parameter, double value) {
  switch (parameter) {
    case SweepParameter::SbsBandwidth:
      config.sbs_bandwidth_hz = value;
      break;
    case SweepParameter::SbsMaxPower:
      config.sbs_power_dbm = value;  // swept in dBm
      break;
    case SweepParameter::SensorDataSize:
      config.sensor_data_bits = value;
      break;
    case SweepParameter::OrgCount: {
      // keep the per-subcarrier bandwidth constant while J grows
      const double per_carrier = config.mbs_bandwidth_hz / config.num_orgs;
      config.num_orgs = static_cast<int>(std::lround(value));
      config.mbs_bandwidth_hz = per_carrier * config.num_orgs;
      break;
    }
    case SweepParameter::MbsBandwidth:
      config.mbs_bandwidth_hz = value;
      break;
    case SweepParameter::MecCapacity:
      config.mec_freq_hz = value;
      break;
    case SweepParameter::Rho:
      config.rho = value;
      break;
  }
  return config;
}

void SweepSpec::validate() const {
  require(!values.empty(), "SweepSpec: values must be non-empty");
  require(trials >= 1, "SweepSpec: trials must be at least 1");
  bool increasing = true;
  bool decreasing = true;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] <= values[i - 1]) increasing = false;
    if (values[i] >= values[i - 1]) decreasing = false;
  }
  require(increasing || decreasing, "SweepSpec: values must be monotone");
}

std::vector<TrialRecord> run_sweep(const SweepSpec& spec, const GeneratorConfig& config,
                                   uint64_t base_seed, const SolverOptions& solver_opts,
                                   bool parallel) {
  spec.validate();
  const std::vector<Scheme>& schemes = spec.schemes.empty() ? all_schemes() : spec.schemes;

  const size_t value_count = spec.values.size();
  std::vector<GeneratorConfig> configs(value_count);
  std::vector<Layout> layouts(value_count);
  for (size_t vi = 0; vi < value_count; ++vi) {
    configs[vi] = apply_sweep_value(config, spec.parameter, spec.values[vi]);
    layouts[vi] = generate_layout(configs[vi], mix_seed(base_seed, kLayoutTag));
  }

  const int jobs = static_cast<int>(value_count) * spec.trials;
  std::vector<TrialRecord> records(static_cast<size_t>(jobs) * schemes.size());

  const int threads = parallel ? detail::resolve_threads() : 1;
  (void)threads;
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (parallel)
  for (int job = 0; job < jobs; ++job) {
    const size_t vi = static_cast<size_t>(job) / spec.trials;
    const int trial = job % spec.trials;
    const Scenario scenario = realize_channels(
        layouts[vi], configs[vi],
        mix_seed(base_seed, kChannelTag, vi, static_cast<uint64_t>(trial)));
    for (size_t s = 0; s < schemes.size(); ++s) {
      SolverOptions opts = solver_opts;
      opts.parallel_cost_matrix = false;  // parallelism lives at the trial grain
      const SolveResult result = solve(schemes[s], scenario, opts);
      TrialRecord& rec = records[static_cast<size_t>(job) * schemes.size() + s];
      rec.trial = trial;
      rec.scheme = schemes[s];
      rec.parameter = spec.parameter;
      rec.value = spec.values[vi];
      rec.c_total = result.cost.c_total;
      rec.c_system = result.cost.c_system;
      rec.c_learn = result.cost.c_learn;
      rec.t_one = result.cost.t_one;
      rec.e_one = result.cost.e_one;
      rec.iterations = result.iterations;
      rec.wall_time = result.wall_time;
      rec.feasible = result.feasible;
    }
  }
  return records;
}

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::string out = "trial,scheme,parameter,value,c_total,c_system,c_learn,t_one,e_one,iterations,wall_time_s\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial);
    out += ',';
    out += scheme_name(r.scheme);
    out += ',';
    out += sweep_parameter_name(r.parameter);
    out += ',';
    out += fmt_double(r.value);
    out += ',';
    out += fmt_double(r.c_total);
    out += ',';
    out += fmt_double(r.c_system);
    out += ',';
    out += fmt_double(r.c_learn);
    out += ',';
    out += fmt_double(r.t_one);
    out += ',';
    out += fmt_double(r.e_one);
    out += ',';
    out += std::to_string(r.iterations);
    out += ',';
    out += fmt_double(r.wall_time);
    out += '\n';
  }
  return out;
}

std::vector<TrialRecord> parse_records_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) ||
      line != "trial,scheme,parameter,value,c_total,c_system,c_learn,t_one,e_one,iterations,wall_time_s")
    throw std::invalid_argument("parse_records_csv: unexpected header");

  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 11) throw std::invalid_argument("parse_records_csv: bad row: " + line);

    TrialRecord r;
    r.trial = std::stoi(fields[0]);
    const auto scheme = parse_scheme(fields[1]);
    if (!scheme) throw std::invalid_argument("parse_records_csv: unknown scheme " + fields[1]);
    r.scheme = *scheme;
    const auto param = parse_sweep_parameter(fields[2]);
    if (!param) throw std::invalid_argument("parse_records_csv: unknown parameter " + fields[2]);
    r.parameter = *param;
    r.value = std::strtod(fields[3].c_str(), nullptr);
    r.c_total = std::strtod(fields[4].c_str(), nullptr);
    r.c_system = std::strtod(fields[5].c_str(), nullptr);
    r.c_learn = std::strtod(fields[6].c_str(), nullptr);
    r.t_one = std::strtod(fields[7].c_str(), nullptr);
    r.e_one = std::strtod(fields[8].c_str(), nullptr);
    r.iterations = std::stoi(fields[9]);
    r.wall_time = std::strtod(fields[10].c_str(), nullptr);
    records.push_back(r);
  }
  return records;
}

void emit(const std::vector<TrialRecord>& records, EmitFormat format, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("emit: no records to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot open for writing: " + path);

  if (format == EmitFormat::Csv) {
    out << records_to_csv(records);
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
      arr.push_back({{"trial", r.trial},
                     {"scheme", scheme_name(r.scheme)},
                     {"parameter", sweep_parameter_name(r.parameter)},
                     {"value", r.value},
                     {"c_total", r.c_total},
                     {"c_system", r.c_system},
                     {"c_learn", r.c_learn},
                     {"t_one", r.t_one},
                     {"e_one", r.e_one},
                     {"iterations", r.iterations},
                     {"wall_time_s", r.wall_time}});
    }
    out << arr.dump(2) << '\n';
  }
  if (!out.good()) throw std::runtime_error("emit: write failed: " + path);
}

}  // namespace fedalloc
