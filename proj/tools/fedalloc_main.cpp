#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedalloc/scenario_io.hpp"
#include "fedalloc/simharness.hpp"
#include "fedalloc/solver.hpp"

namespace {

using namespace fedalloc;

std::vector<double> parse_value_list(const std::string& csv) {
  std::vector<double> values;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    values.push_back(std::stod(item, &pos));
    if (pos != item.size()) throw CLI::ValidationError("values", "not a number: " + item);
  }
  if (values.empty()) throw CLI::ValidationError("values", "empty list");
  return values;
}

std::vector<Scheme> parse_scheme_list(const std::string& csv) {
  std::vector<Scheme> schemes;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") return all_schemes();
    const auto s = parse_scheme(item);
    if (!s) throw CLI::ValidationError("schemes", "unknown scheme: " + item);
    schemes.push_back(*s);
  }
  if (schemes.empty()) throw CLI::ValidationError("schemes", "empty list");
  return schemes;
}

void add_config_options(CLI::App* cmd, GeneratorConfig& config) {
  cmd->add_option("--orgs", config.num_orgs, "number of organizations");
  cmd->add_option("--sensors-min", config.sensors_min, "min sensors per organization");
  cmd->add_option("--sensors-max", config.sensors_max, "max sensors per organization");
  cmd->add_option("--sensor-data", config.sensor_data_bits, "sensor upload size [bits]");
  cmd->add_option("--model-size", config.model_size_bits, "model upload size [bits]");
  cmd->add_option("--sensor-power-dbm", config.sensor_power_dbm, "sensor power cap [dBm]");
  cmd->add_option("--sbs-power-dbm", config.sbs_power_dbm, "SBS power cap [dBm]");
  cmd->add_option("--mec-freq", config.mec_freq_hz, "MEC compute capacity [Hz]");
  cmd->add_option("--noise-psd-dbm", config.noise_psd_dbm_hz, "noise PSD [dBm/Hz]");
  cmd->add_option("--kappa", config.kappa, "switched capacitance");
  cmd->add_option("--cycles-per-bit", config.cycles_per_bit, "processing density");
  cmd->add_option("--mbs-bandwidth", config.mbs_bandwidth_hz, "total MBS bandwidth [Hz]");
  cmd->add_option("--sbs-bandwidth", config.sbs_bandwidth_hz, "per-SBS bandwidth [Hz]");
  cmd->add_option("--waterfall-m", config.waterfall_m, "packet-error waterfall threshold");
  cmd->add_option("--alpha", config.alpha, "latency/energy weight");
  cmd->add_option("--rho", config.rho, "system/learning weight");
  cmd->add_option("--path-loss-ref-db", config.path_loss_ref_db, "path loss at 1 m [dB]");
  cmd->add_option("--path-loss-exponent", config.path_loss_exponent, "path loss exponent");
  cmd->add_option("--fading", config.fading, "Rayleigh fading draws on/off (1/0)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resource allocation engine for edge-assisted federated learning"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a scenario file");
  GeneratorConfig gen_config;
  uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output scenario file")->required();
  add_config_options(gen, gen_config);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve one scenario with one scheme");
  std::string solve_scenario, solve_scheme = "proposed", solve_out;
  uint64_t solve_seed = 1;
  solve_cmd->add_option("--scenario", solve_scenario, "scenario file")->required();
  solve_cmd->add_option("--scheme", solve_scheme, "scheme name");
  solve_cmd->add_option("--out", solve_out, "output result file (JSON)")->required();
  solve_cmd->add_option("--seed", solve_seed, "seed for regenerating absent gains");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run a Monte Carlo parameter sweep");
  GeneratorConfig sweep_config;
  std::string sweep_param = "rho", sweep_values, sweep_schemes = "all", sweep_out,
              sweep_format = "csv";
  int sweep_trials = 1;
  uint64_t sweep_seed = 1;
  bool sweep_serial = false;
  sweep_cmd->add_option("--param", sweep_param, "swept parameter")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated swept values")->required();
  sweep_cmd->add_option("--trials", sweep_trials, "trials per value");
  sweep_cmd->add_option("--schemes", sweep_schemes, "comma-separated scheme names or 'all'");
  sweep_cmd->add_option("--seed", sweep_seed, "base seed");
  sweep_cmd->add_option("--out", sweep_out, "output results file")->required();
  sweep_cmd->add_option("--format", sweep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_flag("--serial", sweep_serial, "run trials on one thread");
  add_config_options(sweep_cmd, sweep_config);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const Scenario scenario = generate_scenario(gen_config, gen_seed);
      save_scenario(scenario, gen_out, &gen_config);
      std::cout << "wrote " << gen_out << " (" << scenario.orgs.size() << " orgs)\n";
    } else if (*solve_cmd) {
      const auto scheme = parse_scheme(solve_scheme);
      if (!scheme) {
        std::cerr << "error: unknown scheme '" << solve_scheme << "'\n";
        return 1;
      }
      const Scenario scenario = load_scenario(solve_scenario, solve_seed);
      const SolveResult result = solve(*scheme, scenario, {});
      save_result(result, *scheme, solve_out);
      if (!result.feasible)
        std::cerr << "warning: infeasible result: " << result.diagnostic << '\n';
      std::cout << "c_total " << result.cost.c_total << " after " << result.iterations
                << " iterations -> " << solve_out << '\n';
    } else if (*sweep_cmd) {
      const auto param = parse_sweep_parameter(sweep_param);
      if (!param) {
        std::cerr << "error: unknown sweep parameter '" << sweep_param << "'\n";
        return 1;
      }
      SweepSpec spec;
      spec.parameter = *param;
      spec.values = parse_value_list(sweep_values);
      spec.trials = sweep_trials;
      spec.schemes = parse_scheme_list(sweep_schemes);
      const auto records = run_sweep(spec, sweep_config, sweep_seed, {}, !sweep_serial);
      int infeasible = 0;
      for (const auto& r : records)
        if (!r.feasible) ++infeasible;
      if (infeasible > 0)
        std::cerr << "warning: " << infeasible << " infeasible trial records\n";
      emit(records, sweep_format == "csv" ? EmitFormat::Csv : EmitFormat::Json, sweep_out);
      std::cout << "wrote " << records.size() << " records -> " << sweep_out << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
