#include "fedalloc/scenario_io.hpp"

#include <fstream>
#include <stdexcept>

#include "fedalloc/rng.hpp"
#include "json.hpp"

namespace fedalloc {

namespace {

using nlohmann::json;

json params_to_json(const SystemParams& p) {
  return {{"num_orgs", p.num_orgs},
          {"mbs_total_bandwidth", p.mbs_total_bandwidth},
          {"noise_psd", p.noise_psd},
          {"sensor_max_power", p.sensor_max_power},
          {"sbs_max_power", p.sbs_max_power},
          {"sbs_bandwidth", p.sbs_bandwidth},
          {"sbs_max_freq", p.sbs_max_freq},
          {"switched_capacitance", p.switched_capacitance},
          {"cycles_per_bit", p.cycles_per_bit},
          {"model_size", p.model_size},
          {"waterfall_threshold", p.waterfall_threshold},
          {"alpha", p.alpha},
          {"rho", p.rho}};
}

SystemParams params_from_json(const json& j) {
  SystemParams p;
  p.num_orgs = j.at("num_orgs").get<int>();
  p.mbs_total_bandwidth = j.at("mbs_total_bandwidth").get<double>();
  p.noise_psd = j.at("noise_psd").get<double>();
  p.sensor_max_power = j.at("sensor_max_power").get<double>();
  p.sbs_max_power = j.at("sbs_max_power").get<double>();
  p.sbs_bandwidth = j.at("sbs_bandwidth").get<double>();
  p.sbs_max_freq = j.at("sbs_max_freq").get<double>();
  p.switched_capacitance = j.at("switched_capacitance").get<double>();
  p.cycles_per_bit = j.at("cycles_per_bit").get<double>();
  p.model_size = j.at("model_size").get<double>();
  p.waterfall_threshold = j.at("waterfall_threshold").get<double>();
  p.alpha = j.at("alpha").get<double>();
  p.rho = j.at("rho").get<double>();
  return p;
}

}  // namespace

void save_scenario(const Scenario& scenario, const std::string& path,
                   const GeneratorConfig* generator) {
  json doc;
  doc["params"] = params_to_json(scenario.params);
  if (generator) {
    doc["generator"] = {{"path_loss_ref_db", generator->path_loss_ref_db},
                        {"path_loss_exponent", generator->path_loss_exponent},
                        {"fading", generator->fading}};
  }
  json orgs = json::array();
  for (const auto& org : scenario.orgs) {
    json sensors = json::array();
    for (const auto& s : org.sensors) {
      sensors.push_back({{"data_size", s.data_size},
                         {"channel_gain", s.channel_gain},
                         {"position", {s.position[0], s.position[1]}}});
    }
    orgs.push_back({{"id", org.id},
                    {"position", {org.position[0], org.position[1]}},
                    {"uplink_gains", org.uplink_gains},
                    {"sensors", std::move(sensors)}});
  }
  doc["orgs"] = std::move(orgs);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_scenario: cannot open for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out.good()) throw std::runtime_error("save_scenario: write failed: " + path);
}

Scenario load_scenario(const std::string& path, uint64_t fallback_seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_scenario: cannot open: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error("load_scenario: invalid JSON in " + path + ": " + e.what());
  }

  Scenario scenario;
  scenario.params = params_from_json(doc.at("params"));

  bool gains_missing = false;
  const auto& orgs = doc.at("orgs");
  scenario.orgs.resize(orgs.size());
  for (size_t j = 0; j < orgs.size(); ++j) {
    const auto& oj = orgs[j];
    auto& org = scenario.orgs[j];
    org.id = oj.value("id", static_cast<int>(j));
    if (oj.contains("position")) {
      org.position = {oj["position"][0].get<double>(), oj["position"][1].get<double>()};
    }
    if (oj.contains("uplink_gains")) {
      org.uplink_gains = oj["uplink_gains"].get<std::vector<double>>();
    } else {
      gains_missing = true;
    }
    const auto& sensors = oj.at("sensors");
    org.sensors.resize(sensors.size());
    for (size_t k = 0; k < sensors.size(); ++k) {
      const auto& sk = sensors[k];
      auto& s = org.sensors[k];
      s.data_size = sk.at("data_size").get<double>();
      if (sk.contains("position"))
        s.position = {sk["position"][0].get<double>(), sk["position"][1].get<double>()};
      if (sk.contains("channel_gain")) {
        s.channel_gain = sk["channel_gain"].get<double>();
      } else {
        gains_missing = true;
      }
    }
  }

  if (gains_missing) {
    // rebuild gains from stored positions with the generator settings; the
    // data sizes and params from the file are kept
    GeneratorConfig cfg;
    cfg.num_orgs = scenario.params.num_orgs;
    if (doc.contains("generator")) {
      const auto& g = doc["generator"];
      cfg.path_loss_ref_db = g.value("path_loss_ref_db", cfg.path_loss_ref_db);
      cfg.path_loss_exponent = g.value("path_loss_exponent", cfg.path_loss_exponent);
      cfg.fading = g.value("fading", cfg.fading);
    }
    Layout layout;
    layout.orgs.resize(scenario.orgs.size());
    for (size_t j = 0; j < scenario.orgs.size(); ++j) {
      layout.orgs[j].position = scenario.orgs[j].position;
      layout.orgs[j].sensor_positions.resize(scenario.orgs[j].sensors.size());
      for (size_t k = 0; k < scenario.orgs[j].sensors.size(); ++k)
        layout.orgs[j].sensor_positions[k] = scenario.orgs[j].sensors[k].position;
    }
    // same channel stream as generate_scenario for this seed
    const Scenario drawn = realize_channels(layout, cfg, mix_seed(fallback_seed, 1));
    for (size_t j = 0; j < scenario.orgs.size(); ++j) {
      if (scenario.orgs[j].uplink_gains.empty())
        scenario.orgs[j].uplink_gains = drawn.orgs[j].uplink_gains;
      for (size_t k = 0; k < scenario.orgs[j].sensors.size(); ++k) {
        if (scenario.orgs[j].sensors[k].channel_gain == 0)
          scenario.orgs[j].sensors[k].channel_gain = drawn.orgs[j].sensors[k].channel_gain;
      }
    }
  }

  scenario.validate();
  return scenario;
}

void save_result(const SolveResult& result, Scheme scheme, const std::string& path) {
  json per_org = json::array();
  for (const auto& oc : result.cost.per_org) {
    per_org.push_back({{"t_r", oc.t_r},
                       {"t_cmp", oc.t_cmp},
                       {"t_up", oc.t_up},
                       {"e_cmp", oc.e_cmp},
                       {"e_up", oc.e_up},
                       {"e_sensors", oc.e_sensors},
                       {"error_rate", oc.error_rate}});
  }
  json doc = {
      {"scheme", scheme_name(scheme)},
      {"feasible", result.feasible},
      {"converged", result.converged},
      {"iterations", result.iterations},
      {"wall_time_s", result.wall_time},
      {"diagnostic", result.diagnostic},
      {"trace", result.trace},
      {"cost",
       {{"t_one", result.cost.t_one},
        {"e_one", result.cost.e_one},
        {"c_learn", result.cost.c_learn},
        {"c_system", result.cost.c_system},
        {"c_total", result.cost.c_total},
        {"per_org", std::move(per_org)}}},
      {"allocation",
       {{"latency_bound", result.allocation.latency_bound},
        {"sensor_bandwidths", result.allocation.sensor_bandwidths},
        {"frequencies", result.allocation.frequencies},
        {"powers", result.allocation.powers},
        {"assignment", result.allocation.assignment}}},
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_result: cannot open for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out.good()) throw std::runtime_error("save_result: write failed: " + path);
}

}  // namespace fedalloc
