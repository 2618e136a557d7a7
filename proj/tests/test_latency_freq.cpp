#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fedalloc/latency_freq.hpp"
#include "fedalloc/rng.hpp"
#include "test_util.hpp"

using namespace fedalloc;
using test::basic_params;
using test::data_only_scenario;

namespace {

struct Instance {
  Scenario scenario;
  std::vector<double> receive_times;
  std::vector<double> upload_times;
  double alpha;
  double rho;
};

Instance random_instance(Rng& rng, int j_count) {
  Instance inst;
  std::vector<double> data(j_count);
  for (auto& d : data) d = rng.uniform(1e6, 9e7);
  inst.scenario = data_only_scenario(data, basic_params());
  inst.receive_times.resize(j_count);
  inst.upload_times.resize(j_count);
  for (int j = 0; j < j_count; ++j) {
    inst.receive_times[j] = rng.uniform(0.0, 0.5);
    inst.upload_times[j] = rng.uniform(0.001, 0.1);
  }
  inst.alpha = rng.uniform(0.05, 0.95);
  inst.rho = rng.uniform(0.05, 0.95);
  return inst;
}

}  // namespace

TEST_CASE("t_min basics") {
  auto params = basic_params();
  params.cycles_per_bit = 1;
  params.sbs_max_freq = 1;
  auto s = data_only_scenario({1.0}, params);  // compute term = 1 s at full speed
  CHECK(compute_t_min(s, {1.0}, {1.0}) == doctest::Approx(3.0).epsilon(1e-15));

  auto s4 = data_only_scenario({1.0, 1.0, 1.0, 1.0}, params);
  CHECK(compute_t_min(s4, {1, 1, 1, 1}, {1, 1, 1, 1}) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("t_min equals the brute-force maximum") {
  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng, 10);
    const auto& p = inst.scenario.params;
    double expected = 0;
    for (int j = 0; j < 10; ++j) {
      expected = std::max(expected, inst.receive_times[j] + inst.upload_times[j] +
                                        p.cycles_per_bit * inst.scenario.orgs[j].total_data() /
                                            p.sbs_max_freq);
    }
    CHECK(compute_t_min(inst.scenario, inst.receive_times, inst.upload_times) ==
          doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("derivative limits and weight corners") {
  Rng rng(52);
  auto inst = random_instance(rng, 6);
  const double t_min = compute_t_min(inst.scenario, inst.receive_times, inst.upload_times);

  // far from the poles the derivative approaches rho*alpha
  CHECK(g_of_t(1e9 * t_min, inst.scenario, inst.receive_times, inst.upload_times, inst.alpha,
              inst.rho) == doctest::Approx(inst.rho * inst.alpha).epsilon(1e-9));

  // alpha = 1 removes the energy term entirely
  for (double t : {t_min * 1.01, t_min * 2, t_min * 10})
    CHECK(g_of_t(t, inst.scenario, inst.receive_times, inst.upload_times, 1.0, inst.rho) ==
          inst.rho);

  CHECK_THROWS_AS(
      g_of_t(0.0, inst.scenario, inst.receive_times, inst.upload_times, inst.alpha, inst.rho),
      std::domain_error);
}

TEST_CASE("derivative matches finite differences of the objective") {
  Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = random_instance(rng, 8);
    const double t_min = compute_t_min(inst.scenario, inst.receive_times, inst.upload_times);
    for (int i = 0; i < 10; ++i) {
      const double t = t_min * rng.uniform(1.05, 8.0);
      const double step = t * 1e-6;
      const double up = latency_objective(t + step, inst.scenario, inst.receive_times,
                                          inst.upload_times, inst.alpha, inst.rho);
      const double down = latency_objective(t - step, inst.scenario, inst.receive_times,
                                            inst.upload_times, inst.alpha, inst.rho);
      const double fd = (up - down) / (2 * step);
      const double g = g_of_t(t, inst.scenario, inst.receive_times, inst.upload_times, inst.alpha,
                              inst.rho);
      CHECK(fd == doctest::Approx(g).epsilon(1e-6));
    }
  }
}

TEST_CASE("alpha = 1 pins the bound to t_min at full frequency") {
  Rng rng(54);
  auto inst = random_instance(rng, 5);
  const auto sol = solve_latency_freq(inst.scenario, inst.receive_times, inst.upload_times, 1.0,
                                      inst.rho);
  CHECK(sol.latency_bound == sol.t_min);
  // the bottleneck org runs at the cap
  const auto& p = inst.scenario.params;
  double f_max_seen = 0;
  for (double f : sol.frequencies) f_max_seen = std::max(f_max_seen, f);
  CHECK(f_max_seen == doctest::Approx(p.sbs_max_freq).epsilon(1e-9));
}

TEST_CASE("rho = 0 also settles at t_min") {
  Rng rng(55);
  auto inst = random_instance(rng, 5);
  const auto sol =
      solve_latency_freq(inst.scenario, inst.receive_times, inst.upload_times, inst.alpha, 0.0);
  CHECK(sol.latency_bound == sol.t_min);
}

TEST_CASE("single-org root matches the closed form") {
  auto params = basic_params();
  Rng rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    const double data = rng.uniform(1e7, 9e7);
    const double alpha = rng.uniform(0.05, 0.6);
    const double rho = rng.uniform(0.1, 1.0);
    auto s = data_only_scenario({data}, params);
    const std::vector<double> a{rng.uniform(0.0, 0.3)};
    const std::vector<double> up{rng.uniform(0.001, 0.05)};

    const double cap_gap = params.cycles_per_bit * data / params.sbs_max_freq;
    const double root_gap = params.cycles_per_bit * data *
                            std::cbrt(2.0 * (1.0 - alpha) * params.switched_capacitance / alpha);
    const auto sol = solve_latency_freq(s, a, up, alpha, rho);
    if (root_gap <= cap_gap) {
      CHECK(sol.latency_bound == sol.t_min);  // derivative already nonnegative
    } else {
      CHECK(sol.latency_bound == doctest::Approx(a[0] + up[0] + root_gap).epsilon(1e-10));
    }
  }
}

TEST_CASE("beats a grid over the feasible interval") {
  Rng rng(57);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = random_instance(rng, 10);
    const auto sol = solve_latency_freq(inst.scenario, inst.receive_times, inst.upload_times,
                                        inst.alpha, inst.rho);
    const double at_solution = latency_objective(sol.latency_bound, inst.scenario,
                                                 inst.receive_times, inst.upload_times,
                                                 inst.alpha, inst.rho);
    const int points = 10000;
    for (int i = 0; i < points; ++i) {
      const double t = sol.t_min + (10.0 * sol.t_min - sol.t_min) * i / (points - 1);
      const double value = latency_objective(t, inst.scenario, inst.receive_times,
                                             inst.upload_times, inst.alpha, inst.rho);
      CHECK(at_solution <= value * (1 + 1e-8) + 1e-300);
    }
  }
}

TEST_CASE("interior root solves g exactly; boundary keeps g nonnegative") {
  Rng rng(58);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = random_instance(rng, 7);
    const auto sol = solve_latency_freq(inst.scenario, inst.receive_times, inst.upload_times,
                                        inst.alpha, inst.rho);
    const double g = g_of_t(sol.latency_bound, inst.scenario, inst.receive_times,
                            inst.upload_times, inst.alpha, inst.rho);
    if (sol.latency_bound > sol.t_min) {
      CHECK(std::abs(g) <= 1e-10);
    } else {
      CHECK(g >= 0);
    }
  }
}

TEST_CASE("frequencies make the per-org constraint tight") {
  Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = random_instance(rng, 6);
    const auto& p = inst.scenario.params;
    const auto sol = solve_latency_freq(inst.scenario, inst.receive_times, inst.upload_times,
                                        inst.alpha, inst.rho);
    for (int j = 0; j < 6; ++j) {
      const double data = inst.scenario.orgs[j].total_data();
      if (data == 0) continue;
      CHECK(sol.frequencies[j] > 0);
      CHECK(sol.frequencies[j] <= p.sbs_max_freq * (1 + 1e-12));
      const double lhs = sol.latency_bound - p.cycles_per_bit * data / sol.frequencies[j];
      CHECK(lhs == doctest::Approx(inst.receive_times[j] + inst.upload_times[j]).epsilon(1e-9));
    }
  }
}

TEST_CASE("objective is midpoint convex on the feasible interval") {
  Rng rng(60);
  auto inst = random_instance(rng, 8);
  const double t_min = compute_t_min(inst.scenario, inst.receive_times, inst.upload_times);
  for (int i = 0; i < 200; ++i) {
    const double t1 = t_min * rng.uniform(1.0001, 10.0);
    const double t2 = t_min * rng.uniform(1.0001, 10.0);
    auto value = [&](double t) {
      return latency_objective(t, inst.scenario, inst.receive_times, inst.upload_times,
                               inst.alpha, inst.rho);
    };
    CHECK(value(0.5 * (t1 + t2)) <= 0.5 * (value(t1) + value(t2)) * (1 + 1e-12));
  }
}

TEST_CASE("more data never shortens the bound") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = random_instance(rng, 5);
    const auto base = solve_latency_freq(inst.scenario, inst.receive_times, inst.upload_times,
                                         inst.alpha, inst.rho);
    auto bumped = inst.scenario;
    bumped.orgs[trial % 5].sensors[0].data_size *= rng.uniform(1.5, 4.0);
    const auto more = solve_latency_freq(bumped, inst.receive_times, inst.upload_times,
                                         inst.alpha, inst.rho);
    CHECK(more.latency_bound >= base.latency_bound * (1 - 1e-12));
  }
}

TEST_CASE("alpha = 0 needs an explicit cap") {
  Rng rng(62);
  auto inst = random_instance(rng, 4);
  CHECK_THROWS_AS(
      solve_latency_freq(inst.scenario, inst.receive_times, inst.upload_times, 0.0, 0.5),
      std::domain_error);

  LatencyOptions opts;
  const double t_min = compute_t_min(inst.scenario, inst.receive_times, inst.upload_times);
  opts.t_cap = 5 * t_min;
  const auto sol = solve_latency_freq(inst.scenario, inst.receive_times, inst.upload_times, 0.0,
                                      0.5, opts);
  CHECK(sol.latency_bound == 5 * t_min);

  opts.t_cap = 0.5 * t_min;  // below the feasible floor
  CHECK_THROWS_AS(solve_latency_freq(inst.scenario, inst.receive_times, inst.upload_times, 0.0,
                                     0.5, opts),
                  InfeasibleError);
}

TEST_CASE("orgs without data sit out") {
  auto s = data_only_scenario({0.0, 5e7}, basic_params());
  const auto sol = solve_latency_freq(s, {0.0, 0.1}, {0.01, 0.02}, 0.5, 0.5);
  CHECK(sol.frequencies[0] == 0.0);
  CHECK(sol.frequencies[1] > 0.0);
}

TEST_CASE("wrapper derives upload times from powers and gains") {
  Rng rng(63);
  auto scenario = test::random_scenario(4, rng);
  const std::vector<double> receive{0.1, 0.2, 0.1, 0.3};
  const std::vector<double> powers(4, scenario.params.sbs_max_power);
  const std::vector<int> assignment{2, 0, 3, 1};

  std::vector<double> upload(4);
  for (int j = 0; j < 4; ++j)
    upload[j] = scenario.params.model_size /
                uplink_rate(powers[j], scenario.orgs[j].uplink_gains[assignment[j]],
                            scenario.params);

  const auto direct = solve_latency_freq(scenario, receive, upload, 0.5, 0.5);
  const auto wrapped = solve_latency_freq(scenario, powers, assignment, receive, 0.5, 0.5);
  CHECK(direct.latency_bound == wrapped.latency_bound);
  CHECK(direct.frequencies == wrapped.frequencies);

  const std::vector<double> zero_power(4, 0.0);
  CHECK_THROWS_AS(solve_latency_freq(scenario, zero_power, assignment, receive, 0.5, 0.5),
                  InfeasibleError);
}
