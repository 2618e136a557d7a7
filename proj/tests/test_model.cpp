#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "fedalloc/model.hpp"
#include "fedalloc/rng.hpp"
#include "test_util.hpp"

using namespace fedalloc;
using test::basic_params;

namespace {

SystemParams unit_params() {
  // subcarrier bandwidth 1 Hz, unit noise; lets tests dial SNR directly
  SystemParams p;
  p.num_orgs = 1;
  p.mbs_total_bandwidth = 1;
  p.noise_psd = 1;
  p.sensor_max_power = 1;
  p.sbs_max_power = 8;
  p.sbs_bandwidth = 1;
  p.sbs_max_freq = 100;
  p.switched_capacitance = 0.01;
  p.cycles_per_bit = 2;
  p.model_size = 6;
  p.waterfall_threshold = 0.25;
  p.alpha = 0.3;
  p.rho = 0.6;
  return p;
}

}  // namespace

TEST_CASE("sensor_rate basics") {
  auto p = unit_params();
  // p_max * h / (B_j * N0) = 1  ->  1 Hz carries 1 bit/s
  CHECK(sensor_rate(1.0, 1.0, p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sensor_rate(0.0, 1.0, p) == 0.0);
  // ratio 3 at 2 Hz -> 2*log2(4) = 4
  CHECK(sensor_rate(2.0, 3.0, p) == doctest::Approx(4.0).epsilon(1e-15));

  CHECK_THROWS_AS(sensor_rate(-1.0, 1.0, p), std::invalid_argument);
  CHECK_THROWS_AS(sensor_rate(1.0, 0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(sensor_rate(std::numeric_limits<double>::quiet_NaN(), 1.0, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(sensor_rate(1.0, std::numeric_limits<double>::infinity(), p),
                  std::invalid_argument);
}

TEST_CASE("uplink_rate basics and high-precision check") {
  auto p = unit_params();
  CHECK(uplink_rate(0.0, 1.0, p) == 0.0);
  CHECK(uplink_rate(1.0, 1.0, p) == doctest::Approx(1.0).epsilon(1e-15));

  // random draws against a long-double evaluation of the same formula
  Rng rng(123);
  auto q = basic_params(7);
  for (int i = 0; i < 200; ++i) {
    const double power = rng.uniform(0.01, 5.0);
    const double gain = 1e-12 * std::pow(10.0, rng.uniform(-2.0, 2.0));
    const long double band = static_cast<long double>(q.mbs_total_bandwidth) / q.num_orgs;
    const long double snr = static_cast<long double>(power) * gain / (band * q.noise_psd);
    const long double expected = band * std::log2(1.0L + snr);
    CHECK(uplink_rate(power, gain, q) ==
          doctest::Approx(static_cast<double>(expected)).epsilon(1e-13));
  }
}

TEST_CASE("packet_error basics") {
  auto p = unit_params();

  SUBCASE("zero waterfall threshold means no errors") {
    p.waterfall_threshold = 0;
    CHECK(packet_error(1.0, 1.0, p) == 0.0);
    CHECK(packet_error(1e-9, 1.0, p) == 0.0);
  }

  SUBCASE("limits") {
    CHECK(packet_error(0.0, 1.0, p) == 1.0);
    CHECK(packet_error(1e30, 1.0, p) == doctest::Approx(0.0).epsilon(1e-20));
  }

  SUBCASE("matches high-precision evaluation at x = 0.023") {
    p.waterfall_threshold = 0.023;  // m*B*N0/(p*h) = 0.023 with everything else 1
    const long double expected = 1.0L - std::exp(-0.023L);
    CHECK(packet_error(1.0, 1.0, p) ==
          doctest::Approx(static_cast<double>(expected)).epsilon(1e-14));
  }

  SUBCASE("monotone: decreasing in power, increasing in threshold") {
    double prev = packet_error(0.1, 1.0, p);
    for (double power : {0.2, 0.5, 1.0, 3.0, 10.0}) {
      const double cur = packet_error(power, 1.0, p);
      CHECK(cur < prev);
      prev = cur;
    }
    auto lo = p;
    auto hi = p;
    lo.waterfall_threshold = 0.1;
    hi.waterfall_threshold = 0.2;
    CHECK(packet_error(1.0, 1.0, hi) > packet_error(1.0, 1.0, lo));
  }

  SUBCASE("negative threshold rejected") {
    p.waterfall_threshold = -0.1;
    CHECK_THROWS_AS(packet_error(1.0, 1.0, p), std::invalid_argument);
  }
}

TEST_CASE("evaluate matches a hand-composed single-org instance") {
  auto p = unit_params();
  p.mbs_total_bandwidth = 2;  // subcarrier bandwidth 2 Hz
  p.noise_psd = 0.5;
  p.sensor_max_power = 2;
  p.sbs_bandwidth = 10;

  Scenario s;
  s.params = p;
  s.orgs.resize(1);
  s.orgs[0].id = 0;
  s.orgs[0].sensors.push_back({30.0, 2.5, {0, 0}});
  s.orgs[0].uplink_gains = {2.5};

  Allocation a;
  a.sensor_bandwidths = {{10.0}};
  a.frequencies = {3.0};
  a.powers = {2.0};
  a.assignment = {0};

  // spreadsheet-style composition, kept independent of the library calls
  const double snr_sensor = 2.0 * 2.5 / (10.0 * 0.5);  // = 1
  const double t_r = 30.0 / (10.0 * std::log2(1.0 + snr_sensor));
  const double t_cmp = 2.0 * 30.0 / 3.0;
  const double up_rate = 2.0 * std::log2(1.0 + 2.0 * 2.5 / (2.0 * 0.5));
  const double t_up = 6.0 / up_rate;
  const double t_one = t_r + t_cmp + t_up;
  const double e_cmp = 0.01 * 2.0 * 30.0 * 3.0 * 3.0;
  const double e_up = 2.0 * t_up;
  const double e_one = e_cmp + e_up;
  const double err = 1.0 - std::exp(-0.25 * 2.0 * 0.5 / (2.0 * 2.5));
  const double c_learn = 30.0 * err;
  const double c_system = 0.3 * t_one + 0.7 * e_one;
  const double c_total = 0.6 * c_system + 0.4 * c_learn;

  const auto cost = evaluate(s, a);
  CHECK(cost.t_one == doctest::Approx(t_one).epsilon(1e-14));
  CHECK(cost.e_one == doctest::Approx(e_one).epsilon(1e-14));
  CHECK(cost.c_learn == doctest::Approx(c_learn).epsilon(1e-12));
  CHECK(cost.c_system == doctest::Approx(c_system).epsilon(1e-14));
  CHECK(cost.c_total == doctest::Approx(c_total).epsilon(1e-12));
  CHECK(cost.per_org[0].t_r == doctest::Approx(t_r).epsilon(1e-14));
  // sensor transmit energy is reported but stays out of e_one
  CHECK(cost.per_org[0].e_sensors == doctest::Approx(2.0 * 30.0 / 10.0).epsilon(1e-14));
}

TEST_CASE("weight corners collapse the total") {
  Rng rng(7);
  auto s = test::random_scenario(4, rng);
  auto a = test::simple_allocation(s, rng);

  s.params.alpha = 1.0;
  s.params.rho = 1.0;
  auto cost = evaluate(s, a);
  CHECK(cost.c_total == cost.t_one);

  s.params.rho = 0.0;
  cost = evaluate(s, a);
  CHECK(cost.c_total == cost.c_learn);

  s.params.alpha = 0.0;
  s.params.rho = 1.0;
  cost = evaluate(s, a);
  CHECK(cost.c_total == cost.e_one);
}

TEST_CASE("total is affine in the three components") {
  Rng rng(8);
  auto s = test::random_scenario(5, rng);
  auto a = test::simple_allocation(s, rng);
  const auto base = evaluate(s, a);
  for (double alpha : {0.0, 0.25, 1.0}) {
    for (double rho : {0.0, 0.5, 1.0}) {
      const double expected =
          rho * (alpha * base.t_one + (1 - alpha) * base.e_one) + (1 - rho) * base.c_learn;
      CHECK(combine_cost(base, alpha, rho) == doctest::Approx(expected).epsilon(1e-15));
      auto s2 = s;
      s2.params.alpha = alpha;
      s2.params.rho = rho;
      CHECK(evaluate(s2, a).c_total == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("org order does not matter") {
  Rng rng(9);
  auto s = test::random_scenario(5, rng);
  auto a = test::simple_allocation(s, rng);
  const auto base = evaluate(s, a);

  // rotate orgs together with their allocation rows
  auto s2 = s;
  auto a2 = a;
  const int j_count = s.params.num_orgs;
  for (int j = 0; j < j_count; ++j) {
    const int src = (j + 2) % j_count;
    s2.orgs[j] = s.orgs[src];
    a2.sensor_bandwidths[j] = a.sensor_bandwidths[src];
    a2.frequencies[j] = a.frequencies[src];
    a2.powers[j] = a.powers[src];
    a2.assignment[j] = a.assignment[src];
  }
  const auto rotated = evaluate(s2, a2);
  CHECK(rotated.t_one == doctest::Approx(base.t_one).epsilon(1e-15));
  CHECK(rotated.e_one == doctest::Approx(base.e_one).epsilon(1e-15));
  CHECK(rotated.c_total == doctest::Approx(base.c_total).epsilon(1e-15));
}

TEST_CASE("doubling all sensor data doubles the data-linear pieces") {
  Rng rng(10);
  auto s = test::random_scenario(3, rng);
  auto a = test::simple_allocation(s, rng);
  const auto base = evaluate(s, a);

  auto s2 = s;
  for (auto& org : s2.orgs)
    for (auto& sensor : org.sensors) sensor.data_size *= 2;
  const auto doubled = evaluate(s2, a);

  CHECK(doubled.c_learn == doctest::Approx(2 * base.c_learn).epsilon(1e-12));
  for (size_t j = 0; j < s.orgs.size(); ++j) {
    CHECK(doubled.per_org[j].t_cmp == doctest::Approx(2 * base.per_org[j].t_cmp).epsilon(1e-12));
    CHECK(doubled.per_org[j].e_cmp == doctest::Approx(2 * base.per_org[j].e_cmp).epsilon(1e-12));
    CHECK(doubled.per_org[j].t_r == doctest::Approx(2 * base.per_org[j].t_r).epsilon(1e-12));
    CHECK(doubled.per_org[j].error_rate == base.per_org[j].error_rate);
  }
}

TEST_CASE("evaluate rejects degenerate allocations") {
  Rng rng(11);
  auto s = test::random_scenario(3, rng);
  auto good = test::simple_allocation(s, rng);

  auto a = good;
  a.frequencies[0] = 0;
  CHECK_THROWS_AS(evaluate(s, a), InfeasibleError);

  a = good;
  a.powers[1] = 0;
  CHECK_THROWS_AS(evaluate(s, a), InfeasibleError);

  a = good;
  a.sensor_bandwidths[2].front() = 0;
  CHECK_THROWS_AS(evaluate(s, a), InfeasibleError);

  a = good;
  a.assignment[0] = a.assignment[1];
  CHECK_THROWS_AS(evaluate(s, a), std::invalid_argument);

  a = good;
  a.powers[0] = s.params.sbs_max_power * 1.5;
  CHECK_THROWS_AS(evaluate(s, a), std::invalid_argument);

  a = good;
  for (auto& b : a.sensor_bandwidths[0]) b = s.params.sbs_bandwidth;  // over budget
  if (a.sensor_bandwidths[0].size() > 1) CHECK_THROWS_AS(evaluate(s, a), std::invalid_argument);
}

TEST_CASE("zero-sensor orgs cost nothing to train") {
  auto s = test::data_only_scenario({0.0, 5e6}, basic_params());
  Allocation a;
  a.sensor_bandwidths = {{}, {s.params.sbs_bandwidth}};
  a.frequencies = {0.0, 1e9};  // zero frequency is fine with no data
  a.powers = {1.0, 1.0};
  a.assignment = {0, 1};
  const auto cost = evaluate(s, a);
  CHECK(cost.per_org[0].t_r == 0.0);
  CHECK(cost.per_org[0].t_cmp == 0.0);
  CHECK(cost.per_org[0].e_cmp == 0.0);
  CHECK(cost.per_org[0].t_up > 0.0);  // the model still gets uploaded
}

TEST_CASE("scenario validation") {
  auto s = test::data_only_scenario({1e6}, basic_params());
  CHECK_NOTHROW(s.validate());

  auto bad = s;
  bad.orgs[0].uplink_gains.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = s;
  bad.orgs[0].sensors[0].data_size = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = s;
  bad.params.alpha = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
