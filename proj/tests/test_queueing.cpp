#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "urt/errors.hpp"
#include "urt/queueing.hpp"
#include "urt/rng.hpp"

using namespace urt::queueing;
using urt::Rng;

namespace {

// event-driven M/M/1/1 (single server, arrivals during service dropped):
// mean of the age measured just before each delivery
double sim_peak_aoi_mm11(double lambda, double mu, std::uint64_t deliveries,
                         std::uint64_t seed) {
  Rng r(seed);
  double t = 0.0, last_gen = 0.0, acc = 0.0;
  for (std::uint64_t i = 0; i < deliveries; ++i) {
    double gen = t + r.exponential() / lambda;  // first accepted arrival
    double done = gen + r.exponential() / mu;
    acc += done - last_gen;  // age peaks right before the delivery
    last_gen = gen;
    t = done;
  }
  return acc / deliveries;
}

}  // namespace

TEST_CASE("delay_outage is log-linear and inverts to the pinned delays") {
  QosModel m{0.01, 1.0};
  CHECK(delay_outage(m, 0.0) == 1.0);
  for (double d : {10.0, 100.0, 1000.0})
    CHECK(std::log(delay_outage(m, d)) == doctest::Approx(-0.01 * d).epsilon(1e-12));
  // symbols of delay budget at a 1e-5 outage target
  auto budget = [](double theta, double c_e) {
    return std::floor(std::log(1e5) / (theta * c_e));
  };
  CHECK(budget(0.01, 1.0) == 1151.0);
  CHECK(budget(0.1, 1.0) == 115.0);
  CHECK(delay_outage(QosModel{0.01, 1.0}, 1151.0) >= 1e-5);
  CHECK(delay_outage(QosModel{0.01, 1.0}, 1152.0) < 1e-5);
}

TEST_CASE("effcap_fixed_rate limits and monotonicity") {
  CHECK(effcap_fixed_rate(2.0, 0.0, 0.5, 100) == 2.0);
  CHECK(effcap_fixed_rate(2.0, 1.0, 0.5, 100) == 0.0);
  // vanishing-theta limit is the mean rate (1 - eps) r
  CHECK(effcap_fixed_rate(2.0, 0.3, 1e-9, 100) ==
        doctest::Approx(0.7 * 2.0).epsilon(1e-6));
  double prev = 3.0;
  for (double th : {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 1e3}) {
    double c = effcap_fixed_rate(2.0, 0.3, th, 100);
    CHECK(c <= prev);
    CHECK(c <= 2.0);
    CHECK(c >= 0.0);
    prev = c;
  }
  CHECK(effcap_fixed_rate(2.0, 0.5, 0.1, 100) <
        effcap_fixed_rate(2.0, 0.1, 0.1, 100));
}

TEST_CASE("rayleigh_outage basic values") {
  CHECK(rayleigh_outage(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(rayleigh_outage(1.0, 1e12) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  CHECK(rayleigh_outage(1e-12, 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("availability trade-off grid behavior") {
  std::vector<double> rho_grid, delta_grid{10, 100, 1000};
  for (double db = -10; db <= 50; db += 2) rho_grid.push_back(std::pow(10.0, db / 10.0));
  auto pts = availability_latency_power(0.2, 100, 0.5, rho_grid, delta_grid);
  REQUIRE(pts.size() == rho_grid.size() * delta_grid.size());
  // availability never decreases with SNR at fixed delay budget
  for (std::size_t j = 0; j < delta_grid.size(); ++j) {
    double prev = -1;
    for (std::size_t i = 0; i < rho_grid.size(); ++i) {
      const auto& p = pts[i * delta_grid.size() + j];
      CHECK(p.availability >= prev - 1e-12);
      prev = p.availability;
    }
  }
  // low SNR points are marked infeasible, not thrown
  CHECK_FALSE(pts[0].feasible);
  CHECK(pts[0].availability == 0.0);
  CHECK_THROWS_AS(availability_latency_power(0.6, 100, 0.5, rho_grid, delta_grid),
                  urt::DomainError);
}

TEST_CASE("low-latency high-availability points only exist at top power") {
  // 35.7 us symbols; latency < 1.5 ms means fewer than ~42 symbols of budget
  const double ts = 35.7e-6;
  std::vector<double> rho_grid, delta_grid;
  for (double db = 0; db <= 60; db += 2) rho_grid.push_back(std::pow(10.0, db / 10.0));
  for (double d = 10; d <= 20000; d *= 1.5) delta_grid.push_back(d);
  auto pts = availability_latency_power(0.2, 100, 0.5, rho_grid, delta_grid);
  bool found_top = false;
  for (const auto& p : pts) {
    double latency_ms = p.delta_max * ts * 1e3;
    if (latency_ms < 1.5 && p.availability > 0.99) {
      double db = 10.0 * std::log10(p.rho);
      CHECK(db >= 50.0);  // only within the top decade of the power grid
      found_top = true;
    }
  }
  CHECK(found_top);
}

TEST_CASE("effective_bandwidth_onoff limits and monotonicity") {
  CHECK(effective_bandwidth_onoff({1.0, 3.0}, 0.7) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(effective_bandwidth_onoff({0.4, 3.0}, 1e-9) ==
        doctest::Approx(0.4 * 3.0).epsilon(1e-6));
  CHECK(effective_bandwidth_onoff({1e-12, 3.0}, 0.7) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  double prev = 0;
  for (double th : {0.01, 0.1, 0.5, 1.0, 2.0}) {
    double eb = effective_bandwidth_onoff({0.4, 3.0}, th);
    CHECK(eb >= prev);
    prev = eb;
  }
  CHECK(effective_bandwidth_onoff({0.5, 3.0}, 0.7) >
        effective_bandwidth_onoff({0.4, 3.0}, 0.7));
  CHECK(effective_bandwidth_onoff({0.4, 4.0}, 0.7) >
        effective_bandwidth_onoff({0.4, 3.0}, 0.7));
}

TEST_CASE("max_arrival_rate inverts the effective bandwidth") {
  CHECK(*max_arrival_rate(1.0, 0.7, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(*max_arrival_rate(0.4, 1e-9, 2.0) == doctest::Approx(2.0).epsilon(1e-6));
  for (double s : {0.2, 0.5, 0.9}) {
    for (double c_e : {0.5, 1.0, 2.0}) {
      auto mean_rate = max_arrival_rate(s, 0.7, c_e);
      REQUIRE(mean_rate.has_value());
      double r = *mean_rate / s;  // peak rate of the matching source
      CHECK(effective_bandwidth_onoff({s, r}, 0.7) ==
            doctest::Approx(c_e).epsilon(1e-9));
    }
  }
}

TEST_CASE("snc_delay_violation bound shape") {
  SncEnvelope a{0.6, 2.0, 0.5}, s{1.0, 0.0, 0.5};
  CHECK(snc_delay_violation(a, s, 0.0) == 1.0);  // clipped prefactor
  double prev = snc_delay_violation(a, s, 10.0);
  for (double w : {11.0, 12.0, 13.0}) {
    double b = snc_delay_violation(a, s, w);
    // geometric decay at rate exp(-theta * service rate)
    CHECK(b / prev == doctest::Approx(std::exp(-0.5 * 1.0)).epsilon(1e-9));
    prev = b;
  }
  CHECK_THROWS_AS(snc_delay_violation({1.0, 0, 0.5}, {1.0, 0, 0.5}, 5.0),
                  urt::DomainError);
  CHECK_THROWS_AS(snc_delay_violation({0.6, 0, 0.5}, {1.0, 0, 0.7}, 5.0),
                  urt::DomainError);
}

TEST_CASE("snc bound dominates a simulated slotted queue") {
  // Poisson(0.5) bits per slot into a unit-rate server; the arrival envelope
  // rate is the Poisson effective bandwidth at theta = 0.5
  const double lambda = 0.5, theta = 0.5;
  const double rho_a = lambda * (std::exp(theta) - 1.0) / theta;
  SncEnvelope a{rho_a, 0.0, theta}, s{1.0, 0.0, theta};
  Rng r(2718);
  const int slots = 1000000;
  std::vector<std::uint64_t> exceed(21, 0);
  double q = 0.0;
  for (int t = 0; t < slots; ++t) {
    q = std::max(0.0, q + r.poisson(lambda) - 1.0);
    for (int w = 0; w <= 20; ++w)
      if (q > w) ++exceed[w];
  }
  for (int w = 0; w <= 20; ++w) {
    double empirical = (double)exceed[w] / slots;
    CHECK(empirical <= snc_delay_violation(a, s, w));
  }
}

TEST_CASE("peak_aoi closed forms") {
  CHECK(peak_aoi({AoiModel::Kind::mm11, 1.0, 1.0}) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(peak_aoi({AoiModel::Kind::mm1, 0.5, 1.0}) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(peak_aoi({AoiModel::Kind::mm12, 2.0, 3.0}) ==
        doctest::Approx(1.0 + 0.5 + 2.0 / 5.0).epsilon(1e-12));
  // general-service forms with exponential moments match the M/M twins
  AoiModel mg1{AoiModel::Kind::mg1, 0.5, 1.0, {1.0, 2.0}};
  CHECK(peak_aoi(mg1) == doctest::Approx(peak_aoi({AoiModel::Kind::mm1, 0.5, 1.0}))
                             .epsilon(1e-12));
  CHECK_THROWS_AS(peak_aoi({AoiModel::Kind::mm1, 2.0, 1.0}), urt::DomainError);
  CHECK_THROWS_AS(peak_aoi({AoiModel::Kind::lcfs_preempt, 1.0, 1.0}),
                  urt::CapabilityError);
  CHECK_THROWS_AS(peak_aoi({AoiModel::Kind::mg1, 0.5, 1.0}), urt::CapabilityError);
  // classic U-shape: the M/M/1 peak age has an interior minimum in load
  double best = 1e300;
  double best_rho = 0;
  for (double rho = 0.05; rho < 1.0; rho += 0.05) {
    double v = peak_aoi({AoiModel::Kind::mm1, rho, 1.0});
    if (v < best) {
      best = v;
      best_rho = rho;
    }
  }
  CHECK(best_rho > 0.05);
  CHECK(best_rho < 0.95);
  CHECK(best_rho == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("peak_aoi M/M/1/1 matches an event-driven simulation") {
  int idx = 0;
  for (double lambda : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    for (double mu : {0.5, 1.0, 1.5, 2.0, 3.0}) {
      double closed = peak_aoi({AoiModel::Kind::mm11, lambda, mu});
      double sim = sim_peak_aoi_mm11(lambda, mu, 2000000, 500 + idx++);
      CHECK(sim == doctest::Approx(closed).epsilon(0.02));
    }
  }
}

TEST_CASE("jit_peak_aoi") {
  CHECK(jit_peak_aoi({2.0, 2.0, 2.0}) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(jit_peak_aoi({1.0, 3.0}) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(jit_peak_aoi({1.0}), urt::DomainError);
  Rng r(33);
  std::vector<double> d(100000);
  for (auto& x : d) x = r.exponential() / 2.0;  // mean service 1/2
  CHECK(jit_peak_aoi(d) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("age_survival_lcfs pinned values and branch continuity") {
  CHECK(age_survival_lcfs(1.0, 2.0, 0.0) == 1.0);
  CHECK(age_survival_lcfs(3.0, 3.0, 2.0) == doctest::Approx(7.0 * std::exp(-6.0)).epsilon(1e-12));
  CHECK(age_survival_lcfs(3.0, 3.0, 2.0) == doctest::Approx(0.01735).epsilon(1e-3));
  CHECK(age_survival_lcfs(3.0, 5.0, 2.0) == doctest::Approx(6.13e-3).epsilon(1e-3));
  double eq = age_survival_lcfs(3.0, 3.0, 1.0);
  CHECK(std::fabs(age_survival_lcfs(3.0 * (1 + 1e-7), 3.0, 1.0) - eq) < 1e-5);
  CHECK(std::fabs(age_survival_lcfs(3.0 * (1 - 1e-7), 3.0, 1.0) - eq) < 1e-5);
  // survival is monotone non-increasing in age
  double prev = 1.0;
  for (double t = 0; t <= 5.0; t += 0.25) {
    double s = age_survival_lcfs(2.0, 3.0, t);
    CHECK(s <= prev + 1e-12);
    prev = s;
  }
}
