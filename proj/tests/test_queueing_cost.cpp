#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vbs/errors.hpp"
#include "vbs/queueing_cost.hpp"

using namespace vbs;
using vbs::test::rel_diff;

namespace {

BusyPowerProfile constant_profile(double busy, double sleep, double e_sw) {
  return {"constant", [busy](double) { return busy; }, sleep, e_sw, std::nullopt};
}

}  // namespace

TEST_CASE("queue metrics") {
  const TrafficParams t{1.0, 1.6e7};
  SUBCASE("half load") {
    const QueueMetrics m = queue_metrics(t, 3.2e7);
    CHECK(m.rho == 0.5);
    CHECK(m.mean_queue_len == 1.0);
    CHECK(m.mean_delay == 1.0);
    CHECK(m.mean_cycle == 2.0);
    CHECK(m.p_active == m.rho);
    CHECK(m.p_sleep == 1.0 - m.rho);
  }
  SUBCASE("reference operating point") {
    const QueueMetrics m = queue_metrics(t, 7.756e7);
    CHECK(m.mean_delay == doctest::Approx(0.26).epsilon(0.005));
    CHECK(m.rho == doctest::Approx(m.mean_queue_len / (1 + m.mean_queue_len)).epsilon(1e-14));
    CHECK(m.mean_delay == doctest::Approx(m.mean_queue_len / t.arrival_rate).epsilon(1e-15));
  }
  SUBCASE("unstable") {
    CHECK_THROWS_AS(queue_metrics(t, 1.6e7), ModelError);
    try {
      queue_metrics(t, 1e7);
    } catch (const ModelError& e) {
      CHECK(e.kind() == ErrorKind::kUnstableQueue);
    }
  }
}

TEST_CASE("average power") {
  const Scenario sc = test::reference_scenario(2);
  const TrafficParams t = sc.traffic;
  const double r = 7.756e7;
  const double vbs = average_power(sc.profile(), t, r);
  CHECK(vbs == doctest::Approx(25.80318386567134).epsilon(1e-12));

  // Hand composition: rho P_busy + (1 - rho) P_sleep + 2 E_sw lambda (1 - rho).
  const double rho = t.offered_bps() / r;
  const double busy = vbs_busy_power(sc.compute, sc.radio, sc.gain(), r);
  CHECK(rel_diff(vbs, rho * busy + (1 - rho) * 6.45 + 2 * 5 * (1 - rho)) <= 1e-14);

  const BusyPowerProfile cbs = make_earth_profile(EarthParams{}, sc.gain(), 20e6);
  CHECK(average_power(cbs, t, r) == doctest::Approx(72.09887059171191).epsilon(1e-12));

  SUBCASE("idle-dominated limit") {
    const BusyPowerProfile k = constant_profile(40.0, 7.0, 0.0);
    CHECK(average_power(k, t, 1e15) == doctest::Approx(7.0).epsilon(1e-7));
    const TrafficParams sparse{1e-9, 1.6e7};
    CHECK(average_power(sc.profile(), sparse, 7.756e7) ==
          doctest::Approx(sc.radio.p_sleep).epsilon(1e-6));
  }
}

TEST_CASE("system cost") {
  const Scenario sc = test::reference_scenario(2);
  const BusyPowerProfile p = sc.profile();
  const TrafficParams t = sc.traffic;
  CHECK(system_cost(p, t, 0.0, 5e7) == average_power(p, t, 5e7));
  CHECK(system_cost(p, t, 10.0, 3.2e7) ==
        doctest::Approx(average_power(p, t, 3.2e7) + 10.0).epsilon(1e-15));
  CHECK(system_cost(p, t, 10.0, 7.756e7) == doctest::Approx(28.40227418405990).epsilon(1e-12));
  CHECK_THROWS_AS(system_cost(p, t, -1.0, 5e7), ModelError);
}

TEST_CASE("property: one more core adds exactly rho P_Bm") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    Scenario sc = test::reference_scenario();
    sc.traffic = {test::uniform(rng, 0.1, 2.0), test::log_uniform(rng, 1e6, 3e7)};
    sc.alpha = test::uniform(rng, 0, 50);
    const int n = static_cast<int>(test::uniform(rng, 1, 8));
    const double r_max = max_supportable_rate(sc.compute.with_cores(n));
    if (r_max <= sc.traffic.offered_bps() * 1.01) continue;
    const double r = test::uniform(rng, sc.traffic.offered_bps() * 1.01, r_max);
    const double z1 = system_cost(sc.with_cores(n).profile(), sc.traffic, sc.alpha, r);
    const double z2 = system_cost(sc.with_cores(n + 1).profile(), sc.traffic, sc.alpha, r);
    const double rho = sc.traffic.offered_bps() / r;
    REQUIRE(std::abs((z2 - z1) - rho * sc.compute.p_core_min) <= 1e-12 * z2 + 1e-13);
  }
}

TEST_CASE("heavy-traffic limit approaches the asymptote") {
  for (int n : {1, 2, 4}) {
    const Scenario sc = test::reference_scenario(n);
    const double r = sc.traffic.offered_bps() * (1 + 1e-6);
    const double p = average_power(sc.profile(), sc.traffic, r);
    // Asymptote written out term by term, independent of the optimizer.
    const ComputeParams c = sc.compute;
    const double lam_l = sc.traffic.offered_bps();
    const double expected = n * c.p_core_min + delta_pb(c) * c.c0 * c.cpu_speed + sc.radio.p_rf +
                            c.kappa * delta_pb(c) * c.cpu_speed * lam_l +
                            (std::pow(2.0, lam_l / 20e6) - 1) / (sc.gain() * sc.radio.pa_efficiency);
    CHECK(rel_diff(p, expected) <= 1e-3);
  }
}

TEST_CASE("rate-linear compute cost is a constant in average power") {
  Scenario a = test::reference_scenario(8);
  Scenario b = a;
  b.compute.kappa *= 2;
  for (double r : {2e7, 5e7, 1e8}) {
    const double diff = average_power(b.profile(), b.traffic, r) -
                        average_power(a.profile(), a.traffic, r);
    const double expected = a.traffic.offered_bps() * a.compute.kappa * delta_pb(a.compute) *
                            a.compute.cpu_speed;
    CHECK(diff == doctest::Approx(expected).epsilon(1e-10));
  }
}
