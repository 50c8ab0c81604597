// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and workloads are fixed; seeds are fixed up front.

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "vbs/comparison.hpp"
#include "vbs/lambert_w.hpp"
#include "vbs/optimizer.hpp"
#include "vbs/power_models.hpp"
#include "vbs/queueing_cost.hpp"
#include "vbs/radio_link.hpp"
#include "vbs/scenario_file.hpp"
#include "vbs/simulator.hpp"

using namespace vbs;
using vbs::test::rel_diff;
using vbs::test::reference_scenario;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Criterion = std::function<void(Verdict&)>;

bool run_criterion(int id, const char* title, double budget_s, const Criterion& body) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.expect(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (elapsed > budget_s) {
    std::ostringstream msg;
    msg << "runtime " << elapsed << " s over budget " << budget_s << " s";
    v.expect(false, msg.str());
  }
  std::printf("criterion %d %s: %s (%.3f s, budget %.0f s)%s\n", id, title,
              v.pass ? "PASS" : "FAIL", elapsed, budget_s, v.detail.str().c_str());
  std::fflush(stdout);
  return v.pass;
}

// 1. CBS-optimal delay and the savings there.
void savings_at_cbs_optimum(Verdict& v) {
  const ScenarioConfig cfg;
  const ComparisonRow row = compare_cbs_optimal(cfg);
  v.detail << " delay=" << row.cbs_delay_s << " s savings=" << 100 * row.savings << " %";
  v.expect(std::abs(row.cbs_delay_s - 0.26) <= 0.15 * 0.26, "delay outside 0.26 s +- 15%");
  v.expect(std::abs(row.savings - 0.64) <= 0.05, "savings outside 64 +- 5 points");
}

// 2. Minimum-power savings over three arrival rates.
void savings_at_min_power(Verdict& v) {
  for (const double lambda : {0.5, 1.0, 1.5}) {
    ScenarioConfig cfg;
    cfg.traffic.arrival_rate = lambda;
    const ComparisonRow row = compare_min_power(cfg);
    v.detail << " lambda=" << lambda << ":" << 100 * row.savings << "%";
    v.expect(row.savings > 0.60, "savings not above 60% at lambda=" + std::to_string(lambda));
  }
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return out;
}

bool strictly_decreasing_power(const Scenario& sc, int n, const std::vector<double>& delays,
                               int& feasible) {
  double prev = std::numeric_limits<double>::infinity();
  feasible = 0;
  for (const CurvePoint& p : tradeoff_curve(sc, n, delays)) {
    if (!p.point) continue;
    ++feasible;
    if (!(p.point->avg_power_w < prev)) return false;
    prev = p.point->avg_power_w;
  }
  return true;
}

// 3. Shape of the delay/power curve for a fixed core count.
void proposition_suite(Verdict& v) {
  // (a) one interior minimum, located at the closed-form rate.
  const Scenario sc = reference_scenario(4);
  const double r_e = energy_optimal_rate(sc, 4);
  const std::vector<double> delays = log_grid(0.1, 50.0, 2000);
  const auto curve = tradeoff_curve(sc, 4, delays);
  std::vector<double> power;
  for (const CurvePoint& p : curve) {
    if (!p.point) {
      v.expect(false, "(a) infeasible point on the N=4 curve");
      return;
    }
    power.push_back(p.point->avg_power_w);
  }
  std::vector<std::size_t> minima;
  for (std::size_t i = 1; i + 1 < power.size(); ++i)
    if (power[i] < power[i - 1] && power[i] < power[i + 1]) minima.push_back(i);
  v.expect(minima.size() == 1, "(a) expected exactly one interior minimum, found " +
                                   std::to_string(minima.size()));
  if (minima.size() == 1) {
    const std::size_t i = minima[0];
    // Bracket from the neighbouring grid points, refine with Brent.
    const double r_lo = curve[i + 1].point->rate_bps;
    const double r_hi = curve[i - 1].point->rate_bps;
    const auto power_at = [&](double r) { return evaluate_point(sc, 4, r).avg_power_w; };
    const auto [r_min, p_min] = boost::math::tools::brent_find_minima(power_at, r_lo, r_hi, 52);
    (void)p_min;
    v.detail << " (a) r_min=" << r_min << " r_e*=" << r_e << " rel=" << rel_diff(r_min, r_e);
    v.expect(rel_diff(r_min, r_e) <= 1e-6, "(a) refined minimum not within 1e-6 of r_e*");
  }

  // (b) conditions violated: monotone decrease over the scanned grid.
  Scenario big_files = sc;
  big_files.traffic.mean_file_size_bits = 1.5 * energy_optimal_exists(sc, 4).file_size_bound;
  v.expect(!energy_optimal_exists(big_files, 4).exists, "(b) file-size bound not violated");
  int feasible = 0;
  v.expect(strictly_decreasing_power(big_files, 4, log_grid(0.01, 1000.0, 2000), feasible),
           "(b) power not decreasing with inflated file size");
  v.expect(feasible >= 1000, "(b) too few feasible points on the inflated-file curve");

  Scenario many_arrivals = sc;
  many_arrivals.traffic = {1.2 * energy_optimal_exists(sc, 4).arrival_rate_bound, 1e6};
  v.expect(!energy_optimal_exists(many_arrivals, 4).exists, "(b) arrival bound not violated");
  v.expect(strictly_decreasing_power(many_arrivals, 4, log_grid(0.005, 1000.0, 2000), feasible),
           "(b) power not decreasing with too many arrivals");
  v.expect(feasible >= 1000, "(b) too few feasible points on the many-arrivals curve");
  v.detail << " (b) ok";

  // (c) heavy-traffic end of the curve.
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n)
    for (const TrafficParams t : {TrafficParams{1.0, 1.6e7}, TrafficParams{0.5, 2e7},
                                  TrafficParams{1.5, 8e6}}) {
      Scenario s = sc;
      s.traffic = t;
      const double r = t.offered_bps() * (1 + 1e-6);
      if (r > max_supportable_rate(s.compute.with_cores(n))) continue;
      const double p = evaluate_point(s, n, r).avg_power_w;
      worst = std::max(worst, rel_diff(p, asymptotic_power(s, n)));
    }
  v.detail << " (c) worst rel=" << worst;
  v.expect(worst <= 1e-3, "(c) power near the stability floor differs from the asymptote");
}

Scenario random_scenario(std::mt19937_64& rng) {
  Scenario sc = reference_scenario(1);
  sc.compute.kappa = test::uniform(rng, 20, 50);
  sc.compute.c0 = test::uniform(rng, 3e8, 1.2e9);
  sc.compute.p_core_min = test::uniform(rng, 2, 8);
  sc.compute.p_core_max = sc.compute.p_core_min + test::uniform(rng, 5, 25);
  sc.radio.p_sleep = test::uniform(rng, 2, 10);
  sc.radio.switch_energy = test::uniform(rng, 0, 10);
  LinkInputs link;
  link.cell_radius_m = test::uniform(rng, 300, 1000);
  sc.link = LinkBudget(link);
  sc.traffic = {test::uniform(rng, 0.2, 2.0), test::log_uniform(rng, 2e6, 4e7)};
  sc.alpha = test::uniform(rng, 0, 1) < 0.2 ? 0.0 : test::log_uniform(rng, 0.01, 100);
  return sc;
}

// 4. Solvers against brute force.
void solver_vs_oracle(Verdict& v) {
  std::mt19937_64 rng(20240601);
  int scenarios = 0, solver_bad = 0, joint_bad = 0, draws = 0;
  double worst_solver = -1.0, worst_joint = 0.0;
  while (scenarios < 200) {
    ++draws;
    Scenario sc = random_scenario(rng);
    const int n_max = static_cast<int>(test::uniform(rng, 1, 9));
    const int n_fixed = static_cast<int>(test::uniform(rng, 1, n_max + 1));
    const auto oracle = test::exhaustive_joint(sc, n_max, 100000);
    if (oracle.n_cores == 0) continue;  // no core count carries the load
    ++scenarios;

    // Single core count, capacity ignored, rates up to 50 W.
    const Scenario fixed = sc.with_cores(n_fixed);
    const bool closed_form_exists = energy_optimal_exists(fixed, n_fixed).exists;
    const double r = (sc.alpha > 0 || closed_form_exists) ? solve_optimal_rate(fixed, n_fixed)
                                                          : unconstrained_argmin_rate(fixed, n_fixed);
    const auto [z_grid, r_grid] = test::grid_min_cost(fixed, n_fixed, 50 * fixed.radio.bandwidth, 100000);
    (void)r_grid;
    BusyPowerProfile loose = fixed.profile();
    const double g = fixed.gain();
    loose.busy_power = [&fixed, g](double x) {
      return bbu_power(fixed.compute, x, LoadCheck::kPermissive) +
             rrh_power(fixed.radio, pout_for_rate(g, fixed.radio.bandwidth, x));
    };
    const double z = system_cost(loose, fixed.traffic, fixed.alpha, r);
    const double excess = (z - z_grid) / z_grid;
    worst_solver = std::max(worst_solver, excess);
    if (excess > 1e-8) ++solver_bad;

    const JointResult res = joint_optimize(sc, n_max);
    const double gap = rel_diff(res.best.cost_z, oracle.cost);
    worst_joint = std::max(worst_joint, gap);
    if (gap > 1e-6 || res.best.cost_z > oracle.cost * (1 + 1e-9) ||
        res.best.n_cores != oracle.n_cores)
      ++joint_bad;
  }
  v.detail << " scenarios=" << scenarios << " (drawn " << draws << ")"
           << " worst solver excess=" << worst_solver << " worst joint gap=" << worst_joint;
  v.expect(solver_bad == 0, std::to_string(solver_bad) + " solver results above the grid minimum");
  v.expect(joint_bad == 0, std::to_string(joint_bad) + " joint results differ from exhaustive search");
}

// 5. Simulator against the analytic model.
void simulation_vs_analytic(Verdict& v) {
  const double lambdas[] = {0.5, 1.0, 1.5};
  int checks = 0, misses = 0;
  for (const auto dist : {SizeDistribution::kExponential, SizeDistribution::kDeterministic}) {
    for (int i = 0; i < 10; ++i) {
      const double rho = 0.1 + 0.8 * i / 9.0;
      Scenario sc = reference_scenario(1);
      sc.traffic.arrival_rate = lambdas[i % 3];
      const double rate = sc.traffic.offered_bps() / rho;
      const int n = cores_for_rate(sc.compute, rate);
      SimConfig cfg;
      cfg.traffic = sc.traffic;
      cfg.rate_bps = rate;
      cfg.profile = sc.with_cores(n).profile();
      cfg.size_distribution = dist;
      cfg.warmup_fraction = 0.1;
      cfg.n_arrivals = 111113;  // leaves 100002 arrivals after warmup
      cfg.rng_seed = 9001 + static_cast<std::uint64_t>(i);
      const ValidationReport rep = validate_against_analytic(cfg, 0.99);
      for (const MetricCheck& c : rep.checks) {
        ++checks;
        if (!c.inside) {
          ++misses;
          v.detail << " miss:" << to_string(dist) << ":rho=" << rho << ":" << c.name
                   << " analytic=" << c.analytic << " sim=" << c.simulated
                   << " +-" << c.halfwidth;
        }
      }
    }
  }
  v.detail << " " << checks - misses << "/" << checks << " inside";
  v.expect(misses == 0 && checks == 100, "analytic value outside the 99% interval");
}

// 6. Lambert W residuals.
void lambert_kernel(Verdict& v) {
  const double inv_e = 0.36787944117144233;
  std::vector<double> xs;
  for (int i = 0; i < 3000; ++i) {
    const double t = i / 3000.0;
    xs.push_back(-inv_e + inv_e * t * t * t);
  }
  for (const double x : log_grid(1e-12, 1e10, 7000)) xs.push_back(x);
  double worst = 0.0;
  for (const double x : xs) {
    const long double w = lambert_w0(x);
    const long double resid = std::fabs(w * std::exp(w) - static_cast<long double>(x));
    worst = std::max(worst, static_cast<double>(resid / std::max(1.0L, std::fabs((long double)x))));
  }
  v.detail << " points=" << xs.size() << " worst scaled residual=" << worst;
  v.expect(xs.size() == 10000, "grid size");
  v.expect(worst <= 1e-12, "residual above 1e-12");
  v.expect(std::abs(lambert_w0(-inv_e) + 1.0) <= 1e-12, "W(-1/e) != -1");
  v.expect(std::abs(lambert_w0(std::numbers::e) - 1.0) <= 1e-12, "W(e) != 1");
}

// 7. Structural properties over random inputs.
void structural(Verdict& v) {
  std::mt19937_64 rng(77);
  int kappa_bad = 0, core_bad = 0, compose_bad = 0, trip_bad = 0;
  for (int k = 0; k < 2000; ++k) {
    Scenario sc = random_scenario(rng);
    const int n = static_cast<int>(test::uniform(rng, 1, 9));
    if (energy_optimal_exists(sc, n).exists) {
      Scenario heavy = sc;
      heavy.compute.kappa *= test::uniform(rng, 0.1, 10);
      if (rel_diff(energy_optimal_rate(heavy, n), energy_optimal_rate(sc, n)) > 1e-15) ++kappa_bad;
    }

    const double r_max = max_supportable_rate(sc.compute.with_cores(n));
    const double floor = stability_floor(sc.traffic);
    if (r_max > floor) {
      const double r = test::uniform(rng, floor, r_max);
      const TradeoffPoint a = evaluate_point(sc, n, r);
      const TradeoffPoint b = evaluate_point(sc, n + 1, r);
      const double expected = a.rho * sc.compute.p_core_min;
      // The difference of two large costs carries rounding of order eps * z.
      const double allowed = 1e-9 * expected + 1e-12 * std::max(a.cost_z, b.cost_z);
      if (std::abs((b.cost_z - a.cost_z) - expected) > allowed) ++core_bad;

      const ComputeParams c = sc.compute.with_cores(n);
      const double delta = (c.p_core_max - c.p_core_min) / std::pow(c.ref_speed, c.beta);
      const double direct = n * c.p_core_min +
                            delta * (c.c0 + c.kappa * r) * std::pow(c.cpu_speed, c.beta - 1);
      if (rel_diff(bbu_power_from_load(c, cpu_load(c, r)), direct) > 1e-12 ||
          rel_diff(bbu_power(c, r), direct) > 1e-12)
        ++compose_bad;
    }

    const double g = test::log_uniform(rng, 1e-3, 1e3);
    const double w = test::log_uniform(rng, 1e5, 1e8);
    const double p = test::log_uniform(rng, 1e-6, 1e3);
    if (rel_diff(pout_for_rate(g, w, rate_for_pout(g, w, p)), p) > 1e-12) ++trip_bad;
  }
  v.detail << " kappa=" << kappa_bad << " per-core=" << core_bad << " composition=" << compose_bad
           << " round-trip=" << trip_bad << " violations over 2000 draws";
  v.expect(kappa_bad + core_bad + compose_bad + trip_bad == 0, "property violated");
}

}  // namespace

int main() {
  bool ok = true;
  ok &= run_criterion(1, "savings at the CBS energy-optimal delay", 1, savings_at_cbs_optimum);
  ok &= run_criterion(2, "minimum-power savings above 60%", 5, savings_at_min_power);
  ok &= run_criterion(3, "single-minimum / monotone / asymptote", 10, proposition_suite);
  ok &= run_criterion(4, "solvers match brute force on 200 scenarios", 120, solver_vs_oracle);
  ok &= run_criterion(5, "simulation inside 99% intervals", 300, simulation_vs_analytic);
  ok &= run_criterion(6, "Lambert W residuals", 10, lambert_kernel);
  ok &= run_criterion(7, "structural invariants", 10, structural);
  std::printf("%s\n", ok ? "ALL PASS" : "SOME CRITERIA FAILED");
  return ok ? 0 : 1;
}
