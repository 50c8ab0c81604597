#pragma once

#include <cmath>
#include <random>

#include "vbs/optimizer.hpp"
#include "vbs/queueing_cost.hpp"

namespace vbs::test {

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Reference scenario: default parameter set, lambda = 1 /s, L = 2 MB.
inline Scenario reference_scenario(int n_cores = 2, double alpha = 0.0) {
  Scenario sc{ComputeParams{}, RadioParams{}, LinkBudget{}, TrafficParams{},
              alpha};
  sc.compute.n_cores = n_cores;
  return sc;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

}  // namespace vbs::test

#include <limits>
#include <vector>

namespace vbs::test {

/// Brute-force min of z(r, n) over `points` rates in [floor, r_hi], spaced
/// geometrically in r - lambda L so both the heavy-traffic end and the
/// high-rate end are resolved. Returns {z, r}.
inline std::pair<double, double> grid_min_cost(const Scenario& sc, int n, double r_hi,
                                               int points) {
  // Composed from the parts and without the core-capacity check, so the grid
  // can run past the max supportable rate.
  const Scenario s = sc.with_cores(n);
  const double g = s.gain();
  BusyPowerProfile prof = s.profile();
  prof.busy_power = [s, g](double r) {
    return bbu_power(s.compute, r, LoadCheck::kPermissive) +
           rrh_power(s.radio, pout_for_rate(g, s.radio.bandwidth, r));
  };
  const double lam_l = sc.traffic.offered_bps();
  const double lo = stability_floor(sc.traffic) - lam_l;
  const double hi = r_hi - lam_l;
  std::pair<double, double> best{std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i < points; ++i) {
    const double r =
        i == points - 1 ? r_hi : lam_l + lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    const double z = system_cost(prof, sc.traffic, sc.alpha, r);
    if (z < best.first) best = {z, r};
  }
  return best;
}

struct ExhaustiveResult {
  double cost = std::numeric_limits<double>::infinity();
  double rate = 0.0;
  int n_cores = 0;
};

/// Every core count, every rate on a fine grid; no use of the stationarity
/// condition.
inline ExhaustiveResult exhaustive_joint(const Scenario& sc, int n_cores_max, int points) {
  ExhaustiveResult best;
  for (int n = 1; n <= n_cores_max; ++n) {
    const ComputeParams c = sc.compute.with_cores(n);
    if (!(n * c.cpu_speed > c.c0)) continue;
    const double r_max = (n * c.cpu_speed - c.c0) / c.kappa;
    if (r_max < stability_floor(sc.traffic)) continue;
    const auto [z, r] = grid_min_cost(sc, n, r_max, points);
    if (z < best.cost) best = {z, r, n};
  }
  return best;
}

}  // namespace vbs::test
