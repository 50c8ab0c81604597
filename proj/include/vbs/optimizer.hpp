#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vbs/power_models.hpp"
#include "vbs/queueing_cost.hpp"
#include "vbs/radio_link.hpp"
#include "vbs/traffic.hpp"

namespace vbs {

/// Everything needed to evaluate z(r, N_c) for one VBS. compute.n_cores is
/// the core count used by the single-N_c operations.
struct Scenario {
  ComputeParams compute;
  RadioParams radio;
  LinkBudget link;
  TrafficParams traffic;
  double alpha = 0.0;  // W per queued flow

  void validate() const;
  double gain() const { return link.channel_gain(); }
  Scenario with_cores(int n) const;
  BusyPowerProfile profile() const;
};

struct TradeoffPoint {
  double rate_bps = 0.0;
  int n_cores = 0;
  double rho = 0.0;
  double mean_queue_len = 0.0;
  double mean_delay_s = 0.0;
  double avg_power_w = 0.0;
  double cost_z = 0.0;
};

/// Full evaluation of one operating point; raises on any infeasibility.
TradeoffPoint evaluate_point(const Scenario& sc, int n_cores, double rate_bps);

/// Lowest rate the searches will consider: lambda L (1 + 1e-9).
double stability_floor(const TrafficParams& t);

/// (N_c s - c0) / kappa; raises kInfeasibleScenario when N_c s <= c0.
double max_supportable_rate(const ComputeParams& c);

/// Fewest cores whose max supportable rate reaches rate_bps.
int cores_for_rate(const ComputeParams& c, double rate_bps);

/// Omega(alpha g eta / e (r / (r - lambda L))^2 + (g eta P_s - 1) / e)
///   - (r ln2 / W - 1)
/// at sc.compute.n_cores. Positive means z still decreases in r. Raises
/// kDomain when the Omega argument falls below -1/e.
double optimality_gap(const Scenario& sc, double rate_bps);

/// Unique stationary point of z(., N_c) on (lambda L, inf), to ~1e-15
/// relative. alpha == 0 returns energy_optimal_rate.
double solve_optimal_rate(const Scenario& sc, int n_cores);

struct ExistenceReport {
  bool exists = false;
  std::string reason;
  double arrival_rate_bound = 0.0;  // flows/s, +inf when E_sw == 0
  double file_size_bound = 0.0;     // bits; NaN when not evaluable
};

ExistenceReport energy_optimal_exists(const Scenario& sc, int n_cores);

/// (W / ln2) [Omega((g eta P_s - 1) / e) + 1]; raises kNoEnergyOptimum when
/// energy_optimal_exists fails.
double energy_optimal_rate(const Scenario& sc, int n_cores);

/// Limit of E{P} as the delay grows without bound (r -> lambda L).
double asymptotic_power(const Scenario& sc, int n_cores);

/// Energy-optimal rate of any profile with an affine busy form, e.g. the
/// EARTH baseline. Raises kNoEnergyOptimum if E{P} has no interior minimum.
double profile_energy_optimal_rate(const BusyPowerProfile& profile,
                                   double gain, double bandwidth_hz,
                                   const TrafficParams& t);

/// argmin_r z(r, N_c) ignoring the core capacity. Falls back to the stability
/// floor when z is increasing on the whole stable range.
double unconstrained_argmin_rate(const Scenario& sc, int n_cores);

struct Candidate {
  TradeoffPoint point;
  bool clamped = false;  // rate held at the max supportable rate
};

struct JointResult {
  TradeoffPoint best;
  std::vector<Candidate> candidates;
};

/// Joint (r, N_c) search: walk N_c upwards, clamping to the max supportable
/// rate until the unconstrained optimum fits, then pick the cheapest
/// candidate (fewest cores on ties within 1e-9 relative).
JointResult joint_optimize(const Scenario& sc, int n_cores_max);

struct CurvePoint {
  double target_delay_s = 0.0;
  std::optional<TradeoffPoint> point;
  std::string status = "ok";
};

/// Rate that yields mean delay D: r = lambda L + L / D.
double rate_for_delay(const TrafficParams& t, double delay_s);

/// One point per target delay. With n_cores unset each point uses the fewest
/// cores (at most n_cores_max) that support its rate. Infeasible points carry
/// a status instead of a value.
std::vector<CurvePoint> tradeoff_curve(const Scenario& sc,
                                       std::optional<int> n_cores,
                                       std::span<const double> delays_s,
                                       int n_cores_max = 64);

}  // namespace vbs
