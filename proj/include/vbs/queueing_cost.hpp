#pragma once

#include "vbs/power_models.hpp"
#include "vbs/traffic.hpp"

namespace vbs {

/// Steady-state M/G/1-PS metrics for a server that sleeps whenever empty.
struct QueueMetrics {
  double rho = 0.0;
  double mean_queue_len = 0.0;
  double mean_delay = 0.0;   // s
  double mean_cycle = 0.0;   // s, one idle period plus the following busy period
  double p_active = 0.0;
  double p_sleep = 0.0;
};

/// Raises kUnstableQueue unless rate_bps > lambda L.
QueueMetrics queue_metrics(const TrafficParams& t, double rate_bps);

/// rho P_busy(r) + (1 - rho) P_sleep + 2 E_sw / E{T_c}, with
/// E{T_c} = 1 / (lambda (1 - rho)).
double average_power(const BusyPowerProfile& profile, const TrafficParams& t,
                     double rate_bps);

/// z = E{P} + alpha E{n}; alpha is in watts per queued flow.
double system_cost(const BusyPowerProfile& profile, const TrafficParams& t,
                   double alpha, double rate_bps);

}  // namespace vbs
