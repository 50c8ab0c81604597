#include "vbs/queueing_cost.hpp"

#include <cmath>
#include <string>

#include "vbs/errors.hpp"

namespace vbs {

QueueMetrics queue_metrics(const TrafficParams& t, double rate_bps) {
  t.validate();
  const double offered = t.offered_bps();
  if (!(rate_bps > offered))
    raise(ErrorKind::kUnstableQueue,
          "rate " + std::to_string(rate_bps) +
              " bit/s does not exceed offered load " + std::to_string(offered));
  QueueMetrics m;
  m.rho = offered / rate_bps;
  // lambda L / (r - lambda L) is better conditioned than rho / (1 - rho).
  m.mean_queue_len = offered / (rate_bps - offered);
  m.mean_delay = m.mean_queue_len / t.arrival_rate;
  m.p_active = m.rho;
  m.p_sleep = (rate_bps - offered) / rate_bps;
  m.mean_cycle = 1.0 / (t.arrival_rate * m.p_sleep);
  return m;
}

double average_power(const BusyPowerProfile& profile, const TrafficParams& t,
                     double rate_bps) {
  const QueueMetrics m = queue_metrics(t, rate_bps);
  return m.p_active * profile.busy_power(rate_bps) +
         m.p_sleep * profile.sleep_power +
         2.0 * profile.switch_energy / m.mean_cycle;
}

double system_cost(const BusyPowerProfile& profile, const TrafficParams& t,
                   double alpha, double rate_bps) {
  require(alpha >= 0.0, "alpha must be non-negative");
  const QueueMetrics m = queue_metrics(t, rate_bps);
  return average_power(profile, t, rate_bps) + alpha * m.mean_queue_len;
}

}  // namespace vbs
