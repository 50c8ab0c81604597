#include "vbs/comparison.hpp"

#include <ostream>

#include "vbs/errors.hpp"
#include "vbs/queueing_cost.hpp"
#include "vbs/result_row.hpp"

namespace vbs {

namespace {

ComparisonRow vbs_vs_cbs(const ScenarioConfig& cfg, double vbs_rate,
                         int vbs_cores, double cbs_rate) {
  const Scenario sc = cfg.scenario();
  const BusyPowerProfile cbs = cfg.earth_profile();
  const TradeoffPoint v = evaluate_point(sc, vbs_cores, vbs_rate);
  ComparisonRow row;
  row.vbs_delay_s = v.mean_delay_s;
  row.vbs_rate_bps = vbs_rate;
  row.vbs_n_cores = vbs_cores;
  row.vbs_power_w = v.avg_power_w;
  row.cbs_rate_bps = cbs_rate;
  row.cbs_delay_s = queue_metrics(cfg.traffic, cbs_rate).mean_delay;
  row.cbs_power_w = average_power(cbs, cfg.traffic, cbs_rate);
  row.savings = 1.0 - row.vbs_power_w / row.cbs_power_w;
  return row;
}

double cbs_energy_optimal_rate(const ScenarioConfig& cfg) {
  const Scenario sc = cfg.scenario();
  return profile_energy_optimal_rate(cfg.earth_profile(), sc.gain(),
                                     sc.link.bandwidth_hz(), cfg.traffic);
}

}  // namespace

ComparisonRow compare_profiles(const BusyPowerProfile& a,
                               const BusyPowerProfile& b,
                               const TrafficParams& t, double rate_bps) {
  ComparisonRow row;
  row.policy = "rate";
  row.vbs_rate_bps = row.cbs_rate_bps = rate_bps;
  row.vbs_delay_s = row.cbs_delay_s = queue_metrics(t, rate_bps).mean_delay;
  row.vbs_power_w = average_power(a, t, rate_bps);
  row.cbs_power_w = average_power(b, t, rate_bps);
  row.savings = 1.0 - row.vbs_power_w / row.cbs_power_w;
  return row;
}

ComparisonRow compare_at_delay(const ScenarioConfig& cfg, double delay_s) {
  const double r = rate_for_delay(cfg.traffic, delay_s);
  const int n = cores_for_rate(cfg.compute, r);
  if (n > cfg.run.cores_max)
    raise(ErrorKind::kInfeasibleLoad,
          "delay needs more than " + std::to_string(cfg.run.cores_max) +
              " cores");
  ComparisonRow row = vbs_vs_cbs(cfg, r, n, r);
  row.policy = "grid";
  return row;
}

ComparisonRow compare_cbs_optimal(const ScenarioConfig& cfg) {
  const double r = cbs_energy_optimal_rate(cfg);
  const int n = cores_for_rate(cfg.compute, r);
  if (n > cfg.run.cores_max)
    raise(ErrorKind::kInfeasibleLoad,
          "CBS-optimal rate needs more than " +
              std::to_string(cfg.run.cores_max) + " cores");
  ComparisonRow row = vbs_vs_cbs(cfg, r, n, r);
  row.policy = "cbs-optimal";
  return row;
}

ComparisonRow compare_min_power(const ScenarioConfig& cfg) {
  Scenario sc = cfg.scenario();
  sc.alpha = 0.0;
  const TradeoffPoint best = joint_optimize(sc, cfg.run.cores_max).best;
  double cbs_rate = stability_floor(cfg.traffic);
  try {
    cbs_rate = cbs_energy_optimal_rate(cfg);
  } catch (const ModelError& e) {
    // CBS power then falls monotonically with delay; its infimum sits at the
    // stability floor.
    if (e.kind() != ErrorKind::kNoEnergyOptimum) throw;
  }
  ComparisonRow row = vbs_vs_cbs(cfg, best.rate_bps, best.n_cores, cbs_rate);
  row.policy = "min-power";
  return row;
}

void write_comparison_header(std::ostream& out) {
  out << "scenario_id,policy,vbs_delay_s,vbs_rate_bps,vbs_n_cores,vbs_power_w,"
         "cbs_delay_s,cbs_rate_bps,cbs_power_w,savings,status\n";
}

void write_comparison_row(std::ostream& out, const std::string& scenario_id,
                          const ComparisonRow& row) {
  out << scenario_id << ',' << row.policy << ',';
  if (row.status == "ok") {
    out << format_double(row.vbs_delay_s) << ','
        << format_double(row.vbs_rate_bps) << ',' << row.vbs_n_cores << ','
        << format_double(row.vbs_power_w) << ','
        << format_double(row.cbs_delay_s) << ','
        << format_double(row.cbs_rate_bps) << ','
        << format_double(row.cbs_power_w) << ','
        << format_double(row.savings);
  } else {
    out << format_double(row.vbs_delay_s) << ",,,,,,,";
  }
  out << ',' << row.status << '\n';
}

}  // namespace vbs
