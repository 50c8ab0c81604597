#pragma once

#include <iosfwd>
#include <string>

#include "vbs/optimizer.hpp"
#include "vbs/power_models.hpp"
#include "vbs/scenario_file.hpp"

namespace vbs {

/// VBS against a conventional base station (CBS) on the same traffic.
struct ComparisonRow {
  std::string policy;
  double vbs_delay_s = 0.0;
  double vbs_rate_bps = 0.0;
  int vbs_n_cores = 0;
  double vbs_power_w = 0.0;
  double cbs_delay_s = 0.0;
  double cbs_rate_bps = 0.0;
  double cbs_power_w = 0.0;
  double savings = 0.0;  // 1 - P_vbs / P_cbs
  std::string status = "ok";
};

/// Average power of two arbitrary profiles at one rate.
ComparisonRow compare_profiles(const BusyPowerProfile& a,
                               const BusyPowerProfile& b,
                               const TrafficParams& t, double rate_bps);

/// Both systems at the same mean delay; the VBS uses the fewest cores that
/// carry the rate.
ComparisonRow compare_at_delay(const ScenarioConfig& cfg, double delay_s);

/// Both systems at the delay that minimizes the CBS average power.
ComparisonRow compare_cbs_optimal(const ScenarioConfig& cfg);

/// Each system at its own minimum average power over rate (and, for the VBS,
/// core count up to run.cores_max).
ComparisonRow compare_min_power(const ScenarioConfig& cfg);

void write_comparison_header(std::ostream& out);
void write_comparison_row(std::ostream& out, const std::string& scenario_id,
                          const ComparisonRow& row);

}  // namespace vbs
