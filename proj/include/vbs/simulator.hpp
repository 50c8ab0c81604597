#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vbs/power_models.hpp"
#include "vbs/queueing_cost.hpp"
#include "vbs/traffic.hpp"

namespace vbs {

enum class SizeDistribution { kExponential, kDeterministic, kBoundedPareto };

SizeDistribution parse_size_distribution(const std::string& name);
std::string to_string(SizeDistribution d);

struct SimConfig {
  TrafficParams traffic;
  double rate_bps = 0.0;
  BusyPowerProfile profile;
  SizeDistribution size_distribution = SizeDistribution::kExponential;
  std::uint64_t n_arrivals = 100000;  // including the warmup prefix
  double warmup_fraction = 0.1;
  std::uint64_t rng_seed = 42;
  int n_batches = 20;
  // Bounded Pareto shape and max/min size ratio; the minimum is solved so the
  // mean equals traffic.mean_file_size_bits.
  double pareto_shape = 1.5;
  double pareto_span = 1e3;
  // Optional event trace, CSV rows "time,event,queue_len,energy_j".
  std::ostream* trace = nullptr;

  void validate() const;
};

/// Batch-means estimate of one steady-state quantity.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std of batch means / sqrt(batches)
  int batches = 0;

  /// Student-t confidence halfwidth at the given two-sided level.
  double halfwidth(double confidence = 0.95) const;
};

struct SimStats {
  Estimate mean_queue_len;
  Estimate mean_delay_s;
  Estimate mean_power_w;
  Estimate busy_fraction;
  Estimate mean_cycle_s;
  std::uint64_t cycles_observed = 0;

  // Whole-run counters at the last arrival.
  std::uint64_t flows_admitted = 0;
  std::uint64_t flows_completed = 0;
  std::uint64_t flows_in_system_at_end = 0;

  // Measurement-window bookkeeping.
  double window_s = 0.0;
  double busy_time_s = 0.0;
  double sleep_time_s = 0.0;
  double busy_power_w = 0.0;
  double total_energy_j = 0.0;  // accumulated segment by segment
};

/// Event-driven M/G/1-PS run with a sleeping server. With n flows present each
/// is served at r / n; the server draws busy power while n > 0, sleep power
/// otherwise, and is charged 2 E_sw whenever a busy period ends. Statistics
/// cover the interval from the first post-warmup arrival to the last arrival,
/// split into equal-length batches. Same seed, same bits.
SimStats simulate(const SimConfig& cfg);

struct MetricCheck {
  std::string name;
  double analytic = 0.0;
  double simulated = 0.0;
  double halfwidth = 0.0;
  bool inside = false;
};

struct ValidationReport {
  SimStats stats;
  double confidence = 0.99;
  std::vector<MetricCheck> checks;
  bool passed = false;
};

/// Runs the simulation and checks that E{n}, E{D}, E{P}, rho and E{T_c} from
/// the analytic model fall inside the simulated confidence intervals.
ValidationReport validate_against_analytic(const SimConfig& cfg,
                                           double confidence = 0.99);

}  // namespace vbs
