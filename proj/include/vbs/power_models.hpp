#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "vbs/radio_link.hpp"
#include "vbs/traffic.hpp"

namespace vbs {

/// CPU side of a virtual base station. Defaults are the commodity-server
/// values used throughout the project (2 GHz cores drawing 5..20 W).
struct ComputeParams {
  int n_cores = 1;
  double cpu_speed = 2e9;      // instructions/s
  double ref_speed = 2e9;      // instructions/s
  double p_core_max = 20.0;    // W
  double p_core_min = 5.0;     // W
  double beta = 2.0;           // speed-scaling exponent, >= 1
  double c0 = 7e8;             // instructions/s, rate independent
  double kappa = 35.0;         // instructions/bit

  void validate() const;
  ComputeParams with_cores(int n) const {
    ComputeParams c = *this;
    c.n_cores = n;
    return c;
  }
};

struct RadioParams {
  double pa_efficiency = 0.311;
  double p_rf = 12.9;      // W
  double p_sleep = 6.45;   // W, whole VBS while asleep
  double p_out_max = std::numeric_limits<double>::infinity();
  double bandwidth = 20e6; // Hz
  double switch_energy = 5.0;  // J per on<->off transition

  void validate() const;
};

/// Conventional base station parameters for the load-dependent EARTH model.
struct EarthParams {
  int n_trx = 1;
  double p0 = 84.0;
  double delta_p = 2.8;
  double p_sleep = 56.0;
  double p_out_max = std::numeric_limits<double>::infinity();
  double switch_energy = 5.0;

  void validate() const;
};

/// Busy power of the form static + slope * r + drive * p_out(r). Both the VBS
/// and the EARTH model fit it, which is what makes the stationary-rate
/// condition closed form for either.
struct AffineBusyForm {
  double static_w = 0.0;
  double rate_slope = 0.0;    // W per bit/s
  double drive_factor = 1.0;  // supply watts per radiated watt
};

struct BusyPowerProfile {
  std::string name;
  std::function<double(double)> busy_power;  // rate (bit/s) -> W
  double sleep_power = 0.0;
  double switch_energy = 0.0;
  std::optional<AffineBusyForm> affine;
};

enum class LoadCheck { kStrict, kPermissive };

/// (P_BM - P_Bm) / s0^beta.
double delta_pb(const ComputeParams& c);

/// (c0 + kappa r) / (N_c s). Strict mode raises kInfeasibleLoad above 1.
double cpu_load(const ComputeParams& c, double rate_bps,
                LoadCheck check = LoadCheck::kStrict);

/// Per-core form N_c (P_Bm + dP rho_c s^beta), taking the load directly.
double bbu_power_from_load(const ComputeParams& c, double load);

/// Expanded form N_c P_Bm + dP c0 s^(beta-1) + dP kappa r s^(beta-1).
double bbu_power(const ComputeParams& c, double rate_bps,
                 LoadCheck check = LoadCheck::kStrict);

/// Slope of bbu_power in r.
double bbu_rate_slope(const ComputeParams& c);

/// p_out / eta + P_RF.
double rrh_power(const RadioParams& rp, double p_out_w);

/// Busy power with the rate terms removed: N_c P_Bm + dP c0 s^(beta-1) + P_RF.
double static_power(const ComputeParams& c, const RadioParams& rp);

/// P_o - P_sleep - 2 lambda E_sw; negative values are meaningful.
double sleep_adjusted_power(const ComputeParams& c, const RadioParams& rp,
                            const TrafficParams& t);

double vbs_busy_power(const ComputeParams& c, const RadioParams& rp,
                      double gain, double rate_bps);

double earth_busy_power(const EarthParams& e, double p_out_w);

BusyPowerProfile make_vbs_profile(const ComputeParams& c, const RadioParams& rp,
                                  double gain);
BusyPowerProfile make_earth_profile(const EarthParams& e, double gain,
                                    double bandwidth_hz);

}  // namespace vbs
