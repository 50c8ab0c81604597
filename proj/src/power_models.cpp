#include "vbs/power_models.hpp"

#include <cmath>
#include <sstream>

#include "vbs/errors.hpp"

namespace vbs {

namespace {

// Absorbs rounding when r sits exactly on the max supportable rate.
constexpr double kLoadSlack = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void TrafficParams::validate() const {
  require(arrival_rate > 0.0 && std::isfinite(arrival_rate),
          "arrival rate must be positive");
  require(mean_file_size_bits > 0.0 && std::isfinite(mean_file_size_bits),
          "mean file size must be positive");
}

void ComputeParams::validate() const {
  require(n_cores >= 1, "n_cores must be >= 1");
  require(cpu_speed > 0.0, "cpu speed must be positive");
  require(ref_speed > 0.0, "reference speed must be positive");
  require(p_core_min > 0.0 && p_core_min <= p_core_max,
          "need 0 < p_core_min <= p_core_max");
  require(beta >= 1.0, "beta must be >= 1");
  require(c0 >= 0.0, "c0 must be non-negative");
  require(kappa > 0.0, "kappa must be positive");
}

void RadioParams::validate() const {
  require(pa_efficiency > 0.0 && pa_efficiency <= 1.0,
          "PA efficiency must lie in (0, 1]");
  require(p_rf >= 0.0, "RF circuit power must be non-negative");
  require(p_sleep >= 0.0, "sleep power must be non-negative");
  require(p_out_max > 0.0, "p_out_max must be positive");
  require(bandwidth > 0.0, "bandwidth must be positive");
  require(switch_energy >= 0.0, "switching energy must be non-negative");
}

void EarthParams::validate() const {
  require(n_trx >= 1, "n_trx must be >= 1");
  require(p_sleep >= 0.0 && p0 > p_sleep, "need p0 > p_sleep >= 0");
  require(delta_p > 0.0, "delta_p must be positive");
  require(p_out_max > 0.0, "p_out_max must be positive");
  require(switch_energy >= 0.0, "switching energy must be non-negative");
}

double delta_pb(const ComputeParams& c) {
  return (c.p_core_max - c.p_core_min) / std::pow(c.ref_speed, c.beta);
}

double cpu_load(const ComputeParams& c, double rate_bps, LoadCheck check) {
  require(rate_bps >= 0.0, "rate must be non-negative");
  const double load = (c.c0 + c.kappa * rate_bps) /
                      (static_cast<double>(c.n_cores) * c.cpu_speed);
  if (check == LoadCheck::kStrict && load > 1.0 + kLoadSlack)
    raise(ErrorKind::kInfeasibleLoad,
          "CPU load " + fmt(load) + " exceeds " + std::to_string(c.n_cores) +
              " core(s) at rate " + fmt(rate_bps) + " bit/s");
  return load;
}

double bbu_power_from_load(const ComputeParams& c, double load) {
  return c.n_cores *
         (c.p_core_min + delta_pb(c) * load * std::pow(c.cpu_speed, c.beta));
}

double bbu_rate_slope(const ComputeParams& c) {
  return delta_pb(c) * c.kappa * std::pow(c.cpu_speed, c.beta - 1.0);
}

double bbu_power(const ComputeParams& c, double rate_bps, LoadCheck check) {
  cpu_load(c, rate_bps, check);
  const double scale = delta_pb(c) * std::pow(c.cpu_speed, c.beta - 1.0);
  return c.n_cores * c.p_core_min + scale * c.c0 + scale * c.kappa * rate_bps;
}

double rrh_power(const RadioParams& rp, double p_out_w) {
  require(p_out_w >= 0.0, "transmit power must be non-negative");
  if (p_out_w > rp.p_out_max)
    raise(ErrorKind::kCapExceeded, "transmit power " + fmt(p_out_w) +
                                       " W exceeds cap " + fmt(rp.p_out_max));
  return p_out_w / rp.pa_efficiency + rp.p_rf;
}

double static_power(const ComputeParams& c, const RadioParams& rp) {
  return c.n_cores * c.p_core_min +
         delta_pb(c) * c.c0 * std::pow(c.cpu_speed, c.beta - 1.0) + rp.p_rf;
}

double sleep_adjusted_power(const ComputeParams& c, const RadioParams& rp,
                            const TrafficParams& t) {
  require(t.arrival_rate >= 0.0, "arrival rate must be non-negative");
  return static_power(c, rp) - rp.p_sleep -
         2.0 * t.arrival_rate * rp.switch_energy;
}

double vbs_busy_power(const ComputeParams& c, const RadioParams& rp,
                      double gain, double rate_bps) {
  require(rate_bps > 0.0, "busy power needs a positive rate");
  const double p_out = pout_for_rate(gain, rp.bandwidth, rate_bps);
  return bbu_power(c, rate_bps) + rrh_power(rp, p_out);
}

double earth_busy_power(const EarthParams& e, double p_out_w) {
  require(p_out_w >= 0.0, "transmit power must be non-negative");
  if (p_out_w > e.p_out_max)
    raise(ErrorKind::kCapExceeded, "transmit power " + fmt(p_out_w) +
                                       " W exceeds cap " + fmt(e.p_out_max));
  return e.n_trx * e.p0 + e.delta_p * p_out_w;
}

BusyPowerProfile make_vbs_profile(const ComputeParams& c, const RadioParams& rp,
                                  double gain) {
  c.validate();
  rp.validate();
  BusyPowerProfile p;
  p.name = "vbs";
  p.busy_power = [c, rp, gain](double r) {
    return vbs_busy_power(c, rp, gain, r);
  };
  p.sleep_power = rp.p_sleep;
  p.switch_energy = rp.switch_energy;
  p.affine = AffineBusyForm{static_power(c, rp), bbu_rate_slope(c),
                            1.0 / rp.pa_efficiency};
  return p;
}

BusyPowerProfile make_earth_profile(const EarthParams& e, double gain,
                                    double bandwidth_hz) {
  e.validate();
  BusyPowerProfile p;
  p.name = "earth";
  p.busy_power = [e, gain, bandwidth_hz](double r) {
    return earth_busy_power(e, pout_for_rate(gain, bandwidth_hz, r));
  };
  p.sleep_power = e.n_trx * e.p_sleep;
  p.switch_energy = e.switch_energy;
  p.affine = AffineBusyForm{e.n_trx * e.p0, 0.0, e.delta_p};
  return p;
}

}  // namespace vbs
