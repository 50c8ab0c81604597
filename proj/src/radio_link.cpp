#include "vbs/radio_link.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vbs/errors.hpp"

namespace vbs {

double path_loss_db(double distance_m, double carrier_freq_hz) {
  if (!(distance_m > 0.0))
    raise(ErrorKind::kDomain, "path loss needs a positive distance, got " +
                                  std::to_string(distance_m));
  require(carrier_freq_hz > 0.0, "carrier frequency must be positive");
  double db = 128.1 + 37.6 * std::log10(distance_m / 1000.0);
  if (carrier_freq_hz != 2e9) db += 21.0 * std::log10(carrier_freq_hz / 2e9);
  return db > 0.0 ? db : 0.0;
}

double path_loss_linear(double distance_m, double carrier_freq_hz) {
  return db_to_linear(path_loss_db(distance_m, carrier_freq_hz));
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

LinkBudget::LinkBudget(const LinkInputs& in) {
  require(in.cell_radius_m > 0.0, "cell radius must be positive");
  require(in.bandwidth_hz > 0.0, "bandwidth must be positive");
  carrier_freq_hz_ = in.carrier_freq_hz;
  cell_radius_m_ = in.cell_radius_m;
  path_loss_ = path_loss_linear(in.cell_radius_m, in.carrier_freq_hz);
  noise_figure_ = db_to_linear(in.noise_figure_db);
  noise_density_ = dbm_to_watts(in.noise_density_dbm_per_hz);
  bandwidth_hz_ = in.bandwidth_hz;
  finish();
}

LinkBudget LinkBudget::from_linear(double path_loss, double noise_figure,
                                   double noise_density_w_per_hz,
                                   double bandwidth_hz) {
  require(path_loss >= 1.0, "linear path loss must be >= 1");
  require(noise_figure >= 1.0, "linear noise figure must be >= 1");
  require(noise_density_w_per_hz > 0.0, "noise density must be positive");
  require(bandwidth_hz > 0.0, "bandwidth must be positive");
  LinkBudget lb{Raw{}};
  lb.path_loss_ = path_loss;
  lb.noise_figure_ = noise_figure;
  lb.noise_density_ = noise_density_w_per_hz;
  lb.bandwidth_hz_ = bandwidth_hz;
  lb.finish();
  return lb;
}

void LinkBudget::finish() {
  gain_ = 1.0 / (path_loss_ * noise_figure_ * noise_density_ * bandwidth_hz_);
  require(std::isfinite(gain_) && gain_ > 0.0, "channel gain must be finite");
}

double rate_for_pout(double gain, double bandwidth_hz, double p_out_w) {
  require(p_out_w >= 0.0, "transmit power must be non-negative");
  return bandwidth_hz * std::log1p(gain * p_out_w) / std::numbers::ln2;
}

double pout_for_rate(double gain, double bandwidth_hz, double rate_bps,
                     double exponent_limit) {
  require(rate_bps >= 0.0, "rate must be non-negative");
  const double spectral = rate_bps / bandwidth_hz;
  if (spectral > exponent_limit)
    raise(ErrorKind::kDomain, "spectral efficiency " + std::to_string(spectral) +
                                  " b/s/Hz exceeds the exponent limit");
  return std::expm1(spectral * std::numbers::ln2) / gain;
}

}  // namespace vbs
